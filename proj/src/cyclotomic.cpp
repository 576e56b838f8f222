#include "rhombus/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rhombus/error.hpp"

namespace rhombus {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidBasis: return "INVALID_BASIS";
        case ErrorCode::BasisMismatch: return "BASIS_MISMATCH";
        case ErrorCode::InvalidShape: return "INVALID_SHAPE";
        case ErrorCode::InvalidPatch: return "INVALID_PATCH";
        case ErrorCode::InvalidTileset: return "INVALID_TILESET";
        case ErrorCode::Overlap: return "OVERLAP";
        case ErrorCode::NotParallel: return "NOT_PARALLEL";
        case ErrorCode::NotBoundary: return "NOT_BOUNDARY";
        case ErrorCode::NotAVertex: return "NOT_A_VERTEX";
        case ErrorCode::RankExceedsKnownPrefix: return "RANK_EXCEEDS_KNOWN_PREFIX";
        case ErrorCode::Budget: return "BUDGET";
        case ErrorCode::RotationNotInBasis: return "ROTATION_NOT_IN_BASIS";
        case ErrorCode::NoOccurrence: return "NO_OCCURRENCE";
        case ErrorCode::Unindexable: return "UNINDEXABLE";
        case ErrorCode::SingularGrid: return "SINGULAR_GRID";
        case ErrorCode::Parse: return "PARSE";
    }
    return "UNKNOWN";
}

int euler_phi(int n) {
    int result = n;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace {

using Poly = std::vector<std::int64_t>;

// Exact division of integer polynomials by a monic divisor.
Poly divide_monic(Poly num, const Poly& den) {
    const int dn = static_cast<int>(den.size()) - 1;
    const int nn = static_cast<int>(num.size()) - 1;
    Poly q(nn - dn + 1, 0);
    for (int i = nn; i >= dn; --i) {
        std::int64_t coef = num[i];
        q[i - dn] = coef;
        if (coef == 0) continue;
        for (int j = 0; j <= dn; ++j) num[i - dn + j] -= coef * den[j];
    }
    return q;
}

}  // namespace

std::vector<std::int64_t> cyclotomic_polynomial(int n) {
    Poly p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (int d = 1; d < n; ++d)
        if (n % d == 0) p = divide_monic(p, cyclotomic_polynomial(d));
    return p;
}

DirectionBasis::DirectionBasis(int order) : order_(order) {
    if (order < 3) throw Error(ErrorCode::InvalidBasis, "basis order must be >= 3");
    degree_ = euler_phi(order);
    if (degree_ > kMaxDegree)
        throw Error(ErrorCode::InvalidBasis,
                    "basis order " + std::to_string(order) + " has phi(N) > " + std::to_string(kMaxDegree));
    lines_ = order % 2 == 0 ? order / 2 : order;
    cyclotomic_ = cyclotomic_polynomial(order);
    cos_.resize(order);
    sin_.resize(order);
    for (int k = 0; k < order; ++k) {
        const double a = 2.0 * std::numbers::pi * k / order;
        cos_[k] = std::cos(a);
        sin_[k] = std::sin(a);
    }
}

const DirectionBasis& DirectionBasis::of(int order) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<DirectionBasis>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, std::make_unique<DirectionBasis>(order)).first;
    return *it->second;
}

ExactPoint DirectionBasis::zero() const {
    ExactPoint p;
    p.order = order_;
    return p;
}

ExactPoint DirectionBasis::integer(std::int64_t k) const {
    ExactPoint p = zero();
    p.c[0] = k;
    return p;
}

ExactPoint DirectionBasis::root(int k) const {
    k %= order_;
    if (k < 0) k += order_;
    std::vector<std::int64_t> v(order_, 0);
    v[k] = 1;
    return reduce(v);
}

ExactPoint DirectionBasis::direction(int angle) const {
    angle = wrap(angle);
    if (order_ % 2 == 0) return root(angle);
    // Odd N: angle*pi/N; even indices are +zeta^(a/2), odd ones -zeta^((a+N)/2).
    if (angle % 2 == 0) return root(angle / 2);
    return -root((angle + order_) / 2);
}

int DirectionBasis::line_angle(int line) const { return order_ % 2 == 0 ? line : wrap(2 * line); }

std::pair<int, int> DirectionBasis::line_of_angle(int angle) const {
    angle = wrap(angle);
    if (order_ % 2 == 0) {
        if (angle < lines_) return {angle, 1};
        return {angle - lines_, -1};
    }
    if (angle % 2 == 0) return {angle / 2, 1};
    return {((angle + order_) / 2) % order_, -1};
}

ExactPoint DirectionBasis::reduce(std::span<const std::int64_t> coeffs) const {
    std::vector<std::int64_t> a(coeffs.begin(), coeffs.end());
    for (int i = static_cast<int>(a.size()) - 1; i >= degree_; --i) {
        const std::int64_t coef = a[i];
        if (coef == 0) continue;
        for (int j = 0; j <= degree_; ++j) a[i - degree_ + j] -= coef * cyclotomic_[j];
    }
    ExactPoint p = zero();
    for (int i = 0; i < degree_ && i < static_cast<int>(a.size()); ++i) p.c[i] = a[i];
    return p;
}

std::vector<std::int64_t> DirectionBasis::coeffs(const ExactPoint& p) const {
    std::vector<std::int64_t> v(order_, 0);
    for (int i = 0; i < degree_; ++i) v[i] = p.c[i];
    return v;
}

ExactPoint DirectionBasis::multiply(const ExactPoint& a, const ExactPoint& b) const {
    std::array<std::int64_t, 2 * kMaxDegree> prod{};
    for (int i = 0; i < degree_; ++i) {
        if (a.c[i] == 0) continue;
        for (int j = 0; j < degree_; ++j) prod[i + j] += a.c[i] * b.c[j];
    }
    return reduce(std::span<const std::int64_t>(prod.data(), 2 * degree_ - 1));
}

ExactPoint DirectionBasis::conjugate(const ExactPoint& a) const {
    // zeta^k -> zeta^(N-k)
    std::vector<std::int64_t> v(order_, 0);
    for (int i = 0; i < degree_; ++i) v[(order_ - i) % order_] += a.c[i];
    return reduce(v);
}

template <typename Scalar>
Scalar DirectionBasis::real_part(const ExactPoint& p) const {
    using std::cos;
    const Scalar two_pi = Scalar(2) * boost::math::constants::pi<Scalar>();
    Scalar s = 0;
    for (int k = 0; k < degree_; ++k)
        if (p.c[k] != 0) s += Scalar(p.c[k]) * cos(two_pi * k / order_);
    return s;
}

template <typename Scalar>
Scalar DirectionBasis::imag_part(const ExactPoint& p) const {
    using std::sin;
    const Scalar two_pi = Scalar(2) * boost::math::constants::pi<Scalar>();
    Scalar s = 0;
    for (int k = 0; k < degree_; ++k)
        if (p.c[k] != 0) s += Scalar(p.c[k]) * sin(two_pi * k / order_);
    return s;
}

template double DirectionBasis::real_part<double>(const ExactPoint&) const;
template double DirectionBasis::imag_part<double>(const ExactPoint&) const;
template long double DirectionBasis::real_part<long double>(const ExactPoint&) const;
template long double DirectionBasis::imag_part<long double>(const ExactPoint&) const;

Eigen::Vector2d DirectionBasis::embed(const ExactPoint& p) const {
    double x = 0, y = 0;
    for (int k = 0; k < degree_; ++k) {
        x += static_cast<double>(p.c[k]) * cos_[k];
        y += static_cast<double>(p.c[k]) * sin_[k];
    }
    return {x, y};
}

Eigen::Vector2d DirectionBasis::unit_vector(int angle) const {
    const double a = std::numbers::pi * wrap(angle) / lines_;
    return {std::cos(a), std::sin(a)};
}

namespace {

template <unsigned Digits>
using Float = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>>;

double magnitude(const ExactPoint& p, int degree) {
    double m = 0;
    for (int k = 0; k < degree; ++k) m += std::abs(static_cast<double>(p.c[k]));
    return m;
}

}  // namespace

int DirectionBasis::refine_sign(const ExactPoint& p, bool imaginary) const {
    const double mag = magnitude(p, degree_) + 1.0;
    auto attempt = [&](auto tag, double tolerance) -> int {
        using S = decltype(tag);
        S v = imaginary ? imag_part<S>(p) : real_part<S>(p);
        if (v > S(mag * tolerance)) return 1;
        if (v < S(-mag * tolerance)) return -1;
        return 0;
    };
    if (int s = attempt(Float<50>{}, 1e-45)) return s;
    if (int s = attempt(Float<100>{}, 1e-95)) return s;
    if (int s = attempt(Float<200>{}, 1e-195)) return s;
    throw Error(ErrorCode::InvalidBasis, "sign refinement did not separate a nonzero value");
}

int DirectionBasis::sign_re(const ExactPoint& p) const {
    double v = 0, mag = 0;
    for (int k = 0; k < degree_; ++k) {
        const double ck = static_cast<double>(p.c[k]);
        v += ck * cos_[k];
        mag += std::abs(ck);
    }
    const double tol = mag * 1e-13;
    if (v > tol) return 1;
    if (v < -tol) return -1;
    if ((p + conjugate(p)).is_zero()) return 0;
    return refine_sign(p, false);
}

int DirectionBasis::sign_im(const ExactPoint& p) const {
    double v = 0, mag = 0;
    for (int k = 0; k < degree_; ++k) {
        const double ck = static_cast<double>(p.c[k]);
        v += ck * sin_[k];
        mag += std::abs(ck);
    }
    const double tol = mag * 1e-13;
    if (v > tol) return 1;
    if (v < -tol) return -1;
    if ((p - conjugate(p)).is_zero()) return 0;
    return refine_sign(p, true);
}

int DirectionBasis::sign_cross(const ExactPoint& a, const ExactPoint& b) const {
    return sign_im(multiply(conjugate(a), b));
}

int DirectionBasis::sign_dot(const ExactPoint& a, const ExactPoint& b) const {
    return sign_re(multiply(conjugate(a), b));
}

bool point_eq(const ExactPoint& a, const ExactPoint& b) {
    if (a.order != b.order)
        throw Error(ErrorCode::BasisMismatch,
                    "points over bases of order " + std::to_string(a.order) + " and " + std::to_string(b.order));
    return a == b;
}

}  // namespace rhombus
