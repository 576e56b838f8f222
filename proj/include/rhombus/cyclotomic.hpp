#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace rhombus {

// Largest supported Euler totient phi(N). Covers N in {3..12, 14, 15, 16, 18, 20, 24, 30}.
inline constexpr int kMaxDegree = 8;

// An element of the ring Z[zeta_N]. Coefficients are stored in the power basis
// 1, zeta, ..., zeta^{phi(N)-1} after reduction modulo the N-th cyclotomic
// polynomial, so two points are equal exactly when their coefficient arrays are.
struct ExactPoint {
    std::array<std::int64_t, kMaxDegree> c{};
    std::int32_t order = 0;

    friend bool operator==(const ExactPoint&, const ExactPoint&) = default;
    friend auto operator<=>(const ExactPoint&, const ExactPoint&) = default;

    ExactPoint& operator+=(const ExactPoint& o) {
        for (int i = 0; i < kMaxDegree; ++i) c[i] += o.c[i];
        return *this;
    }
    ExactPoint& operator-=(const ExactPoint& o) {
        for (int i = 0; i < kMaxDegree; ++i) c[i] -= o.c[i];
        return *this;
    }
    ExactPoint& operator*=(std::int64_t k) {
        for (auto& x : c) x *= k;
        return *this;
    }
    friend ExactPoint operator+(ExactPoint a, const ExactPoint& b) { return a += b; }
    friend ExactPoint operator-(ExactPoint a, const ExactPoint& b) { return a -= b; }
    friend ExactPoint operator*(ExactPoint a, std::int64_t k) { return a *= k; }
    friend ExactPoint operator*(std::int64_t k, ExactPoint a) { return a *= k; }
    friend ExactPoint operator-(ExactPoint a) { return a *= -1; }

    bool is_zero() const {
        for (auto x : c)
            if (x != 0) return false;
        return true;
    }
};

struct ExactPointHash {
    std::size_t operator()(const ExactPoint& p) const noexcept {
        std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(p.order);
        for (auto x : p.c) {
            h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

// The N-th roots of unity as edge directions.
//
// Edge *lines* are directions up to sign: there are L = N/2 of them for even N
// and L = N for odd N. Signed unit vectors are addressed by an angle index
// a in [0, 2L): direction(a) is the unit vector at angle a*pi/L. Every signed
// edge vector of every supported shape is one of these.
class DirectionBasis {
public:
    // Cached instance; throws Error(InvalidBasis) when N < 3 or phi(N) > kMaxDegree.
    static const DirectionBasis& of(int order);

    int order() const { return order_; }
    int degree() const { return degree_; }
    int line_count() const { return lines_; }
    int turn() const { return 2 * lines_; }

    ExactPoint zero() const;
    ExactPoint integer(std::int64_t k) const;
    ExactPoint root(int k) const;           // zeta^k for any integer k
    ExactPoint direction(int angle) const;  // unit vector at angle*pi/L
    int line_angle(int line) const;         // angle index of +zeta^line
    // Line index and sign (+1/-1) of the unit vector at the given angle index.
    std::pair<int, int> line_of_angle(int angle) const;

    // Reduce an arbitrary coefficient vector over 1, zeta, zeta^2, ... (any length).
    ExactPoint reduce(std::span<const std::int64_t> coeffs) const;
    // Canonical coefficients as a length-N vector (zeros past phi(N)).
    std::vector<std::int64_t> coeffs(const ExactPoint& p) const;

    ExactPoint multiply(const ExactPoint& a, const ExactPoint& b) const;
    ExactPoint conjugate(const ExactPoint& a) const;
    ExactPoint rotate(const ExactPoint& a, int angle) const { return multiply(a, direction(angle)); }

    template <typename Scalar>
    Scalar real_part(const ExactPoint& p) const;
    template <typename Scalar>
    Scalar imag_part(const ExactPoint& p) const;

    Eigen::Vector2d embed(const ExactPoint& p) const;
    Eigen::Vector2d unit_vector(int angle) const;

    // Exact signs of Re(p) and Im(p): a double-precision filter, the exact
    // zero test, then multiprecision refinement until the sign separates.
    int sign_re(const ExactPoint& p) const;
    int sign_im(const ExactPoint& p) const;

    // Signs of the 2D cross and dot products of vectors a and b.
    int sign_cross(const ExactPoint& a, const ExactPoint& b) const;
    int sign_dot(const ExactPoint& a, const ExactPoint& b) const;

    // Angular difference helpers on angle indices.
    int wrap(int angle) const {
        int t = turn();
        angle %= t;
        return angle < 0 ? angle + t : angle;
    }
    // Sign of sin((b - a) * pi / L): +1 when b is counter-clockwise of a within a half turn.
    int turn_sign(int a, int b) const {
        int d = wrap(b - a);
        if (d == 0 || d == lines_) return 0;
        return d < lines_ ? 1 : -1;
    }

    explicit DirectionBasis(int order);

private:
    int refine_sign(const ExactPoint& p, bool imaginary) const;

    int order_ = 0;
    int degree_ = 0;
    int lines_ = 0;
    std::vector<std::int64_t> cyclotomic_;  // monic, degree_+1 coefficients
    std::vector<double> cos_, sin_;         // for k < order_
};

// Exact point equality; throws Error(BasisMismatch) for different orders.
bool point_eq(const ExactPoint& a, const ExactPoint& b);

// Euler's totient and the N-th cyclotomic polynomial (low-order coefficient first).
int euler_phi(int n);
std::vector<std::int64_t> cyclotomic_polynomial(int n);

}  // namespace rhombus
