#include "rhombus/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "rhombus/error.hpp"

namespace rhombus {

ShapeFrame frame_of(const DirectionBasis& basis, const Shape& shape) {
    ShapeFrame f;
    f.du = basis.line_angle(shape.u);
    f.dv = basis.line_angle(shape.v);
    f.ccw = basis.wrap(f.dv - f.du) < basis.line_count();
    return f;
}

void validate_shape(const DirectionBasis& basis, const Shape& shape) {
    const int L = basis.line_count();
    if (shape.u < 0 || shape.v >= L || shape.u >= shape.v)
        throw Error(ErrorCode::InvalidShape, "shape [" + std::to_string(shape.u) + "," + std::to_string(shape.v) +
                                                 "] is not a pair of distinct lines in [0," + std::to_string(L) + ")");
}

int interior_angle_units(const DirectionBasis& basis, const Shape& shape) {
    const ShapeFrame f = frame_of(basis, shape);
    const int d = basis.wrap(f.dv - f.du);
    return std::min(d, basis.turn() - d);
}

ShapeSet::ShapeSet(int order, std::vector<Shape> shapes) : order_(order), shapes_(std::move(shapes)) {
    const DirectionBasis& b = DirectionBasis::of(order);
    if (shapes_.empty()) throw Error(ErrorCode::InvalidShape, "empty shapeset");
    for (const Shape& s : shapes_) validate_shape(b, s);
    std::sort(shapes_.begin(), shapes_.end());
    if (std::adjacent_find(shapes_.begin(), shapes_.end()) != shapes_.end())
        throw Error(ErrorCode::InvalidShape, "duplicate shape in shapeset");
    theta_min_units_ = b.line_count();
    for (const Shape& s : shapes_) {
        const int a = interior_angle_units(b, s);
        theta_min_units_ = std::min({theta_min_units_, a, b.line_count() - a});
        const Eigen::Vector2d u = b.embed(b.root(s.u)), v = b.embed(b.root(s.v));
        max_diameter_ = std::max({max_diameter_, (u + v).norm(), (u - v).norm()});
    }
}

ShapeSet ShapeSet::all(int order) {
    const int L = DirectionBasis::of(order).line_count();
    std::vector<Shape> shapes;
    for (int u = 0; u < L; ++u)
        for (int v = u + 1; v < L; ++v) shapes.push_back({u, v});
    return ShapeSet(order, std::move(shapes));
}

std::optional<std::size_t> ShapeSet::index_of(const Shape& s) const {
    auto it = std::lower_bound(shapes_.begin(), shapes_.end(), s);
    if (it == shapes_.end() || *it != s) return std::nullopt;
    return static_cast<std::size_t>(it - shapes_.begin());
}

double ShapeSet::theta_min() const {
    return std::numbers::pi * theta_min_units_ / DirectionBasis::of(order_).line_count();
}

std::array<ExactPoint, 4> PlacedRhombus::vertices(const DirectionBasis& basis) const {
    const ExactPoint u = basis.root(shape.u), v = basis.root(shape.v);
    return {anchor, anchor + u, anchor + u + v, anchor + v};
}

RhombusGeometry::RhombusGeometry(const DirectionBasis& basis, const PlacedRhombus& r)
    : v(r.vertices(basis)), frame(frame_of(basis, r.shape)), lines{r.shape.u, r.shape.v} {
    for (int i = 0; i < 4; ++i) f[i] = basis.embed(v[i]);
    center = (f[0] + f[2]) * 0.5;
}

EdgeKey edge_key(const DirectionBasis& basis, const PlacedRhombus& r, int side) {
    const ExactPoint u = basis.root(r.shape.u), v = basis.root(r.shape.v);
    switch (side & 3) {
        case 0: return {r.anchor, r.shape.u};
        case 1: return {r.anchor + u, r.shape.v};
        case 2: return {r.anchor + v, r.shape.u};
        default: return {r.anchor, r.shape.v};
    }
}

ExactPoint edge_end(const DirectionBasis& basis, const EdgeKey& e) { return e.start + basis.root(e.line); }

bool interior_left_of_edge(const DirectionBasis& basis, const PlacedRhombus& r, int side) {
    return frame_of(basis, r.shape).ccw != ((side & 3) >= 2);
}

PlacedRhombus rhombus_on_edge(const DirectionBasis& basis, const EdgeKey& edge, const Shape& shape, bool left) {
    if (!shape.has_line(edge.line)) throw Error(ErrorCode::NotParallel, "shape has no side along the edge line");
    const bool ccw = frame_of(basis, shape).ccw;
    PlacedRhombus r;
    r.shape = shape;
    if (edge.line == shape.u)
        r.anchor = left == ccw ? edge.start : edge.start - basis.root(shape.v);
    else
        r.anchor = left == ccw ? edge.start - basis.root(shape.u) : edge.start;
    return r;
}

namespace {

constexpr double kFilter = 1e-9;

// Projection of x onto the normal of line `line`: Im(conj(zeta^line) x).
int exact_proj_sign(const DirectionBasis& b, int line, const ExactPoint& x) {
    return b.sign_im(b.multiply(b.conjugate(b.root(line)), x));
}

// Whether the projections of a and b onto the normal of `line` overlap in an open interval.
bool overlap_on_axis(const DirectionBasis& b, const RhombusGeometry& a, const RhombusGeometry& c, int line) {
    const Eigen::Vector2d n = [&] {
        Eigen::Vector2d e = b.embed(b.root(line));
        return Eigen::Vector2d(-e.y(), e.x());
    }();
    double amin = 1e300, amax = -1e300, cmin = 1e300, cmax = -1e300;
    for (int i = 0; i < 4; ++i) {
        const double pa = n.dot(a.f[i]), pc = n.dot(c.f[i]);
        amin = std::min(amin, pa), amax = std::max(amax, pa);
        cmin = std::min(cmin, pc), cmax = std::max(cmax, pc);
    }
    if (cmin - amax > kFilter || amin - cmax > kFilter) return false;
    if (amax - cmin > kFilter && cmax - amin > kFilter) return true;
    // Near touching: separated iff every difference c_j - a_i has one sign (zero allowed).
    bool all_ge = true, all_le = true;
    for (int i = 0; i < 4 && (all_ge || all_le); ++i)
        for (int j = 0; j < 4; ++j) {
            const int s = exact_proj_sign(b, line, c.v[j] - a.v[i]);
            if (s < 0) all_ge = false;
            if (s > 0) all_le = false;
        }
    return !(all_ge || all_le);
}

}  // namespace

bool interiors_overlap(const DirectionBasis& basis, const RhombusGeometry& a, const RhombusGeometry& b) {
    if ((a.center - b.center).squaredNorm() >= 4.0 + kFilter) return false;
    for (int line : a.lines)
        if (!overlap_on_axis(basis, a, b, line)) return false;
    for (int line : b.lines)
        if (!overlap_on_axis(basis, a, b, line)) return false;
    return true;
}

namespace {

bool vertex_inside_side(const DirectionBasis& b, const RhombusGeometry& a, const RhombusGeometry& c) {
    for (int side = 0; side < 4; ++side) {
        const Eigen::Vector2d s = c.f[side], e = c.f[(side + 1) & 3];
        const Eigen::Vector2d d = e - s;
        for (int i = 0; i < 4; ++i) {
            const Eigen::Vector2d q = a.f[i] - s;
            const double cross = d.x() * q.y() - d.y() * q.x();
            if (std::abs(cross) > kFilter) continue;
            const double t = d.dot(q);
            if (t < -kFilter || t > 1 + kFilter) continue;
            const ExactPoint dir = c.v[(side + 1) & 3] - c.v[side];
            const ExactPoint z = b.multiply(b.conjugate(dir), a.v[i] - c.v[side]);
            if (b.sign_im(z) != 0) continue;
            if (b.sign_re(z) > 0 && b.sign_re(z - b.integer(1)) < 0) return true;
        }
    }
    return false;
}

}  // namespace

bool has_t_junction(const DirectionBasis& basis, const RhombusGeometry& a, const RhombusGeometry& b) {
    if ((a.center - b.center).squaredNorm() >= 4.0 + kFilter) return false;
    return vertex_inside_side(basis, a, b) || vertex_inside_side(basis, b, a);
}

bool segment_meets_open_disk(const DirectionBasis& b, const ExactPoint& center, const ExactPoint& start,
                             const ExactPoint& end, Rational r) {
    if (r <= Rational(0)) return false;
    const Eigen::Vector2d c = b.embed(center), s = b.embed(start), e = b.embed(end);
    const Eigen::Vector2d d = e - s;
    const double t = std::clamp(d.dot(c - s) / d.squaredNorm(), 0.0, 1.0);
    const double dist = (s + t * d - c).norm();
    const double rf = boost::rational_cast<double>(r);
    if (dist - rf > kFilter) return false;
    if (rf - dist > kFilter) return true;

    const std::int64_t num = r.numerator(), den = r.denominator();
    const ExactPoint dir = end - start;
    // Unit edges only: conj(dir) * dir == 1.
    const ExactPoint z = b.multiply(b.conjugate(dir), center - start);
    auto endpoint_closer = [&](const ExactPoint& w) {
        const ExactPoint n2 = b.multiply(w, b.conjugate(w)) * (den * den) - b.integer(num * num);
        return b.sign_re(n2) < 0;
    };
    if (b.sign_re(z) <= 0) return endpoint_closer(center - start);
    if (b.sign_re(z - b.integer(1)) >= 0) return endpoint_closer(center - end);
    const ExactPoint im2 = (z - b.conjugate(z)) * den;
    const ExactPoint h = -b.multiply(im2, im2) - b.integer(4 * num * num);
    return b.sign_re(h) < 0;
}

// ---- Patch ----

Patch::Patch(int order, std::vector<PlacedRhombus> tiles, std::shared_ptr<const Palette> palette, bool check_holes)
    : order_(order), tiles_(std::move(tiles)), palette_(std::move(palette)) {
    const DirectionBasis& b = DirectionBasis::of(order);
    for (const PlacedRhombus& t : tiles_) {
        validate_shape(b, t.shape);
        if (t.anchor.order != order) throw Error(ErrorCode::BasisMismatch, "tile anchor over a different basis");
        for (ColorId c : t.colors) {
            if (c == kNoColor) {
                if (t.colored()) throw Error(ErrorCode::InvalidPatch, "partially colored tile");
                continue;
            }
            if (!palette_ || c < 0 || c >= static_cast<ColorId>(palette_->size()))
                throw Error(ErrorCode::InvalidPatch, "tile color outside the palette");
        }
        if (palette_ && !t.colored()) throw Error(ErrorCode::InvalidPatch, "uncolored tile in a colored patch");
    }
    std::sort(tiles_.begin(), tiles_.end());

    std::vector<RhombusGeometry> geo;
    geo.reserve(tiles_.size());
    for (const PlacedRhombus& t : tiles_) geo.emplace_back(b, t);
    // Sweep on x keeps the pair test near-linear for large patches.
    std::vector<int> order_x(tiles_.size());
    std::iota(order_x.begin(), order_x.end(), 0);
    std::sort(order_x.begin(), order_x.end(),
              [&](int i, int j) { return geo[i].center.x() < geo[j].center.x(); });
    for (std::size_t a = 0; a < order_x.size(); ++a)
        for (std::size_t c = a + 1; c < order_x.size(); ++c) {
            const RhombusGeometry& ga = geo[order_x[a]];
            const RhombusGeometry& gc = geo[order_x[c]];
            if (gc.center.x() - ga.center.x() > 2.0 + kFilter) break;
            if (interiors_overlap(b, ga, gc))
                throw Error(ErrorCode::Overlap, "rhombi " + std::to_string(order_x[a]) + " and " +
                                                    std::to_string(order_x[c]) + " overlap");
            if (has_t_junction(b, ga, gc))
                throw Error(ErrorCode::InvalidPatch, "rhombi " + std::to_string(order_x[a]) + " and " +
                                                         std::to_string(order_x[c]) + " are not edge-to-edge");
        }
    index_edges();

    if (check_holes && !tiles_.empty()) {
        // Connected via shared vertices, and V - E + F == 1.
        std::unordered_map<ExactPoint, int, ExactPointHash> first_tile;
        std::vector<int> parent(tiles_.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t i = 0; i < tiles_.size(); ++i)
            for (const ExactPoint& v : geo[i].v) {
                auto [it, fresh] = first_tile.emplace(v, static_cast<int>(i));
                if (!fresh) parent[find(static_cast<int>(i))] = find(it->second);
            }
        for (std::size_t i = 1; i < tiles_.size(); ++i)
            if (find(static_cast<int>(i)) != find(0)) throw Error(ErrorCode::InvalidPatch, "patch is disconnected");
        if (euler_characteristic() != 1) throw Error(ErrorCode::InvalidPatch, "patch has a hole");
    }
}

Patch::Patch(Unchecked, int order, std::vector<PlacedRhombus> tiles, std::shared_ptr<const Palette> palette)
    : order_(order), tiles_(std::move(tiles)), palette_(std::move(palette)) {
    std::sort(tiles_.begin(), tiles_.end());
    index_edges();
}

void Patch::index_edges() {
    const DirectionBasis& b = basis();
    edges_.clear();
    edges_.reserve(tiles_.size() * 3);
    for (std::size_t i = 0; i < tiles_.size(); ++i)
        for (int side = 0; side < 4; ++side) {
            EdgeIncidence& inc = edges_[edge_key(b, tiles_[i], side)];
            if (inc.count == 2) throw Error(ErrorCode::Overlap, "edge shared by more than two rhombi");
            if (inc.count == 1) {
                const EdgeSide& other = inc.sides[0];
                if (interior_left_of_edge(b, tiles_[other.tile], other.side) ==
                    interior_left_of_edge(b, tiles_[i], side))
                    throw Error(ErrorCode::Overlap, "two rhombi on the same side of an edge");
            }
            inc.sides[inc.count++] = {static_cast<int>(i), side};
        }
}

std::vector<EdgeKey> Patch::boundary_edges() const {
    std::vector<EdgeKey> out;
    for (const auto& [k, inc] : edges_)
        if (inc.count == 1) out.push_back(k);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ExactPoint> Patch::vertices() const {
    const DirectionBasis& b = basis();
    std::vector<ExactPoint> out;
    out.reserve(tiles_.size() * 4);
    for (const PlacedRhombus& t : tiles_)
        for (const ExactPoint& v : t.vertices(b)) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Patch::has_vertex(const ExactPoint& p) const {
    const DirectionBasis& b = basis();
    for (const PlacedRhombus& t : tiles_)
        for (const ExactPoint& v : t.vertices(b))
            if (v == p) return true;
    return false;
}

int Patch::euler_characteristic() const {
    return static_cast<int>(vertices().size()) - static_cast<int>(edges_.size()) + static_cast<int>(tiles_.size());
}

Patch place_adjacent(const Patch& patch, const EdgeKey& boundary_edge, const Shape& shape, EdgeColors colors) {
    const DirectionBasis& b = patch.basis();
    auto it = patch.edges().find(boundary_edge);
    if (it == patch.edges().end() || it->second.count != 1)
        throw Error(ErrorCode::NotBoundary, "edge is not a boundary edge of the patch");
    validate_shape(b, shape);
    if (!shape.has_line(boundary_edge.line)) throw Error(ErrorCode::NotParallel, "shape has no side along the edge");
    const EdgeSide& owner = it->second.sides[0];
    const bool owner_left = interior_left_of_edge(b, patch.tiles()[owner.tile], owner.side);
    PlacedRhombus fresh = rhombus_on_edge(b, boundary_edge, shape, !owner_left);
    fresh.colors = colors;

    const RhombusGeometry g(b, fresh);
    for (const PlacedRhombus& t : patch.tiles()) {
        const RhombusGeometry h(b, t);
        if (interiors_overlap(b, g, h)) throw Error(ErrorCode::Overlap, "placed rhombus overlaps the patch");
        if (has_t_junction(b, g, h)) throw Error(ErrorCode::Overlap, "placed rhombus is not edge-to-edge");
    }
    std::vector<PlacedRhombus> tiles(patch.tiles().begin(), patch.tiles().end());
    tiles.push_back(fresh);
    return Patch(patch.order(), std::move(tiles), patch.palette(), false);
}

bool tiles_cover_disk(const DirectionBasis& b, std::span<const PlacedRhombus> tiles, const ExactPoint& center,
                      Rational radius) {
    if (radius < Rational(0)) return false;
    if (tiles.empty()) return false;
    std::unordered_map<EdgeKey, int, EdgeKeyHash> count;
    for (const PlacedRhombus& t : tiles)
        for (int side = 0; side < 4; ++side) ++count[edge_key(b, t, side)];
    bool touches = false;
    for (const PlacedRhombus& t : tiles)
        for (const ExactPoint& v : t.vertices(b)) touches |= v == center;
    if (!touches) return false;
    if (radius == Rational(0)) return true;
    for (const auto& [k, n] : count)
        if (n == 1 && segment_meets_open_disk(b, center, k.start, edge_end(b, k), radius)) return false;
    return true;
}

bool patch_support_contains_disk(const Patch& patch, const ExactPoint& center, Rational radius) {
    if (!patch.has_vertex(center)) throw Error(ErrorCode::NotAVertex, "disk center is not a patch vertex");
    return tiles_cover_disk(patch.basis(), patch.tiles(), center, radius);
}

}  // namespace rhombus
