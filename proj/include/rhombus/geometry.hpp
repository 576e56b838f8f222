#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include <boost/rational.hpp>

#include "rhombus/color.hpp"
#include "rhombus/cyclotomic.hpp"

namespace rhombus {

using Rational = boost::rational<std::int64_t>;

// A rhombus up to translation: the parallelogram spanned by +zeta^u and +zeta^v,
// where u < v are line indices in [0, L).
struct Shape {
    int u = 0;
    int v = 1;

    friend bool operator==(const Shape&, const Shape&) = default;
    friend auto operator<=>(const Shape&, const Shape&) = default;

    bool has_line(int line) const { return u == line || v == line; }
    int other_line(int line) const { return line == u ? v : u; }
    int shared_lines(const Shape& o) const { return int(has_line(o.u)) + int(has_line(o.v)); }
};

// Angle indices of the spanning vectors and the orientation of the boundary
// walk p, p+u, p+u+v, p+v.
struct ShapeFrame {
    int du = 0;
    int dv = 0;
    bool ccw = true;

    // Angle index of side i, walked from vertex i to vertex i+1.
    int side_angle(int side, int half_turn) const {
        switch (side & 3) {
            case 0: return du;
            case 1: return dv;
            case 2: return du + half_turn;
            default: return dv + half_turn;
        }
    }
};

ShapeFrame frame_of(const DirectionBasis& basis, const Shape& shape);

// Throws Error(InvalidShape) unless u < v are distinct lines of the basis.
void validate_shape(const DirectionBasis& basis, const Shape& shape);

class ShapeSet {
public:
    ShapeSet() = default;
    ShapeSet(int order, std::vector<Shape> shapes);

    // Every rhombus spanned by two lines of the basis.
    static ShapeSet all(int order);

    int order() const { return order_; }
    const DirectionBasis& basis() const { return DirectionBasis::of(order_); }
    std::span<const Shape> shapes() const { return shapes_; }
    std::size_t size() const { return shapes_.size(); }
    std::optional<std::size_t> index_of(const Shape& s) const;
    bool contains(const Shape& s) const { return index_of(s).has_value(); }

    // Smallest interior angle, in units of pi/L and in radians.
    int theta_min_units() const { return theta_min_units_; }
    double theta_min() const;
    // Largest diagonal over all shapes.
    double max_diameter() const { return max_diameter_; }

    friend bool operator==(const ShapeSet& a, const ShapeSet& b) {
        return a.order_ == b.order_ && a.shapes_ == b.shapes_;
    }

private:
    int order_ = 0;
    std::vector<Shape> shapes_;
    int theta_min_units_ = 0;
    double max_diameter_ = 0;
};

// Interior angle of a shape in units of pi/L.
int interior_angle_units(const DirectionBasis& basis, const Shape& shape);

// A shape placed at anchor p. Vertices are p, p+u, p+u+v, p+v; side i runs from
// vertex i to vertex i+1. Colors are indices into the owning patch's palette.
struct PlacedRhombus {
    Shape shape;
    ExactPoint anchor;
    EdgeColors colors = kUncolored;

    friend bool operator==(const PlacedRhombus&, const PlacedRhombus&) = default;
    friend auto operator<=>(const PlacedRhombus&, const PlacedRhombus&) = default;

    std::array<ExactPoint, 4> vertices(const DirectionBasis& basis) const;
    bool colored() const { return colors[0] != kNoColor; }
};

// Exact vertices plus a cached floating-point embedding for predicate filters.
struct RhombusGeometry {
    std::array<ExactPoint, 4> v;
    std::array<Eigen::Vector2d, 4> f;
    Eigen::Vector2d center;
    ShapeFrame frame;
    std::array<int, 2> lines;

    RhombusGeometry(const DirectionBasis& basis, const PlacedRhombus& r);
};

// An undirected unit edge, keyed by the endpoint from which it runs along +zeta^line.
struct EdgeKey {
    ExactPoint start;
    int line = 0;

    friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
    friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& e) const noexcept {
        return ExactPointHash{}(e.start) * 31u + static_cast<std::size_t>(e.line);
    }
};

EdgeKey edge_key(const DirectionBasis& basis, const PlacedRhombus& r, int side);
ExactPoint edge_end(const DirectionBasis& basis, const EdgeKey& e);

struct EdgeSide {
    int tile = -1;
    int side = -1;
};

struct EdgeIncidence {
    std::array<EdgeSide, 2> sides;
    int count = 0;
};

// Exact predicates shared by patches and the search.
bool interiors_overlap(const DirectionBasis& basis, const RhombusGeometry& a, const RhombusGeometry& b);
// True when a vertex of one rhombus lies strictly inside a side of the other.
bool has_t_junction(const DirectionBasis& basis, const RhombusGeometry& a, const RhombusGeometry& b);
// True when the segment [start, end] comes strictly closer than r to center.
bool segment_meets_open_disk(const DirectionBasis& basis, const ExactPoint& center, const ExactPoint& start,
                             const ExactPoint& end, Rational r);

// An edge-to-edge, overlap-free, simply connected finite set of placed rhombi.
// Immutable once built; operations return new patches.
class Patch {
public:
    Patch() = default;
    explicit Patch(int order) : order_(order) {}
    // Validates edge-to-edge placement, overlaps and (optionally) holes.
    Patch(int order, std::vector<PlacedRhombus> tiles, std::shared_ptr<const Palette> palette = nullptr,
          bool check_holes = true);
    // Sorts and indexes only; for tiles produced by code that already enforces the invariants.
    struct Unchecked {};
    Patch(Unchecked, int order, std::vector<PlacedRhombus> tiles, std::shared_ptr<const Palette> palette = nullptr);

    int order() const { return order_; }
    const DirectionBasis& basis() const { return DirectionBasis::of(order_); }
    std::span<const PlacedRhombus> tiles() const { return tiles_; }
    std::size_t size() const { return tiles_.size(); }
    bool empty() const { return tiles_.empty(); }
    bool colored() const { return palette_ != nullptr; }
    const std::shared_ptr<const Palette>& palette() const { return palette_; }

    const std::unordered_map<EdgeKey, EdgeIncidence, EdgeKeyHash>& edges() const { return edges_; }
    std::vector<EdgeKey> boundary_edges() const;
    std::vector<ExactPoint> vertices() const;
    bool has_vertex(const ExactPoint& p) const;
    // Euler characteristic V - E + F of the patch complex (1 for a disk).
    int euler_characteristic() const;

    friend bool operator==(const Patch& a, const Patch& b) {
        return a.order_ == b.order_ && a.tiles_ == b.tiles_ &&
               (a.palette_ == b.palette_ || (a.palette_ && b.palette_ && *a.palette_ == *b.palette_));
    }

private:
    void index_edges();

    int order_ = 0;
    std::vector<PlacedRhombus> tiles_;
    std::shared_ptr<const Palette> palette_;
    std::unordered_map<EdgeKey, EdgeIncidence, EdgeKeyHash> edges_;
};

// Glue `shape` to the free side of a boundary edge. Throws NOT_BOUNDARY,
// NOT_PARALLEL or OVERLAP. Holes are not checked here.
Patch place_adjacent(const Patch& patch, const EdgeKey& boundary_edge, const Shape& shape,
                     EdgeColors colors = kUncolored);

// The rhombus of `shape` glued on the given side of an edge: `left` selects the
// half-plane to the left of +zeta^line.
PlacedRhombus rhombus_on_edge(const DirectionBasis& basis, const EdgeKey& edge, const Shape& shape, bool left);
// Whether side `side` of r has r's interior to the left of +zeta^line.
bool interior_left_of_edge(const DirectionBasis& basis, const PlacedRhombus& r, int side);

// Whether the closed disk of the given radius about a patch vertex lies in the support.
bool patch_support_contains_disk(const Patch& patch, const ExactPoint& center, Rational radius);

// Disk coverage over a bare tile list (no patch invariants required).
bool tiles_cover_disk(const DirectionBasis& basis, std::span<const PlacedRhombus> tiles, const ExactPoint& center,
                      Rational radius);

}  // namespace rhombus
