#include "rhombus/penrose.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <Eigen/Dense>

#include "rhombus/error.hpp"

namespace rhombus {

Patch pentagrid_patch(int window, const std::array<Rational, 5>& offsets) {
    if (window < 1) throw Error(ErrorCode::InvalidPatch, "pentagrid window must be at least 1");
    const DirectionBasis& b = DirectionBasis::of(5);
    std::array<Eigen::Vector2d, 5> e;
    std::array<double, 5> g;
    for (int j = 0; j < 5; ++j) {
        e[j] = b.embed(b.root(j));
        g[j] = boost::rational_cast<double>(offsets[j]);
    }
    const double w = window;
    // Grid values <x, e_j> + g_j over the window disk lie within [g_j - w, g_j + w].
    std::vector<PlacedRhombus> tiles;
    for (int j = 0; j < 5; ++j)
        for (int k = j + 1; k < 5; ++k) {
            Eigen::Matrix2d m;
            m.row(0) = e[j].transpose();
            m.row(1) = e[k].transpose();
            const Eigen::Matrix2d inv = m.inverse();
            const auto lo_j = static_cast<long>(std::ceil(g[j] - w)), hi_j = static_cast<long>(std::floor(g[j] + w));
            const auto lo_k = static_cast<long>(std::ceil(g[k] - w)), hi_k = static_cast<long>(std::floor(g[k] + w));
            for (long nj = lo_j; nj <= hi_j; ++nj)
                for (long nk = lo_k; nk <= hi_k; ++nk) {
                    const Eigen::Vector2d x = inv * Eigen::Vector2d(nj - g[j], nk - g[k]);
                    if (x.norm() > w) continue;
                    ExactPoint anchor = b.zero();
                    for (int m2 = 0; m2 < 5; ++m2) {
                        long km;
                        if (m2 == j) {
                            km = nj;
                        } else if (m2 == k) {
                            km = nk;
                        } else {
                            const double t = x.dot(e[m2]) + g[m2];
                            if (std::abs(t - std::round(t)) < 1e-9)
                                throw Error(ErrorCode::SingularGrid, "three pentagrid lines meet");
                            km = static_cast<long>(std::ceil(t));
                        }
                        anchor += b.root(m2) * km;
                    }
                    tiles.push_back(PlacedRhombus{Shape{j, k}, anchor, kUncolored});
                }
        }
    return Patch(5, std::move(tiles));
}

}  // namespace rhombus

namespace rhombus {

namespace {

const DirectionBasis& penta() { return DirectionBasis::of(5); }

// Decoration of one rhomb, mirror-symmetric about the diagonal XY: both edges at
// X carry `at_x`, both edges at Y carry `at_y`; `toward` points the arrow at
// that corner. The thick rhomb's axis joins its acute corners, the thin rhomb's
// its obtuse ones. Found by requiring consistency on pentagrid tilings with
// offset sum 0 and failure on generic ones; unique up to renaming the kinds
// and reversing all arrows of one kind.
struct Decoration {
    bool axis_acute;
    ArrowKind kind_x;
    bool toward_x;
    ArrowKind kind_y;
    bool toward_y;
};
constexpr Decoration kThick{true, ArrowKind::Double, false, ArrowKind::Single, true};
constexpr Decoration kThin{false, ArrowKind::Double, false, ArrowKind::Single, false};

bool is_thick(const Shape& s) {
    const int a = interior_angle_units(penta(), s);
    return a == 2 || a == 3;
}

ArrowTile decorate(const Shape& shape, bool flipped) {
    const DirectionBasis& b = penta();
    const Decoration& d = is_thick(shape) ? kThick : kThin;
    const PlacedRhombus r{shape, b.zero(), kUncolored};
    const auto v = r.vertices(b);
    const bool acute_at_anchor = 2 * interior_angle_units(b, shape) < b.line_count();
    int x = 0, y = 2;
    if (d.axis_acute != acute_at_anchor) x = 1, y = 3;
    if (flipped) std::swap(x, y);
    ArrowTile out{shape, {}};
    for (int s = 0; s < 4; ++s) {
        const int a0 = s, a1 = (s + 1) & 3;
        const bool at_x = a0 == x || a1 == x;
        const int corner = at_x ? x : y;
        const int other = a0 == corner ? a1 : a0;
        const bool toward = at_x ? d.toward_x : d.toward_y;
        const ExactPoint dir = toward ? v[corner] - v[other] : v[other] - v[corner];
        const EdgeKey k = edge_key(b, r, s);
        out.arrows[s] = {at_x ? d.kind_x : d.kind_y, dir == b.root(k.line) ? 1 : -1};
    }
    return out;
}

// Absolute direction of an arrow after rotating by `steps`.
std::pair<int, int> rotate_direction(int line, int sign, int steps) {
    const DirectionBasis& b = penta();
    const int angle = b.line_angle(line) + (sign < 0 ? b.line_count() : 0) + steps;
    return b.line_of_angle(angle);
}

}  // namespace

std::vector<ArrowTile> penrose_arrow_tiles() {
    std::vector<ArrowTile> out;
    const ShapeSet all = ShapeSet::all(5);
    for (const Shape& s : all.shapes())
        for (bool f : {false, true}) out.push_back(decorate(s, f));
    std::sort(out.begin(), out.end());
    return out;
}

ArrowTile rotate_arrow_tile(const ArrowTile& t, int steps) {
    const DirectionBasis& b = penta();
    const PlacedRhombus rr = rotate_rhombus(b, PlacedRhombus{t.shape, b.zero(), {0, 1, 2, 3}}, steps);
    ArrowTile out{rr.shape, {}};
    for (int i = 0; i < 4; ++i) {
        const int from = rr.colors[i];
        const int line = from % 2 == 0 ? t.shape.u : t.shape.v;
        const auto [nl, ns] = rotate_direction(line, t.arrows[from].sign, steps);
        (void)nl;
        out.arrows[i] = {t.arrows[from].kind, ns};
    }
    return out;
}

Color arrow_color(int line, const ArrowLabel& a) {
    return Color::user(std::string(a.kind == ArrowKind::Double ? "d" : "s") + std::to_string(line) +
                       (a.sign > 0 ? "+" : "-"));
}

TileLabels arrows_to_colors(const ArrowTile& t) {
    if (t.shape.u < 0 || t.shape.v >= 5) throw Error(ErrorCode::InvalidShape, "arrow tiles live on the order-5 basis");
    TileLabels out{t.shape, {}};
    for (int s = 0; s < 4; ++s) out.colors[s] = arrow_color(s % 2 == 0 ? t.shape.u : t.shape.v, t.arrows[s]);
    return out;
}

bool arrows_match(const ArrowLabel& a, const ArrowLabel& b) { return a.kind == b.kind && a.sign == b.sign; }

Color rotate_arrow_color(const Color& c, int steps) {
    const std::string& n = c.name;
    if (c.kind != ColorKind::User || n.size() < 3 || (n[0] != 'd' && n[0] != 's') || (n.back() != '+' && n.back() != '-'))
        return c;
    const int line = std::stoi(n.substr(1, n.size() - 2));
    const auto [nl, ns] = rotate_direction(line, n.back() == '+' ? 1 : -1, steps);
    return Color::user(n.substr(0, 1) + std::to_string(nl) + (ns > 0 ? "+" : "-"));
}

Tileset penrose_wang20() {
    std::vector<TileLabels> labels;
    for (const ArrowTile& t : penrose_arrow_tiles()) labels.push_back(arrows_to_colors(t));
    return Tileset::from_labels(ShapeSet::all(5), labels);
}

Tileset penrose_wang4() {
    const DirectionBasis& b = penta();
    const Tileset all = penrose_wang20();
    std::set<TileLabels> assigned;
    std::vector<TileLabels> reps;
    std::vector<Shape> shapes;
    for (const TileLabels& t : all.labels()) {
        if (assigned.count(t)) continue;
        reps.push_back(t);
        shapes.push_back(t.shape);
        TileLabels cur = t;
        for (int k = 0; k < 5; ++k) {
            assigned.insert(cur);
            const PlacedRhombus rr = rotate_rhombus(b, PlacedRhombus{cur.shape, b.zero(), {0, 1, 2, 3}}, 2);
            TileLabels next{rr.shape, {}};
            for (int i = 0; i < 4; ++i) next.colors[i] = rotate_arrow_color(cur.colors[rr.colors[i]], 2);
            cur = next;
        }
    }
    std::sort(shapes.begin(), shapes.end());
    shapes.erase(std::unique(shapes.begin(), shapes.end()), shapes.end());
    return Tileset::from_labels(ShapeSet(5, shapes), reps);
}

IsometryCounterexample single_tile_isometry_counterexample() {
    const ShapeSet square(4, {Shape{0, 1}});
    Tileset single = Tileset::from_labels(
        square, {{Shape{0, 1}, {Color::user("a"), Color::user("b"), Color::user("c"), Color::user("d")}}});
    Tileset closure = rotation_closure(single, 2);
    auto cert = periodic_certificate(closure, SubshiftSpec::full_shift(square, "square"), 2);
    if (!cert) throw std::logic_error("half-turn closure of the square admits no small periodic tiling");
    return {std::move(single), std::move(closure), std::move(*cert)};
}

}  // namespace rhombus
