#include <gtest/gtest.h>

#include <map>
#include <mutex>
#include <set>
#include <random>

#include "rhombus/error.hpp"
#include "rhombus/penrose.hpp"
#include "rhombus/reductions.hpp"
#include "test_support.hpp"

using namespace rhombus;
using namespace rhombus::testing;

namespace {

SquareWangTileset wang(std::vector<std::string> colors, std::vector<std::array<const char*, 4>> rows) {
    SquareWangTileset w;
    for (auto& c : colors) w.colors.push_back(Color::user(c));
    for (auto& r : rows) w.tiles.push_back({Color::user(r[0]), Color::user(r[1]), Color::user(r[2]), Color::user(r[3])});
    return w;
}

// Direction sharing by comparing the unit vectors of both lines numerically.
int shared_directions(int order, const Shape& a, const Shape& b) {
    const auto& basis = DirectionBasis::of(order);
    int n = 0;
    for (int x : {a.u, a.v})
        for (int y : {b.u, b.v}) {
            const Eigen::Vector2d p = basis.embed(basis.root(x)), q = basis.embed(basis.root(y));
            n += std::abs(p.x() * q.y() - p.y() * q.x()) < 1e-9;
        }
    return n;
}

// Periodic Wang tilings used as inputs: (tileset, max period).
std::vector<std::pair<SquareWangTileset, int>> wang_instances() {
    return {
        {wang({"a"}, {{"a", "a", "a", "a"}}), 1},
        {wang({"a", "b"}, {{"a", "a", "b", "b"}, {"b", "b", "a", "a"}}), 2},
        {wang({"0", "1", "2", "z"}, {{"z", "1", "z", "0"}, {"z", "2", "z", "1"}, {"z", "0", "z", "2"}}), 3},
        {wang({"a", "b"}, {{"a", "b", "b", "b"}, {"b", "b", "a", "b"}}), 2},
        {wang({"a", "b", "c"}, {{"a", "b", "a", "c"}, {"a", "c", "a", "b"}}), 2},
    };
}

}  // namespace

TEST(PhiR, PenroseCount) {
    const ShapeSet all = ShapeSet::all(5);
    const SquareWangTileset w = wang({"a", "b"}, {{"a", "a", "a", "a"}, {"a", "b", "a", "b"}, {"b", "a", "b", "a"}});
    for (const Shape& r : all.shapes()) {
        std::size_t one = 0, none = 0;
        for (const Shape& s : all.shapes()) {
            if (s == r) continue;
            const int k = shared_directions(5, r, s);
            one += k == 1;
            none += k == 0;
        }
        EXPECT_EQ(one, 6u);
        EXPECT_EQ(none, 3u);
        const ReductionReport rep = phi_r_report(w, all, r);
        EXPECT_EQ(rep.output.size(), 18u);
        EXPECT_EQ(rep.coding + rep.link + rep.neutral, rep.output.size());
        for (const TileLabels& t : rep.output.labels()) {
            if (t.shape == r) continue;
            const int first = t.shape.has_line(r.u) ? (t.shape.u == r.u ? 0 : 1)
                              : t.shape.has_line(r.v) ? (t.shape.u == r.v ? 0 : 1)
                                                      : -1;
            if (first < 0) {
                for (const Color& c : t.colors) EXPECT_EQ(c, blank_color());
                continue;
            }
            EXPECT_EQ(t.colors[first], t.colors[first + 2]);
            EXPECT_NE(t.colors[first], blank_color());
            EXPECT_EQ(t.colors[1 - first], blank_color());
            EXPECT_EQ(t.colors[3 - first], blank_color());
        }
    }
}

TEST(PhiR, SquareOnlyIsIdentity) {
    const SquareWangTileset w = wang({"a", "b"}, {{"a", "b", "a", "b"}, {"b", "a", "b", "a"}});
    const ReductionReport rep = phi_r_report(w, squares(), Shape{0, 1});
    EXPECT_EQ(rep.link + rep.neutral, 0u);
    EXPECT_EQ(rep.output, w.as_tileset());
}

TEST(PhiR, Errors) {
    const SquareWangTileset w = wang({"a"}, {{"a", "a", "a", "a"}});
    EXPECT_THROW(phi_r(w, ShapeSet(5, {Shape{0, 1}}), Shape{0, 2}), Error);
    EXPECT_THROW(wang({"a"}, {{"a", "a", "a", "b"}}).validate(), Error);
    EXPECT_THROW(wang({"a"}, {{"a", "a", "a", "a"}, {"a", "a", "a", "a"}}).validate(), Error);
}

TEST(PhiR, RandomShapesetsKeepEveryShapeTiled) {
    std::mt19937 rng(7);
    for (int order : {4, 5, 6, 8}) {
        const ShapeSet all = ShapeSet::all(order);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Shape> pick;
            for (const Shape& s : all.shapes())
                if (rng() % 2) pick.push_back(s);
            if (pick.empty()) pick.push_back(all.shapes()[0]);
            const ShapeSet ss(order, pick);
            const Shape r = pick[rng() % pick.size()];
            const auto rep = phi_r_report(wang({"a", "b"}, {{"a", "b", "a", "b"}}), ss, r);
            std::set<Shape> tiled;
            for (const TileLabels& t : rep.output.labels()) tiled.insert(t.shape);
            EXPECT_EQ(tiled.size(), ss.size());
        }
    }
}

TEST(ColorPenrosePatch, SquareMonochrome) {
    const SquareWangTileset w = wang({"a"}, {{"a", "a", "a", "a"}});
    const SubshiftSpec spec = SubshiftSpec::full_shift(squares());
    const auto cert = periodic_certificate(w.as_tileset(), spec, 1);
    ASSERT_TRUE(cert);
    const ColoredPatch cp = color_penrose_patch(*cert, w, square_block(3, 3), squares(), Shape{0, 1});
    EXPECT_TRUE(check_color_validity(cp.patch));
    for (const PlacedRhombus& t : cp.patch.tiles())
        for (ColorId c : t.colors) EXPECT_EQ((*cp.patch.palette())[c], Color::user("a"));
}

TEST(ColorPenrosePatch, PentagridRoundTrip) {
    const ShapeSet all = ShapeSet::all(5);
    const SubshiftSpec squares_full = SubshiftSpec::full_shift(squares());
    std::size_t runs = 0;
    for (const auto& [w, period] : wang_instances()) {
        const auto cert = periodic_certificate(w.as_tileset(), squares_full, period);
        ASSERT_TRUE(cert);
        const Patch geo = pentagrid_patch(2, penrose_offsets()[runs % 3]);
        const Shape r = all.shapes()[runs % all.size()];
        const ColoredPatch cp = color_penrose_patch(*cert, w, geo, all, r);
        EXPECT_TRUE(check_color_validity(cp.patch));
        EXPECT_EQ(erase_colors(cp.patch), geo);

        // Read the coding tiles back and check they form a valid Wang tiling
        // of their index window that agrees with the certificate.
        std::map<std::pair<int, int>, std::array<Color, 4>> cells;
        for (const Occurrence& o : index_occurrences(cp.patch, r)) {
            if (o.component != 0) continue;
            std::array<Color, 4> c;
            for (int k = 0; k < 4; ++k) c[k] = (*cp.patch.palette())[cp.patch.tiles()[o.tile].colors[k]];
            cells[{o.i, o.j}] = c;
            EXPECT_EQ(c, wang_tile_at(*cert, o.i, o.j));
        }
        for (const auto& [ij, c] : cells) {
            const auto right = cells.find({ij.first + 1, ij.second});
            if (right != cells.end()) EXPECT_EQ(c[1], right->second[3]);
            const auto up = cells.find({ij.first, ij.second + 1});
            if (up != cells.end()) EXPECT_EQ(c[2], up->second[0]);
        }
        ++runs;
    }
    EXPECT_EQ(runs, 5u);
}

TEST(ColorPenrosePatch, MissingShapeIsUnindexable) {
    const SquareWangTileset w = wang({"a"}, {{"a", "a", "a", "a"}});
    const auto cert = periodic_certificate(w.as_tileset(), SubshiftSpec::full_shift(squares()), 1);
    const auto& b = DirectionBasis::of(5);
    const Patch one(5, {{{0, 1}, b.zero()}});
    try {
        color_penrose_patch(*cert, w, one, ShapeSet::all(5), Shape{2, 4});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Unindexable);
    }
}

TEST(Restrict, IdentityAndComposition) {
    const ShapeSet all = ShapeSet::all(5);
    SubshiftSpec spec = SubshiftSpec::full_shift(all);
    const auto& b = DirectionBasis::of(5);
    spec.forbidden.push_back(canonicalize(Patch(5, {{{0, 1}, b.zero()}})));
    spec.forbidden.push_back(canonicalize(Patch(5, {{{2, 4}, b.zero()}})));
    spec.forbidden.push_back(canonicalize(Patch(5, {{{0, 2}, b.zero()}})));
    const SubshiftSpec same = restrict_shapeset(spec, all);
    EXPECT_EQ(same.forbidden, spec.forbidden);

    const ShapeSet a(5, {Shape{0, 1}, Shape{0, 2}, Shape{1, 2}, Shape{2, 4}});
    const ShapeSet c(5, {Shape{0, 2}, Shape{1, 2}, Shape{2, 4}});
    const SubshiftSpec twice = restrict_shapeset(restrict_shapeset(spec, a), c);
    const SubshiftSpec once = restrict_shapeset(spec, c);
    EXPECT_EQ(twice.shapeset, once.shapeset);
    EXPECT_EQ(twice.forbidden, once.forbidden);
    ASSERT_EQ(once.forbidden.size(), 2u);
    EXPECT_EQ(once.forbidden[0], spec.forbidden[1]);

    EXPECT_THROW(restrict_shapeset(SubshiftSpec::full_shift(a), ShapeSet(5, {Shape{3, 4}})), Error);
}

// A_1 of the restriction equals the full-shift A_1 patterns that avoid the removed shapes.
TEST(Restrict, RankOneMatchesFilteredEnumeration) {
    const ShapeSet all = ShapeSet::all(5);
    const ShapeSet three(5, {Shape{0, 1}, Shape{0, 2}, Shape{1, 2}});
    SubshiftSpec spec = SubshiftSpec::full_shift(all);
    spec.complete = true;
    const SubshiftSpec r = restrict_shapeset(spec, three);
    const Enumeration direct = enumerate_geometric(1, r.prefix(1), r.shapeset);

    std::set<Pattern, std::less<>> filtered;
    std::mutex mu;
    visit_geometric(1, {}, all, {}, [&](const Pattern& p) {
        for (const PlacedRhombus& t : p.patch().tiles())
            if (!three.contains(t.shape)) return;
        std::lock_guard lock(mu);
        filtered.insert(p);
    });
    ASSERT_EQ(direct.patterns.size(), filtered.size());
    EXPECT_TRUE(std::equal(direct.patterns.begin(), direct.patterns.end(), filtered.begin()));
}

TEST(Fresh, OneTilePerMissingShape) {
    const ShapeSet all = ShapeSet::all(5);
    const Color a = Color::user("a"), b = Color::user("b");
    // 5 tiles on 3 shapes, then 7 tiles on 7 shapes.
    const std::vector<Shape> shapes(all.shapes().begin(), all.shapes().end());
    const Tileset five = Tileset::from_labels(
        ShapeSet(5, {shapes[0], shapes[1], shapes[2]}),
        {{shapes[0], {a, a, a, a}}, {shapes[0], {a, b, a, b}}, {shapes[1], {a, a, a, a}},
         {shapes[1], {b, b, b, b}}, {shapes[2], {a, a, b, b}}});
    const ReductionReport rep = fresh_color_report(five, all);
    EXPECT_EQ(rep.output.size(), 5u + 7u);
    EXPECT_EQ(rep.fresh, 7u);
    EXPECT_EQ(rep.subset.size(), 3u);
    std::set<Color> fresh;
    for (const TileLabels& t : rep.output.labels())
        for (const Color& c : t.colors)
            if (is_fresh(c)) EXPECT_TRUE(fresh.insert(c).second);
    EXPECT_EQ(fresh.size(), 28u);
    EXPECT_FALSE(is_fresh(Color::user("fresh0")));

    std::vector<TileLabels> seven;
    for (int i = 0; i < 7; ++i) seven.push_back({shapes[i], {a, a, a, a}});
    const Tileset t7 = Tileset::from_labels(ShapeSet(5, {shapes.begin(), shapes.begin() + 7}), seven);
    EXPECT_EQ(fresh_color_reduction(t7, all).size(), 7u + 3u);
    EXPECT_EQ(fresh_color_reduction(t7, t7.shapeset()), t7);
}

TEST(Fresh, AbsentFromRankOneAndTwo) {
    // T' on the square of the order-8 basis, completed with fresh tiles on every other shape.
    const ShapeSet full(8, {Shape{0, 1}, Shape{0, 2}, Shape{1, 2}, Shape{2, 3}});
    const ShapeSet sub(8, {Shape{0, 2}});
    const Color a = Color::user("a");
    const Tileset t = Tileset::from_labels(sub, {{Shape{0, 2}, {a, a, a, a}}});
    const Tileset out = fresh_color_reduction(t, full);
    for (int n : {1, 2}) {
        const Enumeration e = enumerate_locally_allowed(n, {}, out);
        ASSERT_FALSE(e.patterns.empty());
        for (const Pattern& p : e.patterns)
            for (const PlacedRhombus& r : p.patch().tiles())
                for (ColorId c : r.colors) EXPECT_FALSE(is_fresh((*p.patch().palette())[c]));
    }
}

TEST(Recurrence, Examples) {
    SubshiftSpec sq = SubshiftSpec::full_shift(squares());
    sq.complete = true;
    const auto r = find_uniformly_recurrent_candidate(sq, 2);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_TRUE(r[0].present_in_all);

    SubshiftSpec pen = SubshiftSpec::full_shift(ShapeSet::all(5));
    pen.complete = true;
    for (const ShapeRecurrence& s : find_uniformly_recurrent_candidate(pen, 1)) {
        EXPECT_FALSE(s.present_in_all);
        EXPECT_EQ(s.absent_at_rank, 1);
    }

    // Forbidding the only other shape forces {0,1} into every pattern.
    SubshiftSpec forced = SubshiftSpec::full_shift(ShapeSet(5, {Shape{0, 1}, Shape{0, 2}}));
    forced.forbidden.push_back(canonicalize(Patch(5, {{{0, 2}, DirectionBasis::of(5).zero()}})));
    forced.complete = true;
    const auto f = find_uniformly_recurrent_candidate(forced, 1);
    ASSERT_EQ(f.size(), 2u);
    EXPECT_TRUE(f[0].present_in_all);
    EXPECT_FALSE(f[1].present_in_all);

    SearchOptions tiny;
    tiny.budget.max_nodes = 5;
    EXPECT_THROW(find_uniformly_recurrent_candidate(pen, 1, tiny), Error);
}
