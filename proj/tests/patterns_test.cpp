#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "rhombus/error.hpp"
#include "rhombus/patterns.hpp"
#include "rhombus/solver.hpp"
#include "test_support.hpp"

using namespace rhombus;
using namespace rhombus::testing;

namespace {

// Translates of needle inside haystack, by trying every offset that maps some
// needle tile onto a haystack tile of the same shape.
bool brute_occurs(const Patch& needle, const Patch& haystack) {
    const std::set<PlacedRhombus> hay(haystack.tiles().begin(), haystack.tiles().end());
    for (const PlacedRhombus& h : haystack.tiles())
        for (const PlacedRhombus& n : needle.tiles()) {
            if (h.shape != n.shape) continue;
            const ExactPoint off = h.anchor - n.anchor;
            bool all = true;
            for (const PlacedRhombus& m : needle.tiles()) all = all && hay.count({m.shape, m.anchor + off, m.colors});
            if (all) return true;
        }
    return false;
}

}  // namespace

TEST(Canonicalize, TranslatesAgree) {
    const Pattern a = canonicalize(Patch(4, {square_at(0, 0)}));
    const Pattern b = canonicalize(Patch(4, {square_at(7, -3)}));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.digest(), b.digest());
    EXPECT_EQ(canonicalize(a.patch()), a);
}

TEST(Canonicalize, DistinctShapesDiffer) {
    const auto& b = DirectionBasis::of(5);
    const Pattern thin = canonicalize(Patch(5, {{{0, 2}, b.zero()}}));
    const Pattern thick = canonicalize(Patch(5, {{{0, 1}, b.zero()}}));
    EXPECT_FALSE(thin == thick);
}

TEST(Canonicalize, LeastVertexAtOrigin) {
    const Pattern p = canonicalize(square_block(2, 3));
    const auto verts = p.patch().vertices();
    EXPECT_EQ(*std::min_element(verts.begin(), verts.end()), DirectionBasis::of(4).zero());
}

TEST(OccursIn, Examples) {
    const Pattern one = canonicalize(Patch(4, {square_at(0, 0)}));
    const Patch block = square_block(2, 2);
    EXPECT_TRUE(occurs_in(one, block));
    EXPECT_FALSE(occurs_in(canonicalize(block), Patch(4, {square_at(0, 0)})));

    const Patch tromino(4, {square_at(0, 0), square_at(1, 0), square_at(0, 1)});
    const Patch domino(4, {square_at(5, 5), square_at(6, 5)});
    EXPECT_TRUE(brute_occurs(domino, tromino));
    EXPECT_TRUE(occurs_in(canonicalize(domino), tromino));
    const Patch vertical(4, {square_at(0, 0), square_at(0, 1)});
    EXPECT_EQ(occurs_in(canonicalize(vertical), tromino), brute_occurs(vertical, tromino));
}

TEST(OccursIn, TranslationInvariant) {
    const auto& b = DirectionBasis::of(4);
    const Patch hay = square_block(3, 2);
    const Pattern needle = canonicalize(Patch(4, {square_at(0, 0), square_at(1, 0)}));
    for (int dx = -2; dx <= 2; ++dx) EXPECT_TRUE(occurs_in(needle, translate(hay, b.integer(dx) + b.root(1) * 3)));
}

TEST(MinimalRadius, Examples) {
    const Patch single(4, {square_at(0, 0)});
    EXPECT_EQ(minimal_radius(single).radius, 0);
    EXPECT_TRUE(is_minimal_for(single, Rational(0)));

    const Patch star(4, {square_at(0, 0), square_at(-1, 0), square_at(-1, -1), square_at(0, -1)});
    const auto& b = DirectionBasis::of(4);
    // Oracle: distance from the center to every boundary edge.
    double best = 1e9;
    for (const EdgeKey& e : star.boundary_edges()) {
        const Eigen::Vector2d p = b.embed(e.start), q = b.embed(edge_end(b, e));
        const double t = std::clamp(-p.dot(q - p) / (q - p).squaredNorm(), 0.0, 1.0);
        best = std::min(best, (p + t * (q - p)).norm());
    }
    EXPECT_NEAR(best, 1.0, 1e-12);
    EXPECT_NEAR(covered_radius_at(star, b.zero()), best, 1e-12);
    EXPECT_TRUE(patch_support_contains_disk(star, b.zero(), Rational(1, 2)));
    EXPECT_TRUE(is_minimal_for(star, Rational(1)));

    const Patch domino(4, {square_at(0, 0), square_at(1, 0)});
    EXPECT_EQ(minimal_radius(domino).radius, 0);
}

TEST(RankAllowed, Examples) {
    SubshiftSpec spec = SubshiftSpec::full_shift(squares());
    spec.complete = false;
    EXPECT_TRUE(rank_allowed(Patch(4, {square_at(0, 0)}), spec, 0));
    EXPECT_THROW(rank_allowed(square_block(2, 2), spec, 1), Error);  // F may continue
    spec.complete = true;
    const Patch star(4, {square_at(0, 0), square_at(-1, 0), square_at(-1, -1), square_at(0, -1)});
    EXPECT_TRUE(rank_allowed(star, spec, 1));
    EXPECT_EQ(rank_allowed(star, spec, 1), is_minimal_for(star, Rational(1)));

    SubshiftSpec f = SubshiftSpec::full_shift(squares());
    f.forbidden.push_back(canonicalize(Patch(4, {square_at(0, 0), square_at(1, 0)})));
    f.complete = false;
    EXPECT_FALSE(rank_allowed(star, f, 1));
    try {
        rank_allowed(star, f, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RankExceedsKnownPrefix);
    }
    EXPECT_TRUE(rank_allowed(star, f, 1, 0));  // decoupled: radius 1, empty prefix
}

TEST(Subshift, ForbiddenShapesMustBelong) {
    SubshiftSpec spec = SubshiftSpec::full_shift(squares());
    spec.shapeset = ShapeSet(5, {Shape{0, 1}});
    spec.forbidden.push_back(canonicalize(Patch(5, {{{0, 2}, DirectionBasis::of(5).zero()}})));
    EXPECT_THROW(validate_spec(spec), Error);
}

// A 3x3 block of unique tiles: every 2x2 sub-block is locally allowed at rank 1,
// yet nothing of rank 2 exists, so the plane is not tiled.
TEST(Deception, RefutedAtRankTwo) {
    const Tileset ts = io::parse_tileset(io::read_file(data_path("deception-tileset.json")));
    const Patch block = io::parse_patch(io::read_file(data_path("deception-patch.json")));
    ASSERT_TRUE(check_color_validity(block));
    SubshiftSpec spec = SubshiftSpec::full_shift(ts.shapeset());
    spec.complete = true;

    const Enumeration a1 = enumerate_locally_allowed(1, {}, ts);
    EXPECT_EQ(a1.patterns.size(), 4u);
    const Pattern fixture = canonicalize(block);
    EXPECT_NE(std::find(a1.patterns.begin(), a1.patterns.end(), fixture), a1.patterns.end());

    EXPECT_TRUE(disk_tiling(ts, spec, 1));
    EXPECT_FALSE(disk_tiling(ts, spec, 2));
    EXPECT_EQ(describe(refutation_search(ts, spec, 3)), "UNTILEABLE_AT_RANK 2");
}

TEST(Tiles, EraseColors) {
    const Tileset ts = square_tiles({{"a", "b", "c", "d"}});
    EXPECT_EQ(erase_colors(ts), (std::vector<Shape>{Shape{0, 1}}));
    const Patch block = io::parse_patch(io::read_file(data_path("deception-patch.json")));
    const Patch bare = erase_colors(block);
    EXPECT_FALSE(bare.colored());
    EXPECT_EQ(erase_colors(bare), bare);
    for (std::size_t i = 0; i < bare.size(); ++i) EXPECT_EQ(bare.tiles()[i].anchor, block.tiles()[i].anchor);
}

TEST(Tiles, ColorValidity) {
    const Tileset mono = square_tiles({{"a", "a", "a", "a"}});
    std::vector<PlacedRhombus> two{square_at(0, 0), square_at(1, 0)};
    for (auto& t : two) t.colors = mono.tiles()[0].colors;
    EXPECT_TRUE(check_color_validity(Patch(4, two, mono.palette())));

    const Tileset ab = square_tiles({{"x", "a", "x", "x"}, {"x", "x", "x", "b"}});
    std::vector<PlacedRhombus> bad{square_at(0, 0), square_at(1, 0)};
    for (const Tile& t : ab.tiles()) {
        const TileLabels l = ab.labels(t);
        if (l.colors[1].name == "a") bad[0].colors = t.colors;
        if (l.colors[3].name == "b") bad[1].colors = t.colors;
    }
    EXPECT_FALSE(check_color_validity(Patch(4, bad, ab.palette())));
}

TEST(Tiles, RotationClosureErrors) {
    const Tileset ts = square_tiles({{"a", "b", "c", "d"}});
    EXPECT_EQ(rotation_closure(ts, 4).size(), 4u);
    EXPECT_EQ(rotation_closure(ts, 1).size(), 1u);
    try {
        rotation_closure(ts, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RotationNotInBasis);
    }
}

TEST(Tiles, RejectsMissingShapeAndDuplicates) {
    EXPECT_THROW(Tileset::from_labels(ShapeSet(5, {Shape{0, 1}, Shape{0, 2}}),
                                      {{Shape{0, 1}, {Color::user("a"), Color::user("a"), Color::user("a"), Color::user("a")}}}),
                 Error);
}
