#include <gtest/gtest.h>

#include "rhombus/error.hpp"
#include "rhombus/solver.hpp"

using namespace rhombus;

namespace {

ShapeSet squares() { return ShapeSet(4, {Shape{0, 1}}); }

Tileset square_tiles(const std::vector<std::array<const char*, 4>>& rows) {
    std::vector<TileLabels> tiles;
    for (const auto& r : rows)
        tiles.push_back({Shape{0, 1}, {Color::user(r[0]), Color::user(r[1]), Color::user(r[2]), Color::user(r[3])}});
    return Tileset::from_labels(squares(), tiles);
}

}  // namespace

TEST(Solver, RankZeroIsOnePatternPerTile) {
    const Tileset ts = square_tiles({{"a", "b", "c", "d"}, {"a", "a", "a", "a"}, {"b", "a", "b", "a"}});
    const Enumeration e = enumerate_locally_allowed(0, {}, ts);
    ASSERT_EQ(e.patterns.size(), 3u);
    for (const Pattern& p : e.patterns) EXPECT_EQ(p.size(), 1u);
}

TEST(Solver, MonochromeSquareIsPeriodic) {
    const Tileset ts = square_tiles({{"a", "a", "a", "a"}});
    const SearchVerdict v = refutation_search(ts, SubshiftSpec::full_shift(squares(), "squares"), 2);
    EXPECT_EQ(describe(v), "PERIODIC_CERTIFICATE period (1,0),(0,1)");
    ASSERT_TRUE(v.certificate);
    EXPECT_EQ(v.certificate->domain.size(), 1u);
    EXPECT_TRUE(verify_certificate(*v.certificate, ts, {}));
}

TEST(Solver, FourColorSquareDiesAtRankOne) {
    const Tileset ts = square_tiles({{"a", "b", "c", "d"}});
    const SearchVerdict v = refutation_search(ts, SubshiftSpec::full_shift(squares(), "squares"), 3);
    EXPECT_EQ(describe(v), "UNTILEABLE_AT_RANK 1");
}

TEST(Solver, HalfTurnClosureTilesWithTwoTiles) {
    const Tileset ts = rotation_closure(square_tiles({{"a", "b", "c", "d"}}), 2);
    ASSERT_EQ(ts.size(), 2u);
    const SearchVerdict v = refutation_search(ts, SubshiftSpec::full_shift(squares(), "squares"), 2);
    ASSERT_EQ(v.kind, VerdictKind::PeriodicCertificate);
    EXPECT_EQ(v.certificate->domain.size(), 2u);
    EXPECT_EQ(describe(v), "PERIODIC_CERTIFICATE period (1,1),(-1,1)");
}

TEST(Solver, RankOneSquarePatternsAreStarsOfFour) {
    const Enumeration e = enumerate_geometric(1, {}, squares());
    ASSERT_EQ(e.patterns.size(), 1u);
    EXPECT_EQ(e.patterns.front().size(), 4u);
}

TEST(Solver, NodeBudgetIsReported) {
    SearchOptions opts;
    opts.budget.max_nodes = 3;
    const Enumeration e = enumerate_geometric(2, {}, ShapeSet::all(5), opts);
    EXPECT_TRUE(e.budget_exhausted);
    EXPECT_TRUE(e.patterns.empty());
    const Tileset ts = geometric_tileset(ShapeSet::all(5));
    EXPECT_THROW(disk_tiling(ts, SubshiftSpec::full_shift(ShapeSet::all(5), "p"), 3, opts), Error);
}

TEST(Solver, ParallelMatchesSerial) {
    SearchOptions one, four;
    four.jobs = 4;
    const auto a = enumerate_geometric(1, {}, ShapeSet::all(5), one);
    const auto b = enumerate_geometric(1, {}, ShapeSet::all(5), four);
    EXPECT_EQ(a.stats.nodes, b.stats.nodes);
    ASSERT_EQ(a.patterns.size(), b.patterns.size());
    for (std::size_t i = 0; i < a.patterns.size(); ++i) EXPECT_TRUE(a.patterns[i] == b.patterns[i]);
}
