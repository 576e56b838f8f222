#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "rhombus/error.hpp"
#include "rhombus/penrose.hpp"
#include "rhombus/solver.hpp"
#include "test_support.hpp"

using namespace rhombus;
using namespace rhombus::testing;

TEST(Penrose, Wang20Counts) {
    const Tileset t = penrose_wang20();
    EXPECT_EQ(t.size(), 20u);
    EXPECT_EQ(t.shapeset(), ShapeSet::all(5));
    std::map<Shape, int> per;
    for (const TileLabels& l : t.labels()) ++per[l.shape];
    EXPECT_EQ(per.size(), 10u);
    for (const auto& [s, n] : per) EXPECT_EQ(n, 2);
}

TEST(Penrose, Wang4ClosesToWang20) {
    const Tileset four = penrose_wang4();
    EXPECT_EQ(four.size(), 4u);
    EXPECT_EQ(rotation_closure(four, 5, rotate_arrow_color), penrose_wang20());
}

TEST(Penrose, ArrowFamilyIsTwentyTranslationClasses) {
    // Rotating one thick and one thin arrowed rhomb through all ten orientations.
    const auto tiles = penrose_arrow_tiles();
    const auto thin = std::find_if(tiles.begin(), tiles.end(), [](const ArrowTile& t) { return t.shape == Shape{0, 2}; });
    ASSERT_NE(thin, tiles.end());
    std::set<ArrowTile> orbit;
    for (const ArrowTile& base : {tiles.front(), *thin}) {
        for (int k = 0; k < 10; ++k) orbit.insert(rotate_arrow_tile(base, k));
    }
    EXPECT_EQ(orbit.size(), 20u);
    EXPECT_EQ(std::vector<ArrowTile>(orbit.begin(), orbit.end()), tiles);
    std::vector<TileLabels> colored;
    for (const ArrowTile& t : orbit) colored.push_back(arrows_to_colors(t));
    EXPECT_EQ(Tileset::from_labels(ShapeSet::all(5), colored), penrose_wang20());
}

TEST(Penrose, ColorsPreserveMatching) {
    const auto& b = DirectionBasis::of(5);
    const auto tiles = penrose_arrow_tiles();
    std::size_t pairs = 0;
    for (const ArrowTile& a : tiles) {
        const PlacedRhombus pa{a.shape, b.zero(), kUncolored};
        const TileLabels ca = arrows_to_colors(a);
        for (int s = 0; s < 4; ++s) {
            const EdgeKey e = edge_key(b, pa, s);
            const bool left = !interior_left_of_edge(b, pa, s);
            for (const ArrowTile& c : tiles) {
                if (!c.shape.has_line(e.line) || c.shape == a.shape) continue;
                const PlacedRhombus pc = rhombus_on_edge(b, e, c.shape, left);
                int t = -1;
                for (int k = 0; k < 4; ++k)
                    if (edge_key(b, pc, k) == e) t = k;
                ASSERT_GE(t, 0);
                const bool arrows = arrows_match(a.arrows[s], c.arrows[t]);
                const bool colors = ca.colors[s] == arrows_to_colors(c).colors[t];
                EXPECT_EQ(arrows, colors);
                ++pairs;
            }
        }
    }
    EXPECT_GT(pairs, 0u);
}

TEST(Penrose, ErasingCommutes) {
    for (const ArrowTile& t : penrose_arrow_tiles()) EXPECT_EQ(arrows_to_colors(t).shape, t.shape);
    EXPECT_THROW(arrows_to_colors(ArrowTile{Shape{0, 7}, {}}), Error);
}

TEST(Penrose, Wang20TilesRankOne) {
    SubshiftSpec spec = SubshiftSpec::full_shift(ShapeSet::all(5));
    spec.complete = true;
    EXPECT_TRUE(disk_tiling(penrose_wang20(), spec, 1));
}

TEST(Penrose, PentagridPatchesAreDecorable) {
    const Tileset w20 = penrose_wang20();
    for (const auto& off : penrose_offsets())
        for (int window = 1; window <= 3; ++window) {
            const Patch p = pentagrid_patch(window, off);
            ASSERT_FALSE(p.empty());
            EXPECT_EQ(p.euler_characteristic(), 1);
            const auto colored = find_coloring(p, w20, 1000000);
            ASSERT_TRUE(colored) << "window " << window;
            EXPECT_TRUE(check_color_validity(*colored));
            EXPECT_EQ(erase_colors(*colored), p);
        }
}

TEST(Penrose, ValidThreeTilePatchFixture) {
    const Patch p = io::parse_patch(io::read_file(data_path("penrose-3tile.json")));
    ASSERT_EQ(p.size(), 3u);
    EXPECT_TRUE(check_color_validity(p));
    std::vector<PlacedRhombus> bare;
    for (const PlacedRhombus& t : p.tiles()) bare.push_back({t.shape, t.anchor});
    EXPECT_EQ(erase_colors(p), Patch(5, bare));
}

TEST(Penrose, PentagridErrors) {
    const std::array<Rational, 5> zero{};
    try {
        pentagrid_patch(1, zero);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SingularGrid);
    }
    EXPECT_THROW(pentagrid_patch(0, penrose_offsets()[0]), Error);
}

TEST(Penrose, HalfTurnCounterexample) {
    const IsometryCounterexample ce = single_tile_isometry_counterexample();
    const SubshiftSpec spec = SubshiftSpec::full_shift(squares());
    EXPECT_EQ(describe(refutation_search(ce.single, spec, 2)), "UNTILEABLE_AT_RANK 1");
    EXPECT_EQ(ce.closure.size(), 2u);
    EXPECT_EQ(ce.certificate.domain.size(), 2u);
    EXPECT_TRUE(verify_certificate(ce.certificate, ce.closure, {}));
    const SearchVerdict v = refutation_search(ce.closure, spec, 2);
    EXPECT_EQ(v.kind, VerdictKind::PeriodicCertificate);
}

TEST(Penrose, Wang20Golden) {
    EXPECT_EQ(io::emit_tileset(penrose_wang20()), io::read_file(data_path("../golden/wang20.json")));
    EXPECT_EQ(io::emit_tileset(penrose_wang4()), io::read_file(data_path("../golden/wang4.json")));
}
