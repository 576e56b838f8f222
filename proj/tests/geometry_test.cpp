#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rhombus/error.hpp"
#include "rhombus/geometry.hpp"

using namespace rhombus;

namespace {

ExactPoint from(int order, std::vector<std::int64_t> c) { return DirectionBasis::of(order).reduce(c); }

PlacedRhombus square_at(int x, int y) {
    const auto& b = DirectionBasis::of(4);
    return {{0, 1}, b.integer(x) + b.root(1) * y};
}

Patch star_of_squares() {
    return Patch(4, {square_at(0, 0), square_at(-1, 0), square_at(-1, -1), square_at(0, -1)});
}

}  // namespace

TEST(PointEq, Examples) {
    EXPECT_TRUE(point_eq(from(4, {1, 0, -1, 0}), from(4, {1, 0, -1, 0})));
    EXPECT_TRUE(point_eq(from(5, {1, 1, 1, 1, 1}), from(5, {0, 0, 0, 0, 0})));
    EXPECT_FALSE(point_eq(from(4, {1, 0, 0, 0}), from(4, {0, 1, 0, 0})));
    EXPECT_THROW(point_eq(from(4, {1}), from(5, {1})), Error);
}

TEST(PointEq, FifthRootsSumNumerically) {
    double x = 0, y = 0;
    for (int k = 0; k < 5; ++k) x += std::cos(2 * M_PI * k / 5), y += std::sin(2 * M_PI * k / 5);
    EXPECT_LT(std::hypot(x, y), 1e-12);
}

TEST(PointEq, PentagonKernelIsAllOnes) {
    const auto& b = DirectionBasis::of(5);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-6, 6);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::int64_t> c(5);
        for (auto& x : c) x = d(rng);
        const bool multiple = std::all_of(c.begin(), c.end(), [&](auto x) { return x == c[0]; });
        const ExactPoint p = b.reduce(c);
        EXPECT_EQ(p.is_zero(), multiple);
        EXPECT_EQ(b.embed(p).norm() < 1e-9, multiple);
        std::vector<std::int64_t> k(5, d(rng));
        EXPECT_TRUE(b.reduce(k).is_zero());
    }
}

TEST(Signs, ExactOnIrrationalTies) {
    const auto& b = DirectionBasis::of(5);
    // 1 + zeta + zeta^4 = 1 + 2cos(72deg), the golden ratio
    const ExactPoint p = b.integer(1) + b.root(1) + b.root(4);
    EXPECT_EQ(b.sign_im(p), 0);
    EXPECT_EQ(b.sign_re(p), 1);
    // zeta + zeta^4 - (zeta^2 + zeta^3) - 1 == sqrt5 - 1 > 0
    EXPECT_EQ(b.sign_re(b.root(1) + b.root(4) - b.root(2) - b.root(3) - b.integer(1)), 1);
    EXPECT_EQ(b.sign_re(b.root(1) + b.root(4) + b.root(2) + b.root(3) + b.integer(1)), 0);
}

TEST(ShapeSet, PenroseAngles) {
    const ShapeSet s = ShapeSet::all(5);
    EXPECT_EQ(s.size(), 10u);
    EXPECT_NEAR(s.theta_min(), M_PI / 5, 1e-12);
    EXPECT_NEAR(s.max_diameter(), 2 * std::cos(M_PI / 10), 1e-12);
    EXPECT_THROW(ShapeSet(5, {{1, 1}}), Error);
    EXPECT_THROW(ShapeSet(4, {{0, 2}}), Error);
}

TEST(PlaceAdjacent, Domino) {
    const Patch one(4, {square_at(0, 0)});
    const auto& b = one.basis();
    const Patch two = place_adjacent(one, EdgeKey{b.integer(1), 1}, {0, 1});
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(two.tiles()[1], square_at(1, 0));
    EXPECT_EQ(two.boundary_edges().size(), 6u);
}

TEST(PlaceAdjacent, PenroseThickThin) {
    const auto& b = DirectionBasis::of(5);
    const Patch thick(5, {{{0, 1}, b.zero()}});
    const Patch two = place_adjacent(thick, EdgeKey{b.zero(), 0}, {0, 2});
    ASSERT_EQ(two.size(), 2u);
    PlacedRhombus thin;
    for (const auto& t : two.tiles())
        if (t.shape == Shape{0, 2}) thin = t;
    const auto v = thin.vertices(b);
    EXPECT_EQ(v[0], from(5, {0, 0, -1}));
    EXPECT_EQ(v[1], from(5, {1, 0, -1}));
    EXPECT_EQ(v[2], from(5, {1}));
    EXPECT_EQ(v[3], from(5, {0}));
}

TEST(PlaceAdjacent, Errors) {
    const auto& b = DirectionBasis::of(8);
    // Three squares around the origin; a 135 degree corner does not fit the 90 degree gap.
    std::vector<PlacedRhombus> sq = {{{0, 2}, b.zero()}, {{0, 2}, -b.root(0)}, {{0, 2}, -b.root(0) - b.root(2)}};
    const Patch three(8, sq);
    EXPECT_THROW(place_adjacent(three, EdgeKey{b.zero(), 0}, {0, 1}), Error);
    try {
        place_adjacent(three, EdgeKey{b.zero(), 0}, {0, 1});
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Overlap);
    }
    try {
        place_adjacent(three, EdgeKey{b.zero(), 0}, {1, 2});
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotParallel);
    }
    try {
        place_adjacent(three, EdgeKey{b.zero(), 3}, {0, 3});
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotBoundary);
    }
    EXPECT_NO_THROW(place_adjacent(three, EdgeKey{b.zero(), 0}, {0, 2}));
}

TEST(Patch, RejectsHolesAndOffsets) {
    const auto& b = DirectionBasis::of(4);
    std::vector<PlacedRhombus> ring;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            if (x != 1 || y != 1) ring.push_back(square_at(x, y));
    EXPECT_THROW(Patch(4, ring), Error);
    EXPECT_NO_THROW(Patch(4, ring, nullptr, false));
    // Two squares with partially shared sides are not edge-to-edge.
    const auto& b8 = DirectionBasis::of(8);
    std::vector<PlacedRhombus> slid = {{{0, 2}, b8.zero()}, {{0, 2}, b8.root(2) + b8.root(1) - b8.root(3) - b8.root(0)}};
    (void)b;
    EXPECT_THROW(Patch(8, slid), Error);
}

TEST(Disk, Examples) {
    const Patch one(4, {square_at(0, 0)});
    const auto& b = one.basis();
    EXPECT_TRUE(patch_support_contains_disk(one, b.zero(), 0));
    EXPECT_FALSE(patch_support_contains_disk(one, b.zero(), Rational(1, 2)));
    const Patch star = star_of_squares();
    EXPECT_TRUE(patch_support_contains_disk(star, b.zero(), Rational(1, 2)));
    EXPECT_TRUE(patch_support_contains_disk(star, b.zero(), 1));
    EXPECT_FALSE(patch_support_contains_disk(star, b.zero(), Rational(101, 100)));
    EXPECT_THROW(patch_support_contains_disk(star, b.integer(5), 0), Error);
}

TEST(Disk, BruteForceStarBoundaryDistance) {
    const Patch star = star_of_squares();
    const auto& b = star.basis();
    double best = 1e9;
    for (const EdgeKey& e : star.boundary_edges()) {
        const Eigen::Vector2d s = b.embed(e.start), d = b.embed(edge_end(b, e)) - s;
        const double t = std::clamp(-s.dot(d), 0.0, 1.0);
        best = std::min(best, (s + t * d).norm());
    }
    EXPECT_EQ(star.boundary_edges().size(), 8u);
    EXPECT_NEAR(best, 1.0, 1e-12);
}

TEST(Patch, RandomGrowthKeepsInvariants) {
    std::mt19937 rng(3);
    for (int order : {4, 5, 8}) {
        const ShapeSet all = ShapeSet::all(order);
        const auto& b = all.basis();
        Patch p(order, {{all.shapes()[0], b.zero()}});
        for (int step = 0; step < 40; ++step) {
            auto boundary = p.boundary_edges();
            const EdgeKey e = boundary[rng() % boundary.size()];
            std::vector<Shape> fits;
            for (const Shape& s : all.shapes())
                if (s.has_line(e.line)) fits.push_back(s);
            try {
                p = place_adjacent(p, e, fits[rng() % fits.size()]);
            } catch (const Error&) {
                continue;
            }
            // Re-validate from scratch, holes allowed.
            std::vector<PlacedRhombus> t(p.tiles().begin(), p.tiles().end());
            ASSERT_NO_THROW(Patch(order, t, nullptr, false));
            for (const auto& [k, inc] : p.edges()) ASSERT_TRUE(inc.count == 1 || inc.count == 2);
        }
    }
}
