#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <regex>

#include "rhombus/error.hpp"
#include "rhombus/io.hpp"
#include "rhombus/render.hpp"
#include "test_support.hpp"

using namespace rhombus;
using namespace rhombus::testing;

namespace {

std::string parse_error(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Parse) << e.what();
        return e.what();
    }
    ADD_FAILURE() << "no error";
    return {};
}

Tileset random_tileset(std::mt19937& rng, int order) {
    const ShapeSet all = ShapeSet::all(order);
    std::vector<Shape> pool(all.shapes().begin(), all.shapes().end());
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(1 + rng() % pool.size());
    std::vector<TileLabels> tiles;
    for (const Shape& s : pool)
        for (int k = 0, n = 1 + rng() % 3; k < n; ++k) {
            TileLabels t{s, {}};
            for (Color& c : t.colors)
                c = rng() % 5 == 0 ? Color::reserved("fresh" + std::to_string(rng() % 4))
                                   : Color::user(std::string(1, char('a' + rng() % 3)));
            tiles.push_back(t);
        }
    return Tileset::from_labels(ShapeSet(order, pool), tiles);
}

}  // namespace

TEST(Io, ShapesetAndTilesetRoundTrip) {
    std::mt19937 rng(7);
    for (int order : {4, 5, 6, 8})
        for (int rep = 0; rep < 10; ++rep) {
            const Tileset t = random_tileset(rng, order);
            const std::string text = io::emit_tileset(t);
            EXPECT_EQ(io::parse_tileset(text), t);
            EXPECT_EQ(io::emit_tileset(io::parse_tileset(text)), text);
            EXPECT_EQ(io::parse_shapeset(io::emit_shapeset(t.shapeset())), t.shapeset());
        }
}

TEST(Io, PatchRoundTrip) {
    const Tileset w20 = penrose_wang20();
    for (const auto& off : penrose_offsets())
        for (int window = 1; window <= 2; ++window) {
            const Patch p = pentagrid_patch(window, off);
            EXPECT_EQ(io::parse_patch(io::emit_patch(p)), p);
            const Patch c = *find_coloring(p, w20);
            const Patch back = io::parse_patch(io::emit_patch(c));
            EXPECT_EQ(back, c);
            EXPECT_EQ(io::emit_patch(back), io::emit_patch(c));
        }
    EXPECT_EQ(io::parse_patch(io::emit_patch(Patch(6, {}))).size(), 0u);
}

TEST(Io, SpecRoundTrip) {
    SubshiftSpec spec = SubshiftSpec::full_shift(ShapeSet::all(5), "pair-free");
    spec.forbidden.push_back(canonicalize(pentagrid_patch(1, penrose_offsets()[0])));
    spec.forbidden.push_back(canonicalize(Patch(5, {PlacedRhombus{{0, 2}, DirectionBasis::of(5).zero()}})));
    spec.complete = true;
    const std::string text = io::emit_spec(spec);
    const SubshiftSpec back = io::parse_spec(text);
    EXPECT_EQ(back.name, spec.name);
    EXPECT_EQ(back.shapeset, spec.shapeset);
    EXPECT_EQ(back.forbidden, spec.forbidden);
    EXPECT_TRUE(back.complete);
    EXPECT_EQ(io::emit_spec(back), text);
}

TEST(Io, WangCertificatePatternsRoundTrip) {
    SquareWangTileset w;
    w.colors = {Color::user("x"), Color::user("y")};
    w.tiles = {{w.colors[0], w.colors[1], w.colors[0], w.colors[1]}, {w.colors[1], w.colors[0], w.colors[1], w.colors[0]}};
    const SquareWangTileset wb = io::parse_wang(io::emit_wang(w));
    EXPECT_EQ(wb.colors, w.colors);
    EXPECT_EQ(wb.tiles, w.tiles);

    const auto ce = single_tile_isometry_counterexample();
    const PeriodicCertificate cb = io::parse_certificate(io::emit_certificate(ce.certificate));
    EXPECT_EQ(cb.domain, ce.certificate.domain);
    EXPECT_EQ(cb.periods, ce.certificate.periods);
    EXPECT_EQ(cb.complete_f, ce.certificate.complete_f);
    EXPECT_TRUE(verify_certificate(cb, ce.closure, {}));

    const auto patterns = enumerate_locally_allowed(1, {}, square_tiles({{"a", "b", "a", "b"}, {"a", "a", "a", "a"}})).patterns;
    ASSERT_FALSE(patterns.empty());
    EXPECT_EQ(io::parse_patterns(io::emit_patterns(patterns)), patterns);
}

TEST(Io, ParseErrorsNameTheField) {
    EXPECT_NE(parse_error([] { io::parse_tileset("{\n\"format_version\": 1,\n  oops\n}"); }).find("line 3"),
              std::string::npos);
    const std::string bad_shape =
        R"({"format_version":1,"kind":"shapeset","basis_order":5,"shapes":[[0,1],[0,"x"]]})";
    EXPECT_NE(parse_error([&] { io::parse_shapeset(bad_shape); }).find("shapes[1]"), std::string::npos);
    const std::string bad_kind = R"({"format_version":1,"kind":"patch","basis_order":5,"shapes":[]})";
    EXPECT_NE(parse_error([&] { io::parse_shapeset(bad_kind); }).find("kind"), std::string::npos);
    const std::string bad_version = R"({"format_version":9,"kind":"shapeset","basis_order":5,"shapes":[]})";
    EXPECT_NE(parse_error([&] { io::parse_shapeset(bad_version); }).find("format_version"), std::string::npos);
    const std::string bad_edges =
        R"({"format_version":1,"kind":"tileset","basis_order":4,"colors":["a"],"tiles":[{"shape":[0,1],"edges":["a","a","a"]}]})";
    EXPECT_NE(parse_error([&] { io::parse_tileset(bad_edges); }).find("tiles[0].edges"), std::string::npos);
    const std::string missing = R"({"format_version":1,"kind":"patch","basis_order":4})";
    EXPECT_NE(parse_error([&] { io::parse_patch(missing); }).find("placed"), std::string::npos);
}

TEST(Io, AtomicWrite) {
    const auto dir = std::filesystem::temp_directory_path() / "rhombus_io_test";
    std::filesystem::create_directories(dir);
    const auto file = dir / "t.json";
    io::write_file_atomic(file, "first");
    io::write_file_atomic(file, "second");
    EXPECT_EQ(io::read_file(file), "second");
    EXPECT_FALSE(std::filesystem::exists(dir / "t.json.tmp"));
    std::filesystem::remove_all(dir);
}

TEST(Render, EmptyPatchIsSkeleton) {
    const std::string svg = render_svg(Patch(5, {}));
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_EQ(svg.find("<polygon"), std::string::npos);
}

TEST(Render, OnePolygonPerTile) {
    const std::string svg = render_svg(square_block(1, 1));
    const std::regex poly("<polygon");
    EXPECT_EQ(std::distance(std::sregex_iterator(svg.begin(), svg.end(), poly), std::sregex_iterator()), 1);
    EXPECT_NE(svg.find("points=\"8,48 48,48 48,8 8,8\""), std::string::npos) << svg;
}

TEST(Render, Deterministic) {
    const Patch p = *find_coloring(pentagrid_patch(2, penrose_offsets()[1]), penrose_wang20());
    RenderStyle style;
    style.chains = style.arrows = true;
    EXPECT_EQ(render_svg(p, style), render_svg(io::parse_patch(io::emit_patch(p)), style));
}

TEST(Render, PentagridChainsGolden) {
    RenderStyle style;
    style.chains = true;
    style.indices = true;
    style.index_shape = Shape{0, 1};
    const std::string svg = render_svg(pentagrid_patch(2, penrose_offsets()[0]), style);
    EXPECT_EQ(svg, io::read_file(data_path("../golden/pentagrid-w2-chains.svg")));
}
