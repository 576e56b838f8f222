#include "rhombus/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rhombus/error.hpp"

namespace rhombus::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::Parse, "field '" + field + "': " + what);
}

json parse_text(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": malformed JSON");
    }
}

const json& member(const json& j, const std::string& path, const char* key) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

long long as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long long>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& path, std::size_t size = 0) {
    if (!j.is_array()) fail(path, "expected an array");
    if (size && j.size() != size) fail(path, "expected " + std::to_string(size) + " entries");
    return j;
}

void check_header(const json& j, const char* kind) {
    const long long v = as_int(member(j, "", "format_version"), "format_version");
    if (v != kFormatVersion) fail("format_version", "unsupported version " + std::to_string(v));
    if (j.contains("kind") && as_string(j["kind"], "kind") != kind)
        fail("kind", "expected '" + std::string(kind) + "'");
}

json header(const char* kind) { return json{{"format_version", kFormatVersion}, {"kind", kind}}; }

template <typename F>
auto guarded(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Parse) throw;
        fail(path, e.what());
    }
}

int order_of(const json& j, const std::string& path) {
    const auto n = as_int(member(j, path, "basis_order"), join(path, "basis_order"));
    return guarded(join(path, "basis_order"), [&] { return DirectionBasis::of(static_cast<int>(n)).order(); });
}

Shape shape_from(const json& j, const std::string& path) {
    as_array(j, path, 2);
    return Shape{static_cast<int>(as_int(j[0], at(path, 0))), static_cast<int>(as_int(j[1], at(path, 1)))};
}

json point_json(const DirectionBasis& b, const ExactPoint& p) { return b.coeffs(p); }

ExactPoint point_from(const DirectionBasis& b, const json& j, const std::string& path) {
    as_array(j, path);
    std::vector<std::int64_t> c;
    for (std::size_t i = 0; i < j.size(); ++i) c.push_back(as_int(j[i], at(path, i)));
    return b.reduce(c);
}

json shapeset_json(const ShapeSet& s) {
    json shapes = json::array();
    for (const Shape& sh : s.shapes()) shapes.push_back({sh.u, sh.v});
    return json{{"basis_order", s.order()}, {"shapes", shapes}};
}

ShapeSet shapeset_from(const json& j, const std::string& path) {
    const int n = order_of(j, path);
    const json& arr = as_array(member(j, path, "shapes"), join(path, "shapes"));
    std::vector<Shape> shapes;
    for (std::size_t i = 0; i < arr.size(); ++i) shapes.push_back(shape_from(arr[i], at(join(path, "shapes"), i)));
    return guarded(join(path, "shapes"), [&] { return ShapeSet(n, shapes); });
}

json patch_json(const Patch& p) {
    const DirectionBasis& b = p.basis();
    json placed = json::array();
    for (const PlacedRhombus& t : p.tiles()) {
        json e{{"shape", {t.shape.u, t.shape.v}}, {"anchor", point_json(b, t.anchor)}};
        if (p.colored()) {
            json cs = json::array();
            for (ColorId c : t.colors) cs.push_back((*p.palette())[c].label());
            e["colors"] = cs;
        }
        placed.push_back(e);
    }
    return json{{"basis_order", p.order()}, {"placed", placed}};
}

Patch patch_from(const json& j, const std::string& path, bool check_holes = true) {
    const int n = order_of(j, path);
    const DirectionBasis& b = DirectionBasis::of(n);
    const std::string pp = join(path, "placed");
    const json& arr = as_array(member(j, path, "placed"), pp);
    std::vector<PlacedRhombus> tiles;
    std::map<Color, ColorId> ids;
    std::vector<std::array<Color, 4>> labels;
    bool colored = false;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string tp = at(pp, i);
        const Shape s = shape_from(member(arr[i], tp, "shape"), join(tp, "shape"));
        guarded(join(tp, "shape"), [&] {
            validate_shape(b, s);
            return 0;
        });
        tiles.push_back({s, point_from(b, member(arr[i], tp, "anchor"), join(tp, "anchor")), kUncolored});
        const bool has = arr[i].contains("colors");
        if (i > 0 && has != colored) fail(tp, "colors must be given for every tile or none");
        colored = has;
        if (has) {
            const json& cs = as_array(arr[i]["colors"], join(tp, "colors"), 4);
            std::array<Color, 4> l;
            for (int k = 0; k < 4; ++k) {
                l[k] = Color::parse(as_string(cs[k], at(join(tp, "colors"), k)));
                ids.emplace(l[k], 0);
            }
            labels.push_back(l);
        }
    }
    std::shared_ptr<const Palette> palette;
    if (colored) {
        auto pal = std::make_shared<Palette>();
        for (auto& [c, id] : ids) {
            id = static_cast<ColorId>(pal->size());
            pal->push_back(c);
        }
        for (std::size_t i = 0; i < tiles.size(); ++i)
            for (int k = 0; k < 4; ++k) tiles[i].colors[k] = ids.at(labels[i][k]);
        palette = std::move(pal);
    }
    return guarded(pp, [&] { return Patch(n, std::move(tiles), palette, check_holes); });
}

json tileset_json(const Tileset& ts) {
    json colors = json::array();
    for (const Color& c : *ts.palette()) colors.push_back(c.label());
    json tiles = json::array();
    for (const TileLabels& t : ts.labels()) {
        json e = json::array();
        for (const Color& c : t.colors) e.push_back(c.label());
        tiles.push_back({{"shape", {t.shape.u, t.shape.v}}, {"edges", e}});
    }
    return json{{"basis_order", ts.order()}, {"colors", colors}, {"tiles", tiles}};
}

Tileset tileset_from(const json& j, const std::string& path) {
    const int n = order_of(j, path);
    std::set<Color> alphabet;
    const bool has_alphabet = j.contains("colors");
    if (has_alphabet) {
        const json& cs = as_array(j["colors"], join(path, "colors"));
        for (std::size_t i = 0; i < cs.size(); ++i)
            alphabet.insert(Color::parse(as_string(cs[i], at(join(path, "colors"), i))));
    }
    const std::string tp = join(path, "tiles");
    const json& arr = as_array(member(j, path, "tiles"), tp);
    std::vector<TileLabels> tiles;
    std::set<Shape> shapes;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = at(tp, i);
        TileLabels t{shape_from(member(arr[i], p, "shape"), join(p, "shape")), {}};
        const json& es = as_array(member(arr[i], p, "edges"), join(p, "edges"), 4);
        for (int k = 0; k < 4; ++k) {
            t.colors[k] = Color::parse(as_string(es[k], at(join(p, "edges"), k)));
            if (has_alphabet && !alphabet.count(t.colors[k]))
                fail(at(join(p, "edges"), k), "color '" + t.colors[k].label() + "' not in colors");
        }
        shapes.insert(t.shape);
        tiles.push_back(t);
    }
    ShapeSet ss = j.contains("shapes") ? shapeset_from(j, path)
                                       : guarded(tp, [&] { return ShapeSet(n, {shapes.begin(), shapes.end()}); });
    return guarded(tp, [&] { return Tileset::from_labels(ss, tiles); });
}

}  // namespace

std::string emit_shapeset(const ShapeSet& shapes) {
    json j = header("shapeset");
    j.update(shapeset_json(shapes));
    return j.dump(2) + "\n";
}

ShapeSet parse_shapeset(std::string_view text) {
    const json j = parse_text(text);
    check_header(j, "shapeset");
    return shapeset_from(j, "");
}

std::string emit_tileset(const Tileset& tileset) {
    json j = header("tileset");
    j.update(tileset_json(tileset));
    // The shapeset is implied by the tiles: every shape has a tile.
    return j.dump(2) + "\n";
}

Tileset parse_tileset(std::string_view text) {
    const json j = parse_text(text);
    check_header(j, "tileset");
    return tileset_from(j, "");
}

std::string emit_patch(const Patch& patch) {
    json j = header("patch");
    j.update(patch_json(patch));
    return j.dump(2) + "\n";
}

Patch parse_patch(std::string_view text) {
    const json j = parse_text(text);
    check_header(j, "patch");
    return patch_from(j, "");
}

std::string emit_spec(const SubshiftSpec& spec) {
    json j = header("subshift");
    j["name"] = spec.name;
    j["shapeset"] = shapeset_json(spec.shapeset);
    json f = json::array();
    for (const Pattern& p : spec.forbidden) f.push_back(patch_json(p.patch()));
    j["forbidden"] = f;
    j["complete"] = spec.complete;
    return j.dump(2) + "\n";
}

SubshiftSpec parse_spec(std::string_view text) {
    const json j = parse_text(text);
    check_header(j, "subshift");
    SubshiftSpec spec;
    spec.name = j.contains("name") ? as_string(j["name"], "name") : "subshift";
    spec.shapeset = shapeset_from(member(j, "", "shapeset"), "shapeset");
    if (j.contains("forbidden")) {
        const json& f = as_array(j["forbidden"], "forbidden");
        for (std::size_t i = 0; i < f.size(); ++i) spec.forbidden.push_back(canonicalize(patch_from(f[i], at("forbidden", i))));
    }
    if (j.contains("complete")) {
        if (!j["complete"].is_boolean()) fail("complete", "expected a boolean");
        spec.complete = j["complete"].get<bool>();
    }
    guarded("forbidden", [&] {
        validate_spec(spec);
        return 0;
    });
    return spec;
}

std::string emit_wang(const SquareWangTileset& wang) {
    json j = header("square-wang");
    json colors = json::array();
    for (const Color& c : wang.colors) colors.push_back(c.label());
    json tiles = json::array();
    for (const auto& t : wang.tiles) tiles.push_back({t[0].label(), t[1].label(), t[2].label(), t[3].label()});
    j["colors"] = colors;
    j["tiles"] = tiles;
    return j.dump(2) + "\n";
}

SquareWangTileset parse_wang(std::string_view text) {
    const json j = parse_text(text);
    check_header(j, "square-wang");
    SquareWangTileset w;
    const json& cs = as_array(member(j, "", "colors"), "colors");
    for (std::size_t i = 0; i < cs.size(); ++i) w.colors.push_back(Color::parse(as_string(cs[i], at("colors", i))));
    const json& ts = as_array(member(j, "", "tiles"), "tiles");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const std::string p = at("tiles", i);
        as_array(ts[i], p, 4);
        std::array<Color, 4> t;
        for (int k = 0; k < 4; ++k) t[k] = Color::parse(as_string(ts[i][k], at(p, k)));
        w.tiles.push_back(t);
    }
    guarded("tiles", [&] {
        w.validate();
        return 0;
    });
    return w;
}

std::string emit_certificate(const PeriodicCertificate& cert) {
    json j = header("periodic-certificate");
    const DirectionBasis& b = cert.domain.basis();
    j["periods"] = {point_json(b, cert.periods[0]), point_json(b, cert.periods[1])};
    j["complete_f"] = cert.complete_f;
    j["domain"] = patch_json(cert.domain);
    return j.dump(2) + "\n";
}

PeriodicCertificate parse_certificate(std::string_view text) {
    const json j = parse_text(text);
    check_header(j, "periodic-certificate");
    PeriodicCertificate c;
    c.domain = patch_from(member(j, "", "domain"), "domain", false);
    const json& ps = as_array(member(j, "", "periods"), "periods", 2);
    for (std::size_t i = 0; i < 2; ++i) c.periods[i] = point_from(c.domain.basis(), ps[i], at("periods", i));
    if (j.contains("complete_f")) c.complete_f = j["complete_f"].get<bool>();
    return c;
}

std::string emit_patterns(const std::vector<Pattern>& patterns) {
    json j = header("patterns");
    json arr = json::array();
    for (const Pattern& p : patterns) arr.push_back(patch_json(p.patch()));
    j["patterns"] = arr;
    return j.dump(2) + "\n";
}

std::vector<Pattern> parse_patterns(std::string_view text) {
    const json j = parse_text(text);
    check_header(j, "patterns");
    const json& arr = as_array(member(j, "", "patterns"), "patterns");
    std::vector<Pattern> out;
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(canonicalize(patch_from(arr[i], at("patterns", i))));
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Parse, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace rhombus::io
