#include "rhombus/reductions.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>

#include <Eigen/Dense>

#include "rhombus/error.hpp"

namespace rhombus {

namespace {

// Side of tile a whose edge is also an edge of tile b, or -1.
int shared_side(const Patch& patch, std::size_t a, std::size_t b) {
    const DirectionBasis& basis = patch.basis();
    const auto tiles = patch.tiles();
    for (int s = 0; s < 4; ++s) {
        const EdgeKey k = edge_key(basis, tiles[a], s);
        for (int t = 0; t < 4; ++t)
            if (edge_key(basis, tiles[b], t) == k) return s;
    }
    return -1;
}

bool uses_only(const Pattern& p, const ShapeSet& subset) {
    for (const PlacedRhombus& t : p.patch().tiles())
        if (!subset.contains(t.shape)) return false;
    return true;
}

}  // namespace

void SquareWangTileset::validate() const {
    if (colors.empty()) throw Error(ErrorCode::InvalidTileset, "empty Wang alphabet");
    if (tiles.empty()) throw Error(ErrorCode::InvalidTileset, "no Wang tiles");
    std::set<Color> alphabet(colors.begin(), colors.end());
    for (const auto& t : tiles)
        for (const Color& c : t)
            if (!alphabet.count(c)) throw Error(ErrorCode::InvalidTileset, "Wang color '" + c.label() + "' not in the alphabet");
    std::set<std::array<Color, 4>> uniq(tiles.begin(), tiles.end());
    if (uniq.size() != tiles.size()) throw Error(ErrorCode::InvalidTileset, "duplicate Wang tile");
}

Tileset SquareWangTileset::as_tileset() const {
    validate();
    std::vector<TileLabels> out;
    for (const auto& t : tiles) out.push_back({Shape{0, 1}, t});
    return Tileset::from_labels(ShapeSet(4, {Shape{0, 1}}), out);
}

Color blank_color() { return Color::reserved("blank"); }

ReductionReport phi_r_report(const SquareWangTileset& wang, const ShapeSet& shapes, const Shape& r) {
    wang.validate();
    if (!shapes.contains(r)) throw Error(ErrorCode::InvalidShape, "r is not in the shapeset");
    ReductionReport rep;
    rep.input_tiles = wang.tiles.size();
    rep.input_colors = wang.colors.size();
    rep.shape = r;
    const Color blank = blank_color();
    std::vector<TileLabels> out;
    for (const auto& t : wang.tiles) out.push_back({r, t});
    rep.coding = wang.tiles.size();
    for (const Shape& s : shapes.shapes()) {
        if (s == r) continue;
        const auto shared = s.shared_lines(r);
        if (shared >= 2) throw std::logic_error("distinct shapes share both directions");
        if (shared == 0) {
            out.push_back({s, {blank, blank, blank, blank}});
            ++rep.neutral;
            continue;
        }
        const int u = r.has_line(s.u) ? s.u : s.v;
        const int first = s.u == u ? 0 : 1;
        for (const Color& a : wang.colors) {
            TileLabels t{s, {blank, blank, blank, blank}};
            t.colors[first] = t.colors[first + 2] = a;
            out.push_back(t);
            ++rep.link;
        }
    }
    rep.output = Tileset::from_labels(shapes, out);
    return rep;
}

Tileset phi_r(const SquareWangTileset& wang, const ShapeSet& shapes, const Shape& r) {
    return phi_r_report(wang, shapes, r).output;
}

std::array<Color, 4> wang_tile_at(const PeriodicCertificate& cert, long i, long j) {
    const DirectionBasis& b = cert.domain.basis();
    const ExactPoint target = b.root(0) * i + b.root(1) * j;
    Eigen::Matrix2d m;
    m.col(0) = b.embed(cert.periods[0]);
    m.col(1) = b.embed(cert.periods[1]);
    const Eigen::Matrix2d inv = m.inverse();
    const Palette& pal = *cert.domain.palette();
    for (const PlacedRhombus& t : cert.domain.tiles()) {
        const ExactPoint d = target - t.anchor;
        const Eigen::Vector2d ab = inv * b.embed(d);
        const auto k = std::llround(ab.x()), l = std::llround(ab.y());
        if (d == cert.periods[0] * k + cert.periods[1] * l)
            return {pal[t.colors[0]], pal[t.colors[1]], pal[t.colors[2]], pal[t.colors[3]]};
    }
    throw Error(ErrorCode::InvalidPatch, "periodic Wang tiling has no tile at the requested cell");
}

ColoredPatch color_penrose_patch(const PeriodicCertificate& cert, const SquareWangTileset& wang,
                                 const Patch& geometric, const ShapeSet& shapes, const Shape& r) {
    const Tileset target = phi_r(wang, shapes, r);
    ColoredPatch out;
    try {
        out.occurrences = index_occurrences(geometric, r);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoOccurrence) throw;
        throw Error(ErrorCode::Unindexable, "r does not occur in the patch");
    }
    const auto tiles = geometric.tiles();
    const Color blank = blank_color();
    std::vector<std::array<Color, 4>> labels(tiles.size(), {blank, blank, blank, blank});
    std::vector<char> is_occ(tiles.size(), 0);
    for (const Occurrence& o : out.occurrences) {
        labels[o.tile] = wang_tile_at(cert, o.i, o.j);
        is_occ[o.tile] = 1;
    }

    for (const Chain& c : extract_chains(geometric)) {
        if (!r.has_line(c.normal)) continue;
        const auto& m = c.members;
        // Split at occurrences; each run of link tiles copies the color of an
        // adjacent coding tile's side.
        std::size_t k = 0;
        while (k < m.size()) {
            if (is_occ[m[k]]) {
                ++k;
                continue;
            }
            std::size_t e = k;
            while (e < m.size() && !is_occ[m[e]]) ++e;
            std::optional<Color> color;
            if (k > 0) color = labels[m[k - 1]][shared_side(geometric, m[k - 1], m[k])];
            else if (e < m.size()) color = labels[m[e]][shared_side(geometric, m[e], m[e - 1])];
            if (k == 0 || e == m.size()) ++out.partial_segments;
            if (!color) color = wang.colors.front();
            for (std::size_t x = k; x < e; ++x) {
                const Shape& s = tiles[m[x]].shape;
                const int first = s.u == c.normal ? 0 : 1;
                labels[m[x]][first] = labels[m[x]][first + 2] = *color;
            }
            k = e;
        }
    }

    std::vector<PlacedRhombus> colored(tiles.begin(), tiles.end());
    for (std::size_t t = 0; t < colored.size(); ++t)
        for (int s = 0; s < 4; ++s) {
            const auto id = target.color_id(labels[t][s]);
            if (!id) throw std::logic_error("coloring produced a color outside the reduced tileset");
            colored[t].colors[s] = *id;
        }
    out.patch = Patch(geometric.order(), std::move(colored), target.palette());
    return out;
}

SubshiftSpec restrict_shapeset(const SubshiftSpec& spec, const ShapeSet& subset) {
    if (subset.order() != spec.shapeset.order()) throw Error(ErrorCode::BasisMismatch, "subset over another basis");
    for (const Shape& s : subset.shapes())
        if (!spec.shapeset.contains(s)) throw Error(ErrorCode::InvalidShape, "subset is not contained in the shapeset");
    SubshiftSpec out;
    out.name = spec.name + "|restricted";
    out.shapeset = subset;
    out.complete = spec.complete;
    for (const Pattern& p : spec.forbidden)
        if (uses_only(p, subset)) out.forbidden.push_back(p);
    if (spec.generator) {
        const std::size_t kept = out.forbidden.size();
        out.generator = [spec, subset, kept](std::size_t k) -> std::optional<Pattern> {
            std::size_t seen = kept;
            for (std::size_t idx = spec.forbidden.size();; ++idx) {
                auto p = spec.generator(idx);
                if (!p) return std::nullopt;
                if (!uses_only(*p, subset)) continue;
                if (seen == k) return p;
                ++seen;
            }
        };
    }
    return out;
}

bool is_fresh(const Color& c) { return c.kind == ColorKind::Reserved && c.name.rfind("fresh", 0) == 0; }

ReductionReport fresh_color_report(const Tileset& ts, const ShapeSet& full) {
    if (ts.order() != full.order()) throw Error(ErrorCode::BasisMismatch, "tileset and shapeset over different bases");
    for (const Shape& s : ts.shapeset().shapes())
        if (!full.contains(s)) throw Error(ErrorCode::InvalidShape, "tileset shape outside the full shapeset");
    ReductionReport rep;
    rep.input_tiles = ts.size();
    rep.input_colors = ts.palette()->size();
    rep.subset.assign(ts.shapeset().shapes().begin(), ts.shapeset().shapes().end());
    std::vector<TileLabels> out = ts.labels();
    int next = 0;
    for (const Shape& s : full.shapes()) {
        if (ts.shapeset().contains(s)) continue;
        TileLabels t{s, {}};
        for (Color& c : t.colors) c = Color::reserved("fresh" + std::to_string(next++));
        out.push_back(t);
        ++rep.fresh;
    }
    rep.output = Tileset::from_labels(full, out);
    return rep;
}

Tileset fresh_color_reduction(const Tileset& ts, const ShapeSet& full) { return fresh_color_report(ts, full).output; }

std::vector<ShapeRecurrence> find_uniformly_recurrent_candidate(const SubshiftSpec& spec, int r_max,
                                                                const SearchOptions& options) {
    std::vector<ShapeRecurrence> out;
    for (const Shape& s : spec.shapeset.shapes()) out.push_back({s, true, -1});
    for (int n = 1; n <= r_max; ++n) {
        const auto f = spec.prefix(static_cast<std::size_t>(n));
        std::vector<std::atomic<bool>> missing(out.size());
        for (auto& m : missing) m = false;
        auto visit = [&](const Pattern& p) {
            std::set<Shape> seen;
            for (const PlacedRhombus& t : p.patch().tiles()) seen.insert(t.shape);
            for (std::size_t i = 0; i < out.size(); ++i)
                if (!seen.count(out[i].shape)) missing[i] = true;
        };
        bool exhausted = false;
        visit_geometric(n, f, spec.shapeset, options, visit, &exhausted);
        if (exhausted) throw Error(ErrorCode::Budget, "budget exhausted at rank " + std::to_string(n));
        for (std::size_t i = 0; i < out.size(); ++i)
            if (missing[i] && out[i].present_in_all) {
                out[i].present_in_all = false;
                out[i].absent_at_rank = n;
            }
    }
    return out;
}

}  // namespace rhombus
