#include "rhombus/patterns.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "rhombus/error.hpp"

namespace rhombus {

namespace {

std::uint64_t fnv(std::uint64_t h, std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv(std::uint64_t h, const std::string& s) {
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return fnv(h, s.size());
}

struct TileKey {
    Shape shape;
    ExactPoint anchor;
    friend bool operator==(const TileKey&, const TileKey&) = default;
};

struct TileKeyHash {
    std::size_t operator()(const TileKey& k) const noexcept {
        return ExactPointHash{}(k.anchor) ^ (static_cast<std::size_t>(k.shape.u) * 131 + k.shape.v) * 0x9e3779b97f4a7c15ull;
    }
};

}  // namespace

Patch translate(const Patch& patch, const ExactPoint& offset) {
    std::vector<PlacedRhombus> tiles(patch.tiles().begin(), patch.tiles().end());
    for (PlacedRhombus& t : tiles) t.anchor += offset;
    return Patch(Patch::Unchecked{}, patch.order(), std::move(tiles), patch.palette());
}

Patch trusted_patch(int order, std::vector<PlacedRhombus> tiles, std::shared_ptr<const Palette> palette) {
    return Patch(Patch::Unchecked{}, order, std::move(tiles), std::move(palette));
}

Pattern canonicalize(const Patch& patch) {
    Pattern out;
    if (patch.empty()) {
        out.patch_ = patch;
    } else {
        const auto verts = patch.vertices();
        out.patch_ = translate(patch, -verts.front());
    }
    std::uint64_t h = 1469598103934665603ull;
    h = fnv(h, static_cast<std::uint64_t>(out.patch_.order()));
    const Palette* pal = out.patch_.palette().get();
    for (const PlacedRhombus& t : out.patch_.tiles()) {
        h = fnv(h, static_cast<std::uint64_t>(t.shape.u) << 32 | static_cast<std::uint32_t>(t.shape.v));
        for (int i = 0; i < out.patch_.basis().degree(); ++i) h = fnv(h, static_cast<std::uint64_t>(t.anchor.c[i]));
        if (pal && t.colored())
            for (ColorId c : t.colors) h = fnv(h, (*pal)[c].label());
    }
    out.digest_ = h;
    return out;
}

bool operator<(const Pattern& a, const Pattern& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    const auto ta = a.patch().tiles(), tb = b.patch().tiles();
    for (std::size_t i = 0; i < ta.size(); ++i) {
        if (ta[i].shape != tb[i].shape) return ta[i].shape < tb[i].shape;
        if (ta[i].anchor != tb[i].anchor) return ta[i].anchor < tb[i].anchor;
    }
    const Palette* pa = a.patch().palette().get();
    const Palette* pb = b.patch().palette().get();
    for (std::size_t i = 0; i < ta.size(); ++i)
        for (int s = 0; s < 4; ++s) {
            const ColorId ca = ta[i].colors[s], cb = tb[i].colors[s];
            if (ca == kNoColor || cb == kNoColor) {
                if (ca != cb) return ca < cb;
                continue;
            }
            const Color& x = (*pa)[ca];
            const Color& y = (*pb)[cb];
            if (x != y) return x < y;
        }
    return false;
}

bool occurs_in(const Pattern& needle, std::span<const PlacedRhombus> haystack, const Palette* haystack_palette) {
    const auto nt = needle.patch().tiles();
    if (nt.empty()) return true;
    if (nt.size() > haystack.size()) return false;
    const Palette* np = needle.patch().palette().get();
    const bool colored = np != nullptr;
    if (colored && haystack_palette == nullptr) return false;

    std::unordered_map<TileKey, int, TileKeyHash> at;
    at.reserve(haystack.size() * 2);
    for (std::size_t i = 0; i < haystack.size(); ++i) at.emplace(TileKey{haystack[i].shape, haystack[i].anchor}, i);

    auto same_colors = [&](const PlacedRhombus& n, const PlacedRhombus& h) {
        if (!colored) return true;
        if (!h.colored()) return false;
        for (int s = 0; s < 4; ++s)
            if ((*np)[n.colors[s]] != (*haystack_palette)[h.colors[s]]) return false;
        return true;
    };
    const PlacedRhombus& first = nt.front();
    for (const PlacedRhombus& h : haystack) {
        if (h.shape != first.shape || !same_colors(first, h)) continue;
        const ExactPoint offset = h.anchor - first.anchor;
        bool ok = true;
        for (std::size_t k = 1; k < nt.size() && ok; ++k) {
            auto it = at.find(TileKey{nt[k].shape, nt[k].anchor + offset});
            ok = it != at.end() && same_colors(nt[k], haystack[it->second]);
        }
        if (ok) return true;
    }
    return false;
}

bool occurs_in(const Pattern& needle, const Patch& haystack) {
    if (needle.order() != haystack.order() && !needle.patch().empty())
        throw Error(ErrorCode::BasisMismatch, "pattern and patch over different bases");
    return occurs_in(needle, haystack.tiles(), haystack.palette().get());
}

namespace {

std::unordered_set<ExactPoint, ExactPointHash> boundary_vertices(const Patch& patch) {
    const DirectionBasis& b = patch.basis();
    std::unordered_set<ExactPoint, ExactPointHash> out;
    for (const auto& [k, inc] : patch.edges())
        if (inc.count == 1) {
            out.insert(k.start);
            out.insert(edge_end(b, k));
        }
    return out;
}

}  // namespace

double covered_radius_at(const Patch& patch, const ExactPoint& vertex) {
    const DirectionBasis& b = patch.basis();
    const Eigen::Vector2d c = b.embed(vertex);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [k, inc] : patch.edges()) {
        if (inc.count != 1) continue;
        if (k.start == vertex || edge_end(b, k) == vertex) return 0;
        const Eigen::Vector2d s = b.embed(k.start), d = b.embed(edge_end(b, k)) - s;
        const double t = std::clamp(d.dot(c - s), 0.0, 1.0);
        best = std::min(best, (s + t * d - c).norm());
    }
    return best;
}

CoveredRadius minimal_radius(const Patch& patch) {
    CoveredRadius out;
    if (patch.empty()) return out;
    const auto verts = patch.vertices();
    const auto boundary = boundary_vertices(patch);
    out.center = verts.front();
    for (const ExactPoint& v : verts) {
        if (boundary.count(v)) continue;
        const double r = covered_radius_at(patch, v);
        if (r > out.radius) out.radius = r, out.center = v;
    }
    return out;
}

bool tile_meets_open_disk(const DirectionBasis& b, const PlacedRhombus& tile, const ExactPoint& center, Rational r) {
    if (r <= Rational(0)) return false;
    const auto v = tile.vertices(b);
    for (int i = 0; i < 4; ++i) {
        if (v[i] == center) return true;
        if (segment_meets_open_disk(b, center, v[i], v[(i + 1) & 3], r)) return true;
    }
    // The center is at least r from every side here, so a float inside test is safe.
    const Eigen::Vector2d c = b.embed(center);
    int pos = 0, neg = 0;
    for (int i = 0; i < 4; ++i) {
        const Eigen::Vector2d s = b.embed(v[i]), d = b.embed(v[(i + 1) & 3]) - s, q = c - s;
        (d.x() * q.y() - d.y() * q.x() > 0 ? pos : neg)++;
    }
    return pos == 4 || neg == 4;
}

bool is_minimal_for(const Patch& patch, Rational r) {
    if (patch.empty() || r < Rational(0)) return false;
    if (r == Rational(0)) return patch.size() == 1;
    const DirectionBasis& b = patch.basis();
    const auto boundary = boundary_vertices(patch);
    bool any = false;
    for (const ExactPoint& v : patch.vertices()) {
        if (boundary.count(v)) continue;
        if (!tiles_cover_disk(b, patch.tiles(), v, r)) continue;
        any = true;
        // Q minus t still covers D(v, r) exactly when t misses the open disk.
        for (const PlacedRhombus& t : patch.tiles())
            if (!tile_meets_open_disk(b, t, v, r)) return false;
    }
    return any;
}

std::vector<Pattern> SubshiftSpec::prefix(std::size_t r) const {
    if (r <= forbidden.size()) return {forbidden.begin(), forbidden.begin() + static_cast<std::ptrdiff_t>(r)};
    std::vector<Pattern> out = forbidden;
    if (complete) return out;
    if (!generator)
        throw Error(ErrorCode::RankExceedsKnownPrefix, "rank " + std::to_string(r) + " needs more than the " +
                                                           std::to_string(forbidden.size()) +
                                                           " forbidden patterns supplied for '" + name + "'");
    while (out.size() < r) {
        auto next = generator(out.size());
        if (!next) break;
        out.push_back(std::move(*next));
    }
    return out;
}

SubshiftSpec SubshiftSpec::full_shift(ShapeSet shapes, std::string name) {
    SubshiftSpec s;
    s.name = std::move(name);
    s.shapeset = std::move(shapes);
    s.complete = true;
    return s;
}

void validate_spec(const SubshiftSpec& spec) {
    for (const Pattern& f : spec.forbidden) {
        if (f.patch().colored()) throw Error(ErrorCode::InvalidPatch, "forbidden patterns must be uncolored");
        if (f.patch().empty()) continue;
        if (f.order() != spec.shapeset.order()) throw Error(ErrorCode::BasisMismatch, "forbidden pattern basis");
        for (const PlacedRhombus& t : f.patch().tiles())
            if (!spec.shapeset.contains(t.shape))
                throw Error(ErrorCode::InvalidShape, "forbidden pattern uses a shape outside the shapeset");
    }
}

bool rank_allowed(const Patch& patch, const SubshiftSpec& spec, int r, std::size_t k) {
    const auto f = spec.prefix(k);
    if (!is_minimal_for(patch, r)) return false;
    for (const Pattern& p : f)
        if (occurs_in(p, patch.tiles(), nullptr)) return false;
    return true;
}

bool rank_allowed(const Patch& patch, const SubshiftSpec& spec, int r) {
    return rank_allowed(patch, spec, r, static_cast<std::size_t>(r));
}

}  // namespace rhombus
