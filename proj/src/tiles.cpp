#include "rhombus/tiles.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "rhombus/error.hpp"

namespace rhombus {

Tileset::Tileset(ShapeSet shapes, Palette palette, std::vector<Tile> tiles) : shapes_(std::move(shapes)) {
    Palette sorted = palette;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<ColorId> remap(palette.size());
    for (std::size_t i = 0; i < palette.size(); ++i)
        remap[i] = static_cast<ColorId>(std::lower_bound(sorted.begin(), sorted.end(), palette[i]) - sorted.begin());
    for (Tile& t : tiles) {
        if (!shapes_.contains(t.shape)) throw Error(ErrorCode::InvalidTileset, "tile shape outside the shapeset");
        for (ColorId& c : t.colors) {
            if (c < 0 || c >= static_cast<ColorId>(palette.size()))
                throw Error(ErrorCode::InvalidTileset, "tile color outside the palette");
            c = remap[c];
        }
    }
    std::sort(tiles.begin(), tiles.end());
    if (std::adjacent_find(tiles.begin(), tiles.end()) != tiles.end())
        throw Error(ErrorCode::InvalidTileset, "duplicate tile");
    for (const Shape& s : shapes_.shapes())
        if (std::none_of(tiles.begin(), tiles.end(), [&](const Tile& t) { return t.shape == s; }))
            throw Error(ErrorCode::InvalidTileset,
                        "shape [" + std::to_string(s.u) + "," + std::to_string(s.v) + "] has no tile");
    palette_ = std::make_shared<const Palette>(std::move(sorted));
    tiles_ = std::move(tiles);
}

Tileset Tileset::from_labels(ShapeSet shapes, const std::vector<TileLabels>& tiles) {
    Palette palette;
    for (const TileLabels& t : tiles)
        for (const Color& c : t.colors) palette.push_back(c);
    std::sort(palette.begin(), palette.end());
    palette.erase(std::unique(palette.begin(), palette.end()), palette.end());
    std::vector<Tile> out;
    out.reserve(tiles.size());
    for (const TileLabels& t : tiles) {
        Tile tile{t.shape, {}};
        for (int i = 0; i < 4; ++i)
            tile.colors[i] =
                static_cast<ColorId>(std::lower_bound(palette.begin(), palette.end(), t.colors[i]) - palette.begin());
        out.push_back(tile);
    }
    return Tileset(std::move(shapes), std::move(palette), std::move(out));
}

std::optional<ColorId> Tileset::color_id(const Color& c) const {
    auto it = std::lower_bound(palette_->begin(), palette_->end(), c);
    if (it == palette_->end() || *it != c) return std::nullopt;
    return static_cast<ColorId>(it - palette_->begin());
}

TileLabels Tileset::labels(const Tile& t) const {
    TileLabels out{t.shape, {}};
    for (int i = 0; i < 4; ++i) out.colors[i] = color(t.colors[i]);
    return out;
}

std::vector<TileLabels> Tileset::labels() const {
    std::vector<TileLabels> out;
    for (const Tile& t : tiles_) out.push_back(labels(t));
    std::sort(out.begin(), out.end());
    return out;
}

Patch erase_colors(const Patch& patch) {
    std::vector<PlacedRhombus> tiles(patch.tiles().begin(), patch.tiles().end());
    for (PlacedRhombus& t : tiles) t.colors = kUncolored;
    return Patch(Patch::Unchecked{}, patch.order(), std::move(tiles));
}

std::vector<Shape> erase_colors(const Tileset& tileset) {
    std::vector<Shape> out;
    for (const Tile& t : tileset.tiles()) out.push_back(t.shape);
    return out;
}

bool check_color_validity(const Patch& patch) {
    if (!patch.colored()) return true;
    const auto tiles = patch.tiles();
    for (const auto& [key, inc] : patch.edges()) {
        if (inc.count != 2) continue;
        const EdgeSide& a = inc.sides[0];
        const EdgeSide& b = inc.sides[1];
        if (tiles[a.tile].colors[a.side] != tiles[b.tile].colors[b.side]) return false;
    }
    return true;
}

PlacedRhombus rotate_rhombus(const DirectionBasis& b, const PlacedRhombus& r, int steps) {
    const ExactPoint rot = b.direction(steps);
    const auto old_v = r.vertices(b);
    std::array<ExactPoint, 4> v;
    for (int i = 0; i < 4; ++i) v[i] = b.multiply(old_v[i], rot);

    const ShapeFrame f = frame_of(b, r.shape);
    const int lu = b.line_of_angle(f.du + steps).first;
    const int lv = b.line_of_angle(f.dv + steps).first;
    PlacedRhombus out;
    out.shape = {std::min(lu, lv), std::max(lu, lv)};
    const ExactPoint u = b.root(out.shape.u), w = b.root(out.shape.v);
    auto has = [&](const ExactPoint& p) { return std::find(v.begin(), v.end(), p) != v.end(); };
    bool found = false;
    for (const ExactPoint& p : v)
        if (has(p + u) && has(p + w)) {
            out.anchor = p;
            found = true;
            break;
        }
    if (!found) throw Error(ErrorCode::InvalidShape, "rotated rhombus has no canonical anchor");

    const auto new_v = out.vertices(b);
    for (int j = 0; j < 4; ++j) {
        const ExactPoint& a = new_v[j];
        const ExactPoint& c = new_v[(j + 1) & 3];
        for (int i = 0; i < 4; ++i) {
            const ExactPoint& x = v[i];
            const ExactPoint& y = v[(i + 1) & 3];
            if ((x == a && y == c) || (x == c && y == a)) {
                out.colors[j] = r.colors[i];
                break;
            }
        }
    }
    return out;
}

Tileset rotation_closure(const Tileset& ts, int k, const ColorAction& action) {
    const DirectionBasis& b = DirectionBasis::of(ts.order());
    if (k <= 0 || b.turn() % k != 0)
        throw Error(ErrorCode::RotationNotInBasis,
                    "rotation by 2pi/" + std::to_string(k) + " does not preserve the direction basis");
    const int step = b.turn() / k;

    std::set<TileLabels> closed;
    for (const TileLabels& t : ts.labels()) closed.insert(t);
    std::vector<TileLabels> frontier(closed.begin(), closed.end());
    while (!frontier.empty()) {
        std::vector<TileLabels> next;
        for (const TileLabels& t : frontier) {
            // Colors ride along as ids 0..3 so rotate_rhombus can permute them.
            PlacedRhombus r{t.shape, b.zero(), {0, 1, 2, 3}};
            const PlacedRhombus rr = rotate_rhombus(b, r, step);
            TileLabels out{rr.shape, {}};
            for (int i = 0; i < 4; ++i) {
                const Color& c = t.colors[rr.colors[i]];
                out.colors[i] = action ? action(c, step) : c;
            }
            if (closed.insert(out).second) next.push_back(out);
        }
        frontier = std::move(next);
    }

    std::set<Shape> shapes;
    for (const TileLabels& t : closed) shapes.insert(t.shape);
    for (const Shape& s : ts.shapeset().shapes()) shapes.insert(s);
    return Tileset::from_labels(ShapeSet(ts.order(), {shapes.begin(), shapes.end()}), {closed.begin(), closed.end()});
}

}  // namespace rhombus
