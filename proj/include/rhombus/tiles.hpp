#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rhombus/geometry.hpp"

namespace rhombus {

// A shape with one color per side; colors index the owning tileset's palette.
struct Tile {
    Shape shape;
    EdgeColors colors = kUncolored;

    friend bool operator==(const Tile&, const Tile&) = default;
    friend auto operator<=>(const Tile&, const Tile&) = default;
};

// Shape and side labels, independent of any palette.
struct TileLabels {
    Shape shape;
    std::array<Color, 4> colors;

    friend bool operator==(const TileLabels&, const TileLabels&) = default;
    friend auto operator<=>(const TileLabels&, const TileLabels&) = default;
};

class Tileset {
public:
    Tileset() = default;
    // Sorts the palette, remaps ids, sorts tiles. Throws INVALID_TILESET on a
    // shape without tiles, duplicate tiles, or shapes outside the shapeset.
    Tileset(ShapeSet shapes, Palette palette, std::vector<Tile> tiles);
    // Same, from labeled tiles; the palette is the set of colors used.
    static Tileset from_labels(ShapeSet shapes, const std::vector<TileLabels>& tiles);

    const ShapeSet& shapeset() const { return shapes_; }
    int order() const { return shapes_.order(); }
    const std::shared_ptr<const Palette>& palette() const { return palette_; }
    std::span<const Tile> tiles() const { return tiles_; }
    std::size_t size() const { return tiles_.size(); }

    const Color& color(ColorId id) const { return (*palette_)[id]; }
    std::optional<ColorId> color_id(const Color& c) const;
    TileLabels labels(const Tile& t) const;
    std::vector<TileLabels> labels() const;

    friend bool operator==(const Tileset& a, const Tileset& b) {
        return a.shapes_ == b.shapes_ && a.labels() == b.labels();
    }

private:
    ShapeSet shapes_;
    std::shared_ptr<const Palette> palette_ = std::make_shared<Palette>();
    std::vector<Tile> tiles_;
};

// Color erasure.
Patch erase_colors(const Patch& patch);
// One shape per tile, with multiplicity, in tile order.
std::vector<Shape> erase_colors(const Tileset& tileset);

// Every interior edge carries the same color on both sides.
bool check_color_validity(const Patch& patch);

// Action of a rotation by `steps` angle units (pi/L each) on a color.
using ColorAction = std::function<Color(const Color&, int steps)>;

// Rotate a placed rhombus about the origin by `steps` angle units, re-anchored
// on the canonical shape with the side colors carried along. The color action is
// applied by the caller.
PlacedRhombus rotate_rhombus(const DirectionBasis& basis, const PlacedRhombus& r, int steps);

// Smallest tileset containing ts that is closed under rotation by 2 pi / k.
// Throws ROTATION_NOT_IN_BASIS unless k divides 2L.
Tileset rotation_closure(const Tileset& ts, int k, const ColorAction& action = {});

}  // namespace rhombus
