#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rhombus/chains.hpp"
#include "rhombus/patterns.hpp"
#include "rhombus/solver.hpp"
#include "rhombus/tiles.hpp"

namespace rhombus {

// Square Wang tiles as (a0, a1, a2, a3) in side order: bottom, right, top, left.
struct SquareWangTileset {
    std::vector<Color> colors;
    std::vector<std::array<Color, 4>> tiles;

    // Throws INVALID_TILESET on an empty alphabet, duplicate tiles or unknown colors.
    void validate() const;
    // The same tiles on the unit square of the order-4 basis.
    Tileset as_tileset() const;
};

Color blank_color();

struct ReductionReport {
    std::size_t input_tiles = 0;
    std::size_t input_colors = 0;
    Tileset output;
    std::size_t coding = 0, link = 0, neutral = 0, fresh = 0;
    std::optional<Shape> shape;  // r for the chain reduction
    std::vector<Shape> subset;   // T' for the fresh-color reduction
};

// Coding tiles copy the Wang tiles onto r; link tiles carry one Wang color across
// the shared direction of every shape sharing exactly one direction with r;
// neutral tiles are blank. Throws INVALID_SHAPE when r is not in the shapeset.
ReductionReport phi_r_report(const SquareWangTileset& wang, const ShapeSet& shapes, const Shape& r);
Tileset phi_r(const SquareWangTileset& wang, const ShapeSet& shapes, const Shape& r);

struct ColoredPatch {
    Patch patch;                           // colored over phi_r(wang, shapes, r)
    std::vector<Occurrence> occurrences;   // indexing used for the coding tiles
    std::size_t partial_segments = 0;      // chain segments cut by the boundary
};

// Colors a geometric patch from a periodic square Wang tiling: the occurrence
// indexed (i, j) gets the Wang tile at (i, j). Throws UNINDEXABLE when r does
// not occur.
ColoredPatch color_penrose_patch(const PeriodicCertificate& wang_tiling, const SquareWangTileset& wang,
                                 const Patch& geometric, const ShapeSet& shapes, const Shape& r);

// The Wang tile at lattice cell (i, j) of a periodic square tiling, as labels.
std::array<Color, 4> wang_tile_at(const PeriodicCertificate& wang_tiling, long i, long j);

// X restricted to the tilings using only `subset`. Throws INVALID_SHAPE unless
// subset is contained in the shapeset.
SubshiftSpec restrict_shapeset(const SubshiftSpec& spec, const ShapeSet& subset);

// T' plus one tile with four fresh colors for every shape of `full` it misses.
ReductionReport fresh_color_report(const Tileset& tileset_on_subset, const ShapeSet& full);
Tileset fresh_color_reduction(const Tileset& tileset_on_subset, const ShapeSet& full);
bool is_fresh(const Color& c);

// Bounded empirical check, not a statement about the infinite subshift: for
// each shape, does it occur in every pattern of A_n for all n <= r_max.
struct ShapeRecurrence {
    Shape shape;
    bool present_in_all = true;
    int absent_at_rank = -1;  // first rank with a pattern missing the shape
};
std::vector<ShapeRecurrence> find_uniformly_recurrent_candidate(const SubshiftSpec& spec, int r_max,
                                                                const SearchOptions& options = {});

}  // namespace rhombus
