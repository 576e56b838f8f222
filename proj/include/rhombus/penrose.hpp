#pragma once

#include <array>
#include <string>
#include <vector>

#include "rhombus/solver.hpp"
#include "rhombus/tiles.hpp"

namespace rhombus {

// De Bruijn dual of the pentagrid {x : <x, zeta^j> + offsets[j] in Z}, keeping
// the tiles whose grid intersection lies within distance `window` of the
// origin. Offsets summing to an integer give Penrose tilings. Throws
// SINGULAR_GRID when three grid lines meet (detected with a 1e-9 margin, so
// near-singular grids are rejected too).
Patch pentagrid_patch(int window, const std::array<Rational, 5>& offsets);

enum class ArrowKind { Single, Double };

struct ArrowLabel {
    ArrowKind kind = ArrowKind::Single;
    int sign = 1;  // +1 when the arrow points along +zeta^line of its edge

    friend bool operator==(const ArrowLabel&, const ArrowLabel&) = default;
    friend auto operator<=>(const ArrowLabel&, const ArrowLabel&) = default;
};

struct ArrowTile {
    Shape shape;
    std::array<ArrowLabel, 4> arrows;  // per side, same side order as colors

    friend bool operator==(const ArrowTile&, const ArrowTile&) = default;
    friend auto operator<=>(const ArrowTile&, const ArrowTile&) = default;
};

// The two arrowed Penrose rhombs in all ten orientations: 20 translation classes.
std::vector<ArrowTile> penrose_arrow_tiles();

// Rotate an arrowed tile by `steps` units of pi/5.
ArrowTile rotate_arrow_tile(const ArrowTile& t, int steps);

// One color per (edge line, arrow kind, absolute direction): "s2+", "d0-", ...
Color arrow_color(int line, const ArrowLabel& a);
TileLabels arrows_to_colors(const ArrowTile& t);

// Arrows agree on a shared edge exactly when their kind and absolute direction agree.
bool arrows_match(const ArrowLabel& a, const ArrowLabel& b);

// Color action of rotations on arrow colors, for rotation_closure.
Color rotate_arrow_color(const Color& c, int steps);

Tileset penrose_wang20();
// One representative per 2 pi / 5 rotation orbit: least shape, then least labels.
Tileset penrose_wang4();

// A square with four distinct colors, its half-turn closure and a periodic
// certificate for the closure.
struct IsometryCounterexample {
    Tileset single;
    Tileset closure;
    PeriodicCertificate certificate;
};
IsometryCounterexample single_tile_isometry_counterexample();

}  // namespace rhombus
