#pragma once

#include <array>
#include <string>
#include <vector>

#include "rhombus/io.hpp"
#include "rhombus/penrose.hpp"
#include "rhombus/tiles.hpp"

namespace rhombus::testing {

inline std::string data_path(const std::string& name) { return std::string(RHOMBUS_TEST_DATA) + "/" + name; }

inline ShapeSet squares() { return ShapeSet(4, {Shape{0, 1}}); }

inline PlacedRhombus square_at(int x, int y) {
    const auto& b = DirectionBasis::of(4);
    return {{0, 1}, b.integer(x) + b.root(1) * y};
}

inline Tileset square_tiles(const std::vector<std::array<const char*, 4>>& rows) {
    std::vector<TileLabels> tiles;
    for (const auto& r : rows)
        tiles.push_back({Shape{0, 1}, {Color::user(r[0]), Color::user(r[1]), Color::user(r[2]), Color::user(r[3])}});
    return Tileset::from_labels(squares(), tiles);
}

inline Patch square_block(int w, int h) {
    std::vector<PlacedRhombus> t;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) t.push_back(square_at(x, y));
    return Patch(4, t);
}

// Offsets whose pentagrid duals are Penrose tilings (sum 0 or 1).
inline std::vector<std::array<Rational, 5>> penrose_offsets() {
    return {
        {Rational(1, 10), Rational(2, 10), Rational(3, 10), Rational(-27, 100), Rational(-33, 100)},
        {Rational(1, 3), Rational(1, 5), Rational(1, 7), Rational(1, 11),
         Rational(1) - Rational(1, 3) - Rational(1, 5) - Rational(1, 7) - Rational(1, 11)},
        {Rational(3, 7), Rational(-1, 9), Rational(2, 11), Rational(-1, 13),
         -(Rational(3, 7) - Rational(1, 9) + Rational(2, 11) - Rational(1, 13))},
    };
}

}  // namespace rhombus::testing
