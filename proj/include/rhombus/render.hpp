#pragma once

#include <map>
#include <optional>
#include <string>

#include "rhombus/geometry.hpp"

namespace rhombus {

struct RenderStyle {
    double scale = 40;   // pixels per unit edge
    double margin = 8;   // pixels around the bounding box
    // Fill per shape (default: thick/thin-style gray ramp by interior angle),
    // stroke per edge color label (default: a fixed cycle).
    std::map<Shape, std::string> fills;
    std::map<std::string, std::string> strokes;
    bool chains = false;
    bool indices = false;          // Z^2 indices of the occurrences of index_shape
    std::optional<Shape> index_shape;
    bool arrows = false;           // draw arrow colors ("s2+", "d0-") as arrowheads
};

// Deterministic SVG: one polygon per rhombus in patch order, coordinates printed
// with 9 significant digits, y pointing up in patch space.
std::string render_svg(const Patch& patch, const RenderStyle& style = {});

}  // namespace rhombus
