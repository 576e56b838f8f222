#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rhombus/patterns.hpp"
#include "rhombus/reductions.hpp"
#include "rhombus/solver.hpp"
#include "rhombus/tiles.hpp"

// JSON documents for every value the CLI reads or writes. Each carries
// "format_version" and a "kind" tag. Parse failures throw Error(PARSE) naming
// the offending field, or the line for malformed JSON.
namespace rhombus::io {

inline constexpr int kFormatVersion = 1;

// {"basis_order": N, "shapes": [[u, v], ...]}
std::string emit_shapeset(const ShapeSet& shapes);
ShapeSet parse_shapeset(std::string_view text);

// {"basis_order": N, "colors": [...], "tiles": [{"shape": [u, v], "edges": [c0, c1, c2, c3]}]}
// Reserved colors are written with a leading '$'.
std::string emit_tileset(const Tileset& tileset);
Tileset parse_tileset(std::string_view text);

// {"basis_order": N, "placed": [{"shape": [u, v], "anchor": [k0, ..., k_{N-1}], "colors"?: [...]}]}
// Anchors are integer combinations of 1, zeta, ..., zeta^{N-1}.
std::string emit_patch(const Patch& patch);
Patch parse_patch(std::string_view text);

// {"name", "shapeset": {...}, "forbidden": [patch, ...], "complete"}; order is significant.
std::string emit_spec(const SubshiftSpec& spec);
SubshiftSpec parse_spec(std::string_view text);

// {"colors": [...], "tiles": [[bottom, right, top, left], ...]}
std::string emit_wang(const SquareWangTileset& wang);
SquareWangTileset parse_wang(std::string_view text);

// {"periods": [anchor, anchor], "complete_f", "domain": patch}
std::string emit_certificate(const PeriodicCertificate& cert);
PeriodicCertificate parse_certificate(std::string_view text);

std::string emit_patterns(const std::vector<Pattern>& patterns);
std::vector<Pattern> parse_patterns(std::string_view text);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace rhombus::io
