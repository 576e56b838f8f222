#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rhombus/geometry.hpp"

namespace rhombus {

// A patch up to translation: the least vertex sits at the origin and tiles are sorted.
class Pattern {
public:
    Pattern() = default;

    const Patch& patch() const { return patch_; }
    std::uint64_t digest() const { return digest_; }
    int order() const { return patch_.order(); }
    std::size_t size() const { return patch_.size(); }

    // Canonical total order: tile count, then tiles, then color labels.
    // Equality follows the order, so palettes may differ.
    friend bool operator<(const Pattern& a, const Pattern& b);
    friend bool operator==(const Pattern& a, const Pattern& b) {
        return a.digest_ == b.digest_ && !(a < b) && !(b < a);
    }

private:
    friend Pattern canonicalize(const Patch& patch);
    Patch patch_;
    std::uint64_t digest_ = 0;
};

Pattern canonicalize(const Patch& patch);

// Translate every tile by `offset`; no re-validation.
Patch translate(const Patch& patch, const ExactPoint& offset);
// Build a patch from tiles already known to be valid (skips the pairwise checks).
Patch trusted_patch(int order, std::vector<PlacedRhombus> tiles, std::shared_ptr<const Palette> palette = nullptr);

// Some translate of needle is a subset of haystack. An uncolored needle matches
// shapes only; a colored needle also matches color labels.
bool occurs_in(const Pattern& needle, const Patch& haystack);
bool occurs_in(const Pattern& needle, std::span<const PlacedRhombus> haystack, const Palette* haystack_palette);

struct CoveredRadius {
    double radius = 0;      // approximate; exact decisions go through is_minimal_for
    ExactPoint center;      // a vertex attaining it
};

// Largest radius of a closed vertex-centered disk inside the support.
CoveredRadius minimal_radius(const Patch& patch);
// Distance from a vertex to the patch boundary (0 for boundary vertices).
double covered_radius_at(const Patch& patch, const ExactPoint& vertex);

// Some vertex-centered r-disk is covered, and removing any single tile leaves no
// vertex-centered r-disk covered.
bool is_minimal_for(const Patch& patch, Rational r);
// Whether the tile meets the open disk of radius r about center.
bool tile_meets_open_disk(const DirectionBasis& basis, const PlacedRhombus& tile, const ExactPoint& center,
                          Rational r);

// A shapeset plus an ordered prefix of forbidden patterns.
struct SubshiftSpec {
    std::string name;
    ShapeSet shapeset;
    std::vector<Pattern> forbidden;
    // The list is the whole of F, so any rank may be requested.
    bool complete = false;
    // Optional source of pattern i beyond the supplied prefix; nullopt ends F.
    std::function<std::optional<Pattern>(std::size_t)> generator;

    // First r forbidden patterns (fewer when F is known to be shorter).
    // Throws RANK_EXCEEDS_KNOWN_PREFIX when F may continue past what is known.
    std::vector<Pattern> prefix(std::size_t r) const;

    static SubshiftSpec full_shift(ShapeSet shapes, std::string name = "full-shift");
};

// Throws INVALID_SHAPE when a forbidden pattern uses a shape outside the shapeset.
void validate_spec(const SubshiftSpec& spec);

// Minimal radius r and none of the first r forbidden patterns occur (on shapes).
bool rank_allowed(const Patch& patch, const SubshiftSpec& spec, int r);
// Decoupled form: radius r, forbidden prefix of length k.
bool rank_allowed(const Patch& patch, const SubshiftSpec& spec, int r, std::size_t k);

}  // namespace rhombus
