#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rhombus/patterns.hpp"
#include "rhombus/tiles.hpp"

namespace rhombus {

struct Budget {
    std::uint64_t max_nodes = 0;  // 0: unlimited
    double max_seconds = 0;       // 0: unlimited
};

struct SearchOptions {
    Budget budget;
    int jobs = 1;
};

struct SearchStats {
    std::uint64_t nodes = 0;     // placements that passed every local check
    std::uint64_t leaves = 0;    // completed disk covers examined
    std::size_t patterns = 0;    // distinct patterns kept
    double seconds = 0;          // wall time; not part of any deterministic report
};

struct Enumeration {
    std::vector<Pattern> patterns;  // canonical order
    SearchStats stats;
    bool budget_exhausted = false;
};

// All colored patterns of minimal radius n over the tileset whose erasures avoid
// every pattern of `forbidden` and whose shared edges agree in color.
Enumeration enumerate_locally_allowed(int n, const std::vector<Pattern>& forbidden, const Tileset& tileset,
                                      const SearchOptions& options = {});

// Same over bare shapes (the geometric subshift); patterns are uncolored.
Enumeration enumerate_geometric(int n, const std::vector<Pattern>& forbidden, const ShapeSet& shapes,
                                const SearchOptions& options = {});

// Streams the same patterns as enumerate_geometric without keeping them. A
// pattern with several admissible centers may be visited more than once; with
// jobs > 1 the visitor is called concurrently.
using PatternVisitor = std::function<void(const Pattern&)>;
SearchStats visit_geometric(int n, const std::vector<Pattern>& forbidden, const ShapeSet& shapes,
                            const SearchOptions& options, const PatternVisitor& visit, bool* exhausted = nullptr);

// Colors a fixed geometric patch with tiles of the tileset so that shared edges
// agree, or nullopt. Depth-first over a breadth-first tile order; throws BUDGET
// after max_nodes placements (0: unlimited).
std::optional<Patch> find_coloring(const Patch& geometric, const Tileset& tileset, std::uint64_t max_nodes = 0);

// One monochrome tile per shape.
Tileset geometric_tileset(const ShapeSet& shapes);

// Is A_n nonempty for the first n forbidden patterns of spec. Throws BUDGET and
// RANK_EXCEEDS_KNOWN_PREFIX.
bool disk_tiling(const Tileset& tileset, const SubshiftSpec& spec, int n, const SearchOptions& options = {},
                 SearchStats* stats = nullptr);

struct PeriodicCertificate {
    Patch domain;                      // one tile per translation class; may not be simply connected
    std::array<ExactPoint, 2> periods;  // reduced, sign-normalized lattice basis
    bool complete_f = false;           // sound for the full F only when F was complete
};

// Searches lattices spanned by vectors of at most max_period unit steps, by area.
std::optional<PeriodicCertificate> periodic_certificate(const Tileset& tileset, const SubshiftSpec& spec,
                                                        int max_period, const SearchOptions& options = {},
                                                        SearchStats* stats = nullptr);

// Independent re-check: edge colors, overlaps and stars of the periodic extension,
// and absence of the given forbidden patterns.
bool verify_certificate(const PeriodicCertificate& cert, const Tileset& tileset,
                        const std::vector<Pattern>& forbidden);

enum class VerdictKind { AllowedUpToRank, UntileableAtRank, PeriodicCertificate, BudgetExhausted };

struct SearchVerdict {
    VerdictKind kind = VerdictKind::AllowedUpToRank;
    int rank = 0;
    std::optional<PeriodicCertificate> certificate;
    SearchStats stats;
};

struct RefutationOptions {
    SearchOptions search;
    int max_period = 2;
    bool try_certificate = true;
};

// Iterative deepening over n = 0..n_max, then a periodic certificate attempt.
SearchVerdict refutation_search(const Tileset& tileset, const SubshiftSpec& spec, int n_max,
                                const RefutationOptions& options = {});

const char* to_string(VerdictKind kind);
// "UNTILEABLE_AT_RANK 1", "PERIODIC_CERTIFICATE period (1,0),(0,1)", ...
std::string describe(const SearchVerdict& verdict);
// "(c0,c1,...)" over the reduced power basis.
std::string format_point(const ExactPoint& p);

}  // namespace rhombus
