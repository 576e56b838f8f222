#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "rhombus/geometry.hpp"

namespace rhombus {

// Maximal run of tiles in a patch sharing edges of direction `normal`.
// Members index patch.tiles(); consecutive members share a normal-direction
// edge, and the chain is oriented so each step turns counter-clockwise from the
// normal (cross(normal, step) > 0).
struct Chain {
    int normal = 0;
    std::vector<std::size_t> members;
    int index = 0;  // rank among chains of the same normal in this patch

    friend bool operator==(const Chain&, const Chain&) = default;
};

std::vector<Chain> extract_chains(const Patch& patch);

// Shared members.
int crossings(const Chain& a, const Chain& b);

// No other member center lies in the open double cone of half-angle
// `theta_units` (pi/L each) about the normal, through the member's center.
// theta_units < 0 takes the smallest angle among the patch's shapes.
bool check_monotonicity_cone(const Patch& patch, const Chain& chain, std::size_t member, int theta_units = -1);

struct Occurrence {
    std::size_t tile;
    int component;  // occurrences linked through chains share a component
    int i, j;       // index of the shape.u chain and of the shape.v chain
};

// Z^2 indexing of the occurrences of `shape`, relative to the least occurrence
// of each chain-connected component. Throws NO_OCCURRENCE, and INVALID_PATCH if
// the chain steps disagree around a cycle.
std::vector<Occurrence> index_occurrences(const Patch& patch, const Shape& shape);

// Violation counts of the chain properties on one patch.
struct ChainAudit {
    std::size_t chains = 0;
    std::size_t crossing_violations = 0;   // pairs crossing more than once
    std::size_t parallel_violations = 0;   // same-normal pairs sharing a member
    std::size_t partition_violations = 0;  // tile not in exactly its two chains
    std::size_t cone_checks = 0;
    std::size_t cone_violations = 0;
    std::size_t adjacency_checks = 0;
    std::size_t adjacency_violations = 0;  // includes inconsistent or colliding indices

    std::size_t violations() const {
        return crossing_violations + parallel_violations + partition_violations + cone_violations +
               adjacency_violations;
    }
    ChainAudit& operator+=(const ChainAudit& o);
};

ChainAudit audit_chains(const Patch& patch);

}  // namespace rhombus
