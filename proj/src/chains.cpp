#include "rhombus/chains.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "rhombus/error.hpp"

namespace rhombus {

namespace {

// Tile across the given side, or -1 on the boundary.
int across(const Patch& patch, std::size_t tile, int side) {
    const auto& t = patch.tiles()[tile];
    const auto it = patch.edges().find(edge_key(patch.basis(), t, side));
    if (it == patch.edges().end() || it->second.count != 2) return -1;
    const EdgeIncidence& inc = it->second;
    return inc.sides[0].tile == static_cast<int>(tile) ? inc.sides[1].tile : inc.sides[0].tile;
}

// The side of `tile` shared with `other`, among the two sides along `line`.
int side_towards(const Patch& patch, std::size_t tile, std::size_t other, int line) {
    const Shape& s = patch.tiles()[tile].shape;
    const int a = s.u == line ? 0 : 1;
    for (int side : {a, a + 2})
        if (across(patch, tile, side) == static_cast<int>(other)) return side;
    return -1;
}

ExactPoint doubled_center(const DirectionBasis& b, const PlacedRhombus& t) {
    return t.anchor * 2 + b.root(t.shape.u) + b.root(t.shape.v);
}

std::vector<std::size_t> walk(const Patch& patch, std::size_t start, int side, std::vector<char>& seen) {
    std::vector<std::size_t> out;
    std::size_t cur = start;
    for (;;) {
        const int next = across(patch, cur, side);
        if (next < 0 || seen[next]) break;
        // Enter through the side facing cur, leave through the opposite one.
        const int line = (side & 1) == 0 ? patch.tiles()[cur].shape.u : patch.tiles()[cur].shape.v;
        const int entry = side_towards(patch, next, cur, line);
        if (entry < 0) break;
        seen[next] = 1;
        out.push_back(static_cast<std::size_t>(next));
        cur = static_cast<std::size_t>(next);
        side = entry ^ 2;
    }
    return out;
}

}  // namespace

std::vector<Chain> extract_chains(const Patch& patch) {
    const DirectionBasis& b = patch.basis();
    const auto tiles = patch.tiles();
    std::vector<Chain> out;
    // done[tile][0] for the shape.u chain, [1] for the shape.v chain
    std::vector<std::array<char, 2>> done(tiles.size(), {0, 0});
    for (std::size_t t = 0; t < tiles.size(); ++t)
        for (int k = 0; k < 2; ++k) {
            if (done[t][k]) continue;
            const int line = k == 0 ? tiles[t].shape.u : tiles[t].shape.v;
            std::vector<char> seen(tiles.size(), 0);
            seen[t] = 1;
            auto back = walk(patch, t, k, seen);
            auto fwd = walk(patch, t, k + 2, seen);
            Chain c;
            c.normal = line;
            c.members.assign(back.rbegin(), back.rend());
            c.members.push_back(t);
            c.members.insert(c.members.end(), fwd.begin(), fwd.end());
            if (c.members.size() >= 2) {
                const ExactPoint step =
                    doubled_center(b, tiles[c.members[1]]) - doubled_center(b, tiles[c.members[0]]);
                if (b.sign_cross(b.root(line), step) < 0) std::reverse(c.members.begin(), c.members.end());
            }
            for (std::size_t m : c.members) done[m][tiles[m].shape.u == line ? 0 : 1] = 1;
            out.push_back(std::move(c));
        }

    // Rank parallel chains by the position of their first member along the normal.
    auto key = [&](const Chain& c) {
        return b.unit_vector(b.line_angle(c.normal)).dot(b.embed(doubled_center(b, tiles[c.members.front()])));
    };
    std::sort(out.begin(), out.end(), [&](const Chain& x, const Chain& y) {
        if (x.normal != y.normal) return x.normal < y.normal;
        const double kx = key(x), ky = key(y);
        if (kx != ky) return kx < ky;
        return x.members < y.members;
    });
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].index = (i > 0 && out[i - 1].normal == out[i].normal) ? out[i - 1].index + 1 : 0;
    return out;
}

int crossings(const Chain& a, const Chain& b) {
    std::vector<std::size_t> x = a.members, y = b.members;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::vector<std::size_t> common;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
    return static_cast<int>(common.size());
}

bool check_monotonicity_cone(const Patch& patch, const Chain& chain, std::size_t member, int theta_units) {
    const DirectionBasis& b = patch.basis();
    const auto tiles = patch.tiles();
    if (theta_units < 0) {
        theta_units = b.line_count();
        for (const PlacedRhombus& t : tiles) {
            const int a = interior_angle_units(b, t.shape);
            theta_units = std::min({theta_units, a, b.line_count() - a});
        }
    }
    const ExactPoint w_conj = b.conjugate(b.direction(theta_units));
    const ExactPoint u_conj = b.conjugate(b.root(chain.normal));
    const ExactPoint c0 = doubled_center(b, tiles[member]);
    for (std::size_t m : chain.members) {
        if (m == member) continue;
        // Fold conj(u) * d into the closed first quadrant, then compare its angle with theta.
        ExactPoint x = b.multiply(u_conj, doubled_center(b, tiles[m]) - c0);
        if (b.sign_re(x) < 0) x = -x;
        if (b.sign_im(x) < 0) x = b.conjugate(x);
        if (b.sign_im(b.multiply(w_conj, x)) < 0) return false;
    }
    return true;
}

std::vector<Occurrence> index_occurrences(const Patch& patch, const Shape& shape) {
    const auto tiles = patch.tiles();
    std::vector<std::size_t> occ;
    for (std::size_t t = 0; t < tiles.size(); ++t)
        if (tiles[t].shape == shape) occ.push_back(t);
    if (occ.empty()) throw Error(ErrorCode::NoOccurrence, "shape does not occur in the patch");

    std::vector<int> slot(tiles.size(), -1);
    for (std::size_t k = 0; k < occ.size(); ++k) slot[occ[k]] = static_cast<int>(k);

    // Links between consecutive occurrences along a chain: (from, to, di, dj).
    struct Link {
        int to, di, dj;
    };
    std::vector<std::vector<Link>> links(occ.size());
    for (const Chain& c : extract_chains(patch)) {
        if (!shape.has_line(c.normal)) continue;
        const bool along_u = c.normal == shape.u;
        int prev = -1;
        for (std::size_t k = 0; k < c.members.size(); ++k) {
            const std::size_t t = c.members[k];
            if (slot[t] < 0) continue;
            if (prev >= 0) {
                const std::size_t a = c.members[static_cast<std::size_t>(prev)];
                const int exit = side_towards(patch, a, c.members[static_cast<std::size_t>(prev) + 1], c.normal);
                const int step = (exit == 2 || exit == 1) ? 1 : -1;
                const int di = along_u ? 0 : step, dj = along_u ? step : 0;
                links[slot[a]].push_back({slot[t], di, dj});
                links[slot[t]].push_back({slot[a], -di, -dj});
            }
            prev = static_cast<int>(k);
        }
    }

    std::vector<Occurrence> out(occ.size());
    std::vector<char> seen(occ.size(), 0);
    int component = 0;
    for (std::size_t s = 0; s < occ.size(); ++s) {
        if (seen[s]) continue;
        out[s] = {occ[s], component, 0, 0};
        seen[s] = 1;
        std::deque<std::size_t> queue{s};
        while (!queue.empty()) {
            const std::size_t x = queue.front();
            queue.pop_front();
            for (const Link& l : links[x]) {
                const int ni = out[x].i + l.di, nj = out[x].j + l.dj;
                if (seen[l.to]) {
                    if (out[l.to].i != ni || out[l.to].j != nj)
                        throw Error(ErrorCode::InvalidPatch, "chain steps disagree around a cycle");
                    continue;
                }
                seen[l.to] = 1;
                out[l.to] = {occ[l.to], component, ni, nj};
                queue.push_back(static_cast<std::size_t>(l.to));
            }
        }
        ++component;
    }
    return out;
}

ChainAudit& ChainAudit::operator+=(const ChainAudit& o) {
    chains += o.chains;
    crossing_violations += o.crossing_violations;
    parallel_violations += o.parallel_violations;
    partition_violations += o.partition_violations;
    cone_checks += o.cone_checks;
    cone_violations += o.cone_violations;
    adjacency_checks += o.adjacency_checks;
    adjacency_violations += o.adjacency_violations;
    return *this;
}

ChainAudit audit_chains(const Patch& patch) {
    ChainAudit a;
    const auto tiles = patch.tiles();
    const auto chains = extract_chains(patch);
    a.chains = chains.size();

    // Each tile sits in exactly one chain per edge direction of its shape.
    std::vector<std::array<int, 2>> seen(tiles.size(), {0, 0});
    std::size_t total = 0;
    for (const Chain& c : chains) {
        total += c.members.size();
        std::set<std::size_t> uniq(c.members.begin(), c.members.end());
        if (uniq.size() != c.members.size()) ++a.partition_violations;
        for (std::size_t m : c.members) {
            if (!tiles[m].shape.has_line(c.normal)) {
                ++a.partition_violations;
                continue;
            }
            ++seen[m][tiles[m].shape.u == c.normal ? 0 : 1];
        }
    }
    for (const auto& s : seen)
        if (s[0] != 1 || s[1] != 1) ++a.partition_violations;
    if (total != 2 * tiles.size()) ++a.partition_violations;

    for (std::size_t i = 0; i < chains.size(); ++i)
        for (std::size_t j = i + 1; j < chains.size(); ++j) {
            const int c = crossings(chains[i], chains[j]);
            if (c > 1) ++a.crossing_violations;
            if (c > 0 && chains[i].normal == chains[j].normal) ++a.parallel_violations;
        }

    for (const Chain& c : chains)
        for (std::size_t m : c.members) {
            ++a.cone_checks;
            if (!check_monotonicity_cone(patch, c, m)) ++a.cone_violations;
        }

    std::set<Shape> shapes;
    for (const PlacedRhombus& t : tiles) shapes.insert(t.shape);
    for (const Shape& s : shapes) {
        std::vector<Occurrence> occ;
        try {
            occ = index_occurrences(patch, s);
        } catch (const Error&) {
            ++a.adjacency_violations;
            continue;
        }
        std::vector<int> at(tiles.size(), -1);
        std::set<std::tuple<int, int, int>> cells;
        for (std::size_t k = 0; k < occ.size(); ++k) {
            at[occ[k].tile] = static_cast<int>(k);
            if (!cells.insert({occ[k].component, occ[k].i, occ[k].j}).second) ++a.adjacency_violations;
        }
        // Walk every chain: consecutive occurrences move one unit in the
        // coordinate of the other direction.
        for (const Chain& c : chains) {
            if (!s.has_line(c.normal)) continue;
            const Occurrence* prev = nullptr;
            for (std::size_t m : c.members) {
                if (at[m] < 0) continue;
                const Occurrence& cur = occ[at[m]];
                if (prev) {
                    ++a.adjacency_checks;
                    const int di = std::abs(cur.i - prev->i), dj = std::abs(cur.j - prev->j);
                    const bool ok = cur.component == prev->component &&
                                    (c.normal == s.u ? (di == 0 && dj == 1) : (di == 1 && dj == 0));
                    if (!ok) ++a.adjacency_violations;
                }
                prev = &cur;
            }
        }
    }
    return a;
}

}  // namespace rhombus
