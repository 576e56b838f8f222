#include "rhombus/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <Eigen/Dense>

#include "rhombus/error.hpp"

namespace rhombus {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::uint64_t sector_mask(int start, int width, int turn) {
    std::uint64_t m = 0;
    for (int k = 0; k < width; ++k) m |= 1ull << ((start + k) % turn);
    return m;
}

struct TileType {
    Shape shape;
    EdgeColors colors = kUncolored;
    bool ccw = true;
    std::array<ExactPoint, 4> offset;
    std::array<int, 4> corner_start{}, corner_width{};
    std::array<std::uint64_t, 4> corner{};
    double area = 0;
};

std::vector<TileType> make_types(const Tileset& ts) {
    const DirectionBasis& b = DirectionBasis::of(ts.order());
    const int L = b.line_count(), turn = b.turn();
    std::vector<TileType> out;
    for (const Tile& t : ts.tiles()) {
        TileType tt;
        tt.shape = t.shape;
        tt.colors = t.colors;
        const ShapeFrame f = frame_of(b, t.shape);
        tt.ccw = f.ccw;
        const ExactPoint u = b.root(t.shape.u), v = b.root(t.shape.v);
        tt.offset = {b.zero(), u, u + v, v};
        const std::array<std::array<int, 2>, 4> dirs = {
            {{f.du, f.dv}, {f.du + L, f.dv}, {f.du + L, f.dv + L}, {f.du, f.dv + L}}};
        for (int i = 0; i < 4; ++i) {
            const int a = b.wrap(dirs[i][0]), c = b.wrap(dirs[i][1]);
            const int w = b.wrap(c - a);
            if (w < L) {
                tt.corner_start[i] = a, tt.corner_width[i] = w;
            } else {
                tt.corner_start[i] = c, tt.corner_width[i] = turn - w;
            }
            tt.corner[i] = sector_mask(tt.corner_start[i], tt.corner_width[i], turn);
        }
        tt.area = std::abs(std::sin(std::numbers::pi * tt.corner_width[0] / L));
        out.push_back(tt);
    }
    return out;
}

struct Lattice {
    ExactPoint p1, p2;
    Eigen::Matrix2d inverse;
    double area = 0;
    int det_sign = 1;
    double reach1 = 0, reach2 = 0;  // coordinate spread of vectors shorter than 2
};

struct TileKey {
    Shape shape;
    ExactPoint anchor;
    friend bool operator==(const TileKey&, const TileKey&) = default;
};

struct TileKeyHash {
    std::size_t operator()(const TileKey& k) const noexcept {
        return ExactPointHash{}(k.anchor) ^ (static_cast<std::size_t>(k.shape.u) * 131 + k.shape.v) * 0x9e3779b97f4a7c15ull;
    }
};

struct VInfo {
    std::uint64_t mask = 0;
    int corners = 0;
    ExactPoint pos;
    Eigen::Vector2d fpos;
};

struct ESlot {
    int count = 0;
    ColorId color = kNoColor;
    bool left = false;
};

struct Placed {
    int type = 0;
    RhombusGeometry geo;
};

struct Frame {
    std::array<ExactPoint, 4> vkeys;
    std::array<EdgeKey, 4> ekeys;
    TileKey okey;
};

enum class Mode { Disk, Torus };

struct EngineResult {
    std::vector<Pattern> patterns;
    std::vector<Placed> torus_tiles;
    std::uint64_t nodes = 0;
    std::uint64_t leaves = 0;
    bool exhausted = false;
    bool found = false;
};

// Backtracking growth shared by the disk enumeration and the torus search.
class Engine {
public:
    Engine(const Tileset& ts, const std::vector<TileType>& types, const std::vector<std::vector<int>>& by_line,
           Mode mode, int n, const std::vector<Pattern>& forbidden, const Lattice* lattice, bool colored, bool exists,
           std::uint64_t node_cap, double max_seconds, Clock::time_point started)
        : b_(DirectionBasis::of(ts.order())),
          ts_(ts),
          types_(types),
          by_line_(by_line),
          mode_(mode),
          n_(n),
          nf_(n),
          forbidden_(forbidden),
          lattice_(lattice),
          colored_(colored),
          exists_(exists),
          cap_(node_cap),
          max_seconds_(max_seconds),
          started_(started),
          full_(b_.turn() == 64 ? ~0ull : (1ull << b_.turn()) - 1) {
        max_diameter_ = ts.shapeset().max_diameter();
        if (lattice_) {
            double min_area = 1e9;
            for (const TileType& t : types_) min_area = std::min(min_area, t.area);
            max_tiles_ = static_cast<std::size_t>(lattice_->area / min_area + 1e-6);
        }
    }

    void set_visitor(const PatternVisitor* v) { visit_ = v; }
    // Abandon the run once an earlier branch has pushed the total over the cap.
    void set_cutoff(const std::atomic<std::size_t>* cutoff, std::size_t branch) {
        cutoff_ = cutoff;
        branch_ = branch;
    }

    // Run the subtree rooted at a tile type with corner `corner` at the origin.
    EngineResult run(int type, int corner) {
        const ExactPoint anchor = -types_[type].offset[corner];
        if (try_place(type, anchor)) {
            place(type, anchor);
            if (!forbidden_hit()) {
                if (count_node()) dfs();
            }
            undo();
        }
        result_.patterns.assign(found_.begin(), found_.end());
        return std::move(result_);
    }

private:
    struct Choice {
        bool found = false;
        EdgeKey edge;
        bool left = false;
    };

    ExactPoint canon(const ExactPoint& x) const {
        if (!lattice_) return x;
        const Eigen::Vector2d ab = lattice_->inverse * b_.embed(x);
        const std::int64_t k = floor_coord(x, ab.x(), true);
        const std::int64_t l = floor_coord(x, ab.y(), false);
        return x - lattice_->p1 * k - lattice_->p2 * l;
    }

    std::int64_t floor_coord(const ExactPoint& x, double a, bool first) const {
        const double m = std::round(a);
        if (std::abs(a - m) > 1e-6) return static_cast<std::int64_t>(std::floor(a));
        const std::int64_t mi = static_cast<std::int64_t>(m);
        const int s = first ? b_.sign_cross(x - lattice_->p1 * mi, lattice_->p2)
                            : b_.sign_cross(lattice_->p1, x - lattice_->p2 * mi);
        return s * lattice_->det_sign >= 0 ? mi : mi - 1;
    }

    EdgeKey canon(const EdgeKey& e) const { return {canon(e.start), e.line}; }

    bool count_node() {
        ++result_.nodes;
        if (cap_ && result_.nodes > cap_) {
            result_.exhausted = stop_ = true;
            return false;
        }
        if ((result_.nodes & 255) == 0) {
            if ((max_seconds_ > 0 && seconds_since(started_) > max_seconds_) ||
                (cutoff_ && cutoff_->load(std::memory_order_relaxed) < branch_)) {
                result_.exhausted = stop_ = true;
                return false;
            }
        }
        return true;
    }

    RhombusGeometry geometry(int type, const ExactPoint& anchor) const {
        return RhombusGeometry(b_, PlacedRhombus{types_[type].shape, anchor, kUncolored});
    }

    static RhombusGeometry shifted(const RhombusGeometry& g, const ExactPoint& d, const Eigen::Vector2d& fd) {
        RhombusGeometry out = g;
        for (int i = 0; i < 4; ++i) out.v[i] += d, out.f[i] += fd;
        out.center += fd;
        return out;
    }

    bool shares_vertex(const RhombusGeometry& a, const RhombusGeometry& c) const {
        for (const ExactPoint& x : a.v)
            for (const ExactPoint& y : c.v)
                if (x == y) return true;
        return false;
    }

    // Overlap or a non-edge-to-edge contact. Tiles sharing a vertex have disjoint
    // corner sectors there (checked by mask), which already rules both out.
    bool conflicts(const RhombusGeometry& a, const RhombusGeometry& c) const {
        if ((a.center - c.center).squaredNorm() >= 4.0 + 1e-9) return false;
        if (shares_vertex(a, c)) return false;
        return interiors_overlap(b_, a, c) || has_t_junction(b_, a, c);
    }

    template <typename F>
    void for_translates(const Eigen::Vector2d& delta, F&& f) const {
        // Lattice vectors lambda with |delta - lambda| < 2.
        const Eigen::Vector2d ab = lattice_->inverse * delta;
        const auto i0 = static_cast<std::int64_t>(std::ceil(ab.x() - lattice_->reach1));
        const auto i1 = static_cast<std::int64_t>(std::floor(ab.x() + lattice_->reach1));
        const auto j0 = static_cast<std::int64_t>(std::ceil(ab.y() - lattice_->reach2));
        const auto j1 = static_cast<std::int64_t>(std::floor(ab.y() + lattice_->reach2));
        for (std::int64_t i = i0; i <= i1; ++i)
            for (std::int64_t j = j0; j <= j1; ++j) f(i, j);
    }

    bool try_place(int type, const ExactPoint& anchor) const {
        const TileType& t = types_[type];
        if (lattice_ && tiles_.size() >= max_tiles_) return false;
        // Edges: free on our side, colors agree.
        std::array<EdgeKey, 4> keys;
        for (int s = 0; s < 4; ++s) {
            const bool left = t.ccw != (s >= 2);
            keys[s] = canon(edge_key(b_, PlacedRhombus{t.shape, anchor, kUncolored}, s));
            int count = 0;
            bool other_left = false;
            ColorId other_color = kNoColor;
            auto it = edges_.find(keys[s]);
            if (it != edges_.end()) count = it->second.count, other_left = it->second.left, other_color = it->second.color;
            for (int r = 0; r < s; ++r)
                if (keys[r] == keys[s]) {
                    ++count;
                    other_left = t.ccw != (r >= 2);
                    other_color = t.colors[r];
                }
            if (count >= 2) return false;
            if (count == 1 && (other_left == left || other_color != t.colors[s])) return false;
        }
        // Corner sectors at each vertex.
        std::array<ExactPoint, 4> vk;
        for (int i = 0; i < 4; ++i) {
            vk[i] = canon(anchor + t.offset[i]);
            std::uint64_t used = 0;
            auto it = verts_.find(vk[i]);
            if (it != verts_.end()) used = it->second.mask;
            for (int r = 0; r < i; ++r)
                if (vk[r] == vk[i]) used |= t.corner[r];
            if (used & t.corner[i]) return false;
        }
        // Geometry against nearby tiles.
        const RhombusGeometry g = geometry(type, anchor);
        if (!lattice_) {
            for (const Placed& p : tiles_)
                if (conflicts(g, p.geo)) return false;
            return true;
        }
        bool bad = false;
        auto against = [&](const RhombusGeometry& other, bool self) {
            for_translates(g.center - other.center, [&](std::int64_t i, std::int64_t j) {
                if (bad || (self && i == 0 && j == 0)) return;
                const ExactPoint d = lattice_->p1 * i + lattice_->p2 * j;
                if (conflicts(g, shifted(other, d, b_.embed(d)))) bad = true;
            });
        };
        for (const Placed& p : tiles_) {
            against(p.geo, false);
            if (bad) return false;
        }
        against(g, true);
        return !bad;
    }

    void place(int type, const ExactPoint& anchor) {
        const TileType& t = types_[type];
        Frame fr;
        for (int i = 0; i < 4; ++i) {
            const ExactPoint real = anchor + t.offset[i];
            fr.vkeys[i] = canon(real);
            VInfo& vi = verts_[fr.vkeys[i]];
            if (vi.corners == 0) vi.pos = real, vi.fpos = b_.embed(real);
            vi.mask |= t.corner[i];
            ++vi.corners;
        }
        for (int s = 0; s < 4; ++s) {
            fr.ekeys[s] = canon(edge_key(b_, PlacedRhombus{t.shape, anchor, kUncolored}, s));
            ESlot& es = edges_[fr.ekeys[s]];
            if (es.count == 0) es.color = t.colors[s], es.left = t.ccw != (s >= 2);
            ++es.count;
        }
        fr.okey = TileKey{t.shape, canon(anchor)};
        ++occ_[fr.okey];
        tiles_.push_back(Placed{type, geometry(type, anchor)});
        frames_.push_back(fr);
    }

    void undo() {
        const Frame& fr = frames_.back();
        const TileType& t = types_[tiles_.back().type];
        for (int i = 3; i >= 0; --i) {
            auto it = verts_.find(fr.vkeys[i]);
            it->second.mask &= ~t.corner[i];
            if (--it->second.corners == 0) verts_.erase(it);
        }
        for (int s = 3; s >= 0; --s) {
            auto it = edges_.find(fr.ekeys[s]);
            if (--it->second.count == 0) edges_.erase(it);
        }
        auto it = occ_.find(fr.okey);
        if (--it->second == 0) occ_.erase(it);
        tiles_.pop_back();
        frames_.pop_back();
    }

    // Full occurrence of a forbidden pattern that uses the newest tile.
    bool forbidden_hit() const {
        const Placed& last = tiles_.back();
        const Shape shape = types_[last.type].shape;
        const ExactPoint& anchor = last.geo.v[0];
        for (const Pattern& f : forbidden_) {
            const auto ft = f.patch().tiles();
            for (const PlacedRhombus& k : ft) {
                if (k.shape != shape) continue;
                const ExactPoint off = anchor - k.anchor;
                bool all = true;
                for (const PlacedRhombus& m : ft)
                    if (!occ_.count(TileKey{m.shape, canon(m.anchor + off)})) {
                        all = false;
                        break;
                    }
                if (all) return true;
            }
        }
        return false;
    }

    // Smallest empty run of angle units at a vertex: {width, start}.
    std::pair<int, int> smallest_gap(std::uint64_t mask) const {
        const int turn = b_.turn();
        int first_set = 0;
        while (!(mask >> first_set & 1)) ++first_set;
        std::pair<int, int> best{turn + 1, 0};
        int run = 0, run_start = 0;
        for (int k = 1; k <= turn; ++k) {
            const int a = (first_set + k) % turn;
            if (!(mask >> a & 1)) {
                if (run == 0) run_start = a;
                ++run;
            } else if (run > 0) {
                best = std::min(best, {run, run_start});
                run = 0;
            }
        }
        return best;
    }

    Choice choose() const {
        Choice c;
        const ExactPoint* best_pos = nullptr;
        std::tuple<int, double> best_rank{std::numeric_limits<int>::max(), 0};
        int best_start = 0;
        const double limit = (nf_ - 1e-9) * (nf_ - 1e-9);
        for (const auto& [key, vi] : verts_) {
            if (vi.mask == full_) continue;
            double r2 = 0;
            if (mode_ == Mode::Disk) {
                r2 = vi.fpos.squaredNorm();
                if (r2 >= limit) continue;
            }
            const auto [width, start] = smallest_gap(vi.mask);
            const std::tuple<int, double> rank{width, r2};
            if (!best_pos || rank < best_rank || (rank == best_rank && vi.pos < *best_pos)) {
                best_pos = &vi.pos;
                best_rank = rank;
                best_start = start;
            }
        }
        if (best_pos) {
            const auto [line, sign] = b_.line_of_angle(best_start);
            c.found = true;
            c.edge = sign > 0 ? EdgeKey{*best_pos, line} : EdgeKey{*best_pos - b_.root(line), line};
            c.left = sign > 0;
            return c;
        }
        if (mode_ == Mode::Torus) return c;
        // Chords: boundary edges crossing the disk with both ends outside it.
        const ExactPoint origin = b_.zero();
        for (const auto& [key, es] : edges_) {
            if (es.count != 1) continue;
            if (c.found && !(key < c.edge)) continue;
            if (segment_meets_open_disk(b_, origin, key.start, edge_end(b_, key), n_)) {
                c.found = true;
                c.edge = key;
                c.left = !es.left;
            }
        }
        return c;
    }

    void dfs() {
        if (stop_) return;
        const Choice c = choose();
        if (!c.found) {
            leaf();
            return;
        }
        for (int type : by_line_[c.edge.line]) {
            const ExactPoint anchor =
                rhombus_on_edge(b_, c.edge, types_[type].shape, c.left).anchor;
            if (!try_place(type, anchor)) continue;
            place(type, anchor);
            if (!forbidden_hit() && count_node()) dfs();
            undo();
            if (stop_) return;
        }
    }

    void leaf() {
        ++result_.leaves;
        if (mode_ == Mode::Torus) {
            double area = 0;
            for (const Placed& p : tiles_) area += types_[p.type].area;
            if (std::abs(area - lattice_->area) > 1e-6) return;
            result_.torus_tiles = tiles_;
            result_.found = true;
            stop_ = true;
            return;
        }
        const long euler = static_cast<long>(verts_.size()) - static_cast<long>(edges_.size()) +
                           static_cast<long>(tiles_.size());
        if (euler != 1) return;
        if (!minimal()) return;
        for (const auto& [key, vi] : verts_)
            if (vi.fpos.norm() > nf_ + max_diameter_ + 1e-9)
                throw std::logic_error("pattern support exceeds the n + d disk");

        std::vector<PlacedRhombus> tiles;
        tiles.reserve(tiles_.size());
        for (const Placed& p : tiles_)
            tiles.push_back(PlacedRhombus{types_[p.type].shape, p.geo.v[0],
                                          colored_ ? types_[p.type].colors : kUncolored});
        Pattern p = canonicalize(trusted_patch(b_.order(), std::move(tiles), colored_ ? ts_.palette() : nullptr));
        if (visit_)
            (*visit_)(p);
        else
            found_.insert(std::move(p));
        if (exists_) {
            result_.found = true;
            stop_ = true;
        }
    }

    // Every vertex whose n-disk is covered must see every tile inside that disk.
    bool minimal() const {
        std::vector<std::pair<ExactPoint, ExactPoint>> boundary;
        std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> fboundary;
        for (const auto& [key, es] : edges_)
            if (es.count == 1) {
                boundary.emplace_back(key.start, edge_end(b_, key));
                fboundary.emplace_back(b_.embed(key.start), b_.embed(boundary.back().second));
            }
        const ExactPoint origin = b_.zero();
        for (const auto& [key, vi] : verts_) {
            if (vi.mask != full_ || key == origin) continue;
            // Float distance to the boundary first; exact test only near ties.
            double dmin = std::numeric_limits<double>::infinity();
            for (const auto& [s, e] : fboundary) {
                const Eigen::Vector2d d = e - s;
                const double t = std::clamp(d.dot(vi.fpos - s), 0.0, 1.0);
                dmin = std::min(dmin, (s + t * d - vi.fpos).norm());
            }
            if (dmin < nf_ - 1e-7) continue;
            if (dmin < nf_ + 1e-7) {
                bool covered = true;
                for (const auto& [s, e] : boundary)
                    if (segment_meets_open_disk(b_, key, s, e, n_)) {
                        covered = false;
                        break;
                    }
                if (!covered) continue;
            }
            for (const Placed& p : tiles_) {
                if ((p.geo.center - vi.fpos).norm() > nf_ + 1.0 + 1e-9) return false;
                if (!tile_meets_open_disk(b_, PlacedRhombus{types_[p.type].shape, p.geo.v[0], kUncolored}, key, n_))
                    return false;
            }
        }
        return true;
    }

    const DirectionBasis& b_;
    const Tileset& ts_;
    const std::vector<TileType>& types_;
    const std::vector<std::vector<int>>& by_line_;
    Mode mode_;
    Rational n_;
    double nf_;
    const std::vector<Pattern>& forbidden_;
    const Lattice* lattice_;
    bool colored_;
    bool exists_;
    std::uint64_t cap_;
    double max_seconds_;
    Clock::time_point started_;
    const std::atomic<std::size_t>* cutoff_ = nullptr;
    std::size_t branch_ = 0;
    std::uint64_t full_;
    double max_diameter_ = 0;
    std::size_t max_tiles_ = 0;

    std::unordered_map<ExactPoint, VInfo, ExactPointHash> verts_;
    std::unordered_map<EdgeKey, ESlot, EdgeKeyHash> edges_;
    std::unordered_map<TileKey, int, TileKeyHash> occ_;
    std::vector<Placed> tiles_;
    std::vector<Frame> frames_;
    std::set<Pattern> found_;
    const PatternVisitor* visit_ = nullptr;
    EngineResult result_;
    bool stop_ = false;
};

std::vector<std::vector<int>> types_by_line(const DirectionBasis& b, const std::vector<TileType>& types) {
    std::vector<std::vector<int>> out(b.line_count());
    for (std::size_t i = 0; i < types.size(); ++i) {
        out[types[i].shape.u].push_back(static_cast<int>(i));
        out[types[i].shape.v].push_back(static_cast<int>(i));
    }
    return out;
}

// (type, corner) pairs whose corner sector at the origin covers the unit just
// counter-clockwise of angle 0.
std::vector<std::pair<int, int>> root_branches(const DirectionBasis& b, const std::vector<TileType>& types) {
    std::vector<std::pair<int, int>> out;
    for (std::size_t t = 0; t < types.size(); ++t)
        for (int i = 0; i < 4; ++i)
            if (types[t].corner[i] & 1ull) out.emplace_back(static_cast<int>(t), i);
    (void)b;
    return out;
}

struct BranchOutcome {
    EngineResult result;
    bool done = false;
};

Enumeration run_disk_search(int n, const std::vector<Pattern>& forbidden, const Tileset& ts, bool colored,
                            bool exists, const SearchOptions& options, const PatternVisitor* visit = nullptr) {
    const auto started = Clock::now();
    Enumeration out;
    const DirectionBasis& b = DirectionBasis::of(ts.order());

    if (n == 0) {
        std::set<Pattern> found;
        for (const Tile& t : ts.tiles()) {
            const PlacedRhombus r{t.shape, b.zero(), colored ? t.colors : kUncolored};
            const Patch single = trusted_patch(b.order(), {r}, colored ? ts.palette() : nullptr);
            bool hit = false;
            for (const Pattern& f : forbidden) hit = hit || occurs_in(f, single.tiles(), nullptr);
            ++out.stats.nodes;
            if (hit) continue;
            if (visit)
                (*visit)(canonicalize(single));
            else
                found.insert(canonicalize(single));
            if (exists && !found.empty()) break;
        }
        out.patterns.assign(found.begin(), found.end());
        out.stats.patterns = out.patterns.size();
        out.stats.seconds = seconds_since(started);
        return out;
    }

    const auto types = make_types(ts);
    const auto by_line = types_by_line(b, types);
    const auto roots = root_branches(b, types);
    const std::uint64_t cap = options.budget.max_nodes;

    std::vector<BranchOutcome> outcomes(roots.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> first_found{std::numeric_limits<std::size_t>::max()};
    // Branches past the first one whose prefix total exceeds the cap are never merged.
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::atomic<std::size_t> over_cap{kNone};
    std::size_t prefix_end = 0;
    std::uint64_t prefix_nodes = 0;
    std::exception_ptr failure;
    std::mutex failure_mutex, prefix_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= roots.size()) return;
            if (exists && i > first_found.load()) continue;
            if (i > over_cap.load()) continue;
            try {
                Engine e(ts, types, by_line, Mode::Disk, n, forbidden, nullptr, colored, exists, cap,
                         options.budget.max_seconds, started);
                e.set_visitor(visit);
                if (cap) e.set_cutoff(&over_cap, i);
                outcomes[i].result = e.run(roots[i].first, roots[i].second);
                if (cap) {
                    std::lock_guard lock(prefix_mutex);
                    outcomes[i].done = true;
                    for (; over_cap.load() == kNone && prefix_end < outcomes.size() && outcomes[prefix_end].done;
                         ++prefix_end) {
                        prefix_nodes += outcomes[prefix_end].result.nodes;
                        if (outcomes[prefix_end].result.exhausted || prefix_nodes > cap) {
                            over_cap = prefix_end;
                            break;
                        }
                    }
                } else {
                    outcomes[i].done = true;
                }
                if (exists && outcomes[i].result.found) {
                    std::size_t cur = first_found.load();
                    while (i < cur && !first_found.compare_exchange_weak(cur, i)) {
                    }
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(roots.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Merge in branch order with sequential budget accounting.
    std::set<Pattern> found;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const EngineResult& r = outcomes[i].result;
        out.stats.nodes += r.nodes;
        out.stats.leaves += r.leaves;
        if (r.exhausted || (cap && out.stats.nodes > cap)) {
            out.budget_exhausted = true;
            break;
        }
        found.insert(r.patterns.begin(), r.patterns.end());
        if (exists && r.found) break;
    }
    if (out.budget_exhausted) found.clear();
    out.patterns.assign(found.begin(), found.end());
    out.stats.patterns = out.patterns.size();
    out.stats.seconds = seconds_since(started);
    return out;
}

}  // namespace

Tileset geometric_tileset(const ShapeSet& shapes) {
    std::vector<Tile> tiles;
    for (const Shape& s : shapes.shapes()) tiles.push_back({s, {0, 0, 0, 0}});
    return Tileset(shapes, {Color::reserved("blank")}, std::move(tiles));
}

Enumeration enumerate_locally_allowed(int n, const std::vector<Pattern>& forbidden, const Tileset& tileset,
                                      const SearchOptions& options) {
    if (n < 0) throw Error(ErrorCode::InvalidPatch, "rank must be nonnegative");
    return run_disk_search(n, forbidden, tileset, true, false, options);
}

Enumeration enumerate_geometric(int n, const std::vector<Pattern>& forbidden, const ShapeSet& shapes,
                                const SearchOptions& options) {
    if (n < 0) throw Error(ErrorCode::InvalidPatch, "rank must be nonnegative");
    return run_disk_search(n, forbidden, geometric_tileset(shapes), false, false, options);
}

SearchStats visit_geometric(int n, const std::vector<Pattern>& forbidden, const ShapeSet& shapes,
                            const SearchOptions& options, const PatternVisitor& visit, bool* exhausted) {
    if (n < 0) throw Error(ErrorCode::InvalidPatch, "rank must be nonnegative");
    const Enumeration e = run_disk_search(n, forbidden, geometric_tileset(shapes), false, false, options, &visit);
    if (exhausted) *exhausted = e.budget_exhausted;
    return e.stats;
}

bool disk_tiling(const Tileset& tileset, const SubshiftSpec& spec, int n, const SearchOptions& options,
                 SearchStats* stats) {
    if (n < 0) throw Error(ErrorCode::InvalidPatch, "rank must be nonnegative");
    const auto f = spec.prefix(static_cast<std::size_t>(n));
    Enumeration e = run_disk_search(n, f, tileset, true, true, options);
    if (stats) {
        stats->nodes += e.stats.nodes;
        stats->leaves += e.stats.leaves;
        stats->seconds += e.stats.seconds;
    }
    if (e.budget_exhausted) throw Error(ErrorCode::Budget, "search budget exhausted at rank " + std::to_string(n));
    return !e.patterns.empty();
}

// ---- periodic certificates ----

namespace {

Lattice make_lattice(const DirectionBasis& b, ExactPoint p1, ExactPoint p2) {
    // Lagrange reduction guided by floats; every step is unimodular.
    for (int guard = 0; guard < 64; ++guard) {
        if (b.embed(p1).squaredNorm() > b.embed(p2).squaredNorm() + 1e-12) std::swap(p1, p2);
        const Eigen::Vector2d f1 = b.embed(p1), f2 = b.embed(p2);
        const auto mu = static_cast<std::int64_t>(std::llround(f1.dot(f2) / f1.squaredNorm()));
        if (mu == 0) break;
        p2 -= p1 * mu;
    }
    auto normalize = [&](ExactPoint& p) {
        const int si = b.sign_im(p);
        if (si < 0 || (si == 0 && b.sign_re(p) < 0)) p = -p;
    };
    normalize(p1);
    normalize(p2);
    const double l1 = b.embed(p1).norm(), l2 = b.embed(p2).norm();
    const double a1 = std::atan2(b.embed(p1).y(), b.embed(p1).x());
    const double a2 = std::atan2(b.embed(p2).y(), b.embed(p2).x());
    if (l2 < l1 - 1e-9 || (std::abs(l1 - l2) <= 1e-9 && a2 < a1)) std::swap(p1, p2);

    Lattice lat;
    lat.p1 = p1;
    lat.p2 = p2;
    Eigen::Matrix2d m;
    m.col(0) = b.embed(p1);
    m.col(1) = b.embed(p2);
    lat.inverse = m.inverse();
    lat.area = std::abs(m.determinant());
    lat.det_sign = b.sign_cross(p1, p2);
    lat.reach1 = 2.0 * b.embed(p2).norm() / lat.area + 1e-9;
    lat.reach2 = 2.0 * b.embed(p1).norm() / lat.area + 1e-9;
    return lat;
}

bool in_lattice(const DirectionBasis& b, const Lattice& lat, const ExactPoint& x) {
    const Eigen::Vector2d ab = lat.inverse * b.embed(x);
    const auto k = std::llround(ab.x()), l = std::llround(ab.y());
    return x == lat.p1 * k + lat.p2 * l;
}

std::vector<Lattice> candidate_lattices(const DirectionBasis& b, int max_period) {
    std::set<ExactPoint> reach{b.zero()};
    std::vector<ExactPoint> layer{b.zero()};
    for (int step = 0; step < max_period; ++step) {
        std::vector<ExactPoint> next;
        for (const ExactPoint& p : layer)
            for (int a = 0; a < b.turn(); ++a) {
                const ExactPoint q = p + b.direction(a);
                if (reach.insert(q).second) next.push_back(q);
            }
        layer = std::move(next);
    }
    reach.erase(b.zero());
    const std::vector<ExactPoint> vecs(reach.begin(), reach.end());

    std::vector<Lattice> out;
    for (std::size_t i = 0; i < vecs.size(); ++i)
        for (std::size_t j = i + 1; j < vecs.size(); ++j) {
            if (b.sign_cross(vecs[i], vecs[j]) == 0) continue;
            Lattice lat = make_lattice(b, vecs[i], vecs[j]);
            bool dup = false;
            for (const Lattice& o : out)
                if (std::abs(o.area - lat.area) < 1e-9 && in_lattice(b, o, lat.p1) && in_lattice(b, o, lat.p2)) {
                    dup = true;
                    break;
                }
            if (!dup) out.push_back(lat);
        }
    std::sort(out.begin(), out.end(), [](const Lattice& x, const Lattice& y) {
        if (std::abs(x.area - y.area) > 1e-9) return x.area < y.area;
        if (x.p1 != y.p1) return x.p1 < y.p1;
        return x.p2 < y.p2;
    });
    return out;
}

}  // namespace

std::optional<PeriodicCertificate> periodic_certificate(const Tileset& tileset, const SubshiftSpec& spec,
                                                        int max_period, const SearchOptions& options,
                                                        SearchStats* stats) {
    const auto started = Clock::now();
    const DirectionBasis& b = DirectionBasis::of(tileset.order());
    const auto types = make_types(tileset);
    const auto by_line = types_by_line(b, types);
    const auto roots = root_branches(b, types);
    const std::vector<Pattern>& forbidden = spec.forbidden;
    std::uint64_t nodes = 0;
    std::optional<PeriodicCertificate> result;

    for (const Lattice& lat : candidate_lattices(b, max_period)) {
        for (const auto& [type, corner] : roots) {
            const std::uint64_t cap = options.budget.max_nodes ? options.budget.max_nodes - std::min(nodes, options.budget.max_nodes) : 0;
            if (options.budget.max_nodes && cap == 0) break;
            Engine e(tileset, types, by_line, Mode::Torus, 0, forbidden, &lat, true, true, cap,
                     options.budget.max_seconds, started);
            EngineResult r = e.run(type, corner);
            nodes += r.nodes;
            if (r.exhausted) break;
            if (!r.found) continue;
            std::vector<PlacedRhombus> tiles;
            for (const Placed& p : r.torus_tiles)
                tiles.push_back({types[p.type].shape, p.geo.v[0], types[p.type].colors});
            PeriodicCertificate cert{Patch(b.order(), std::move(tiles), tileset.palette(), false), {lat.p1, lat.p2},
                                     spec.complete};
            if (verify_certificate(cert, tileset, forbidden)) {
                result = std::move(cert);
                break;
            }
        }
        if (result) break;
        if (options.budget.max_nodes && nodes >= options.budget.max_nodes) break;
        if (options.budget.max_seconds > 0 && seconds_since(started) > options.budget.max_seconds) break;
    }
    if (stats) {
        stats->nodes += nodes;
        stats->seconds += seconds_since(started);
    }
    return result;
}

bool verify_certificate(const PeriodicCertificate& cert, const Tileset& tileset,
                        const std::vector<Pattern>& forbidden) {
    const DirectionBasis& b = cert.domain.basis();
    if (cert.domain.empty() || b.sign_cross(cert.periods[0], cert.periods[1]) == 0) return false;
    // Every domain tile is a tileset tile.
    const auto labels = tileset.labels();
    const Palette& pal = *cert.domain.palette();
    for (const PlacedRhombus& t : cert.domain.tiles()) {
        TileLabels l{t.shape, {pal[t.colors[0]], pal[t.colors[1]], pal[t.colors[2]], pal[t.colors[3]]}};
        if (!std::binary_search(labels.begin(), labels.end(), l)) return false;
    }
    const Lattice lat = make_lattice(b, cert.periods[0], cert.periods[1]);
    double area = 0;
    for (const PlacedRhombus& t : cert.domain.tiles())
        area += std::abs(std::sin(std::numbers::pi * interior_angle_units(b, t.shape) / b.line_count()));
    if (std::abs(area - lat.area) > 1e-6) return false;

    // A window of translates wide enough to hold any forbidden occurrence touching the center copy.
    double reach = 0;
    for (const PlacedRhombus& t : cert.domain.tiles()) reach = std::max(reach, b.embed(t.anchor).norm() + 2.0);
    for (const Pattern& f : forbidden) reach += 0, reach = std::max(reach, reach + 2.0 * static_cast<double>(f.size()));
    const double h = std::min(lat.area / b.embed(lat.p1).norm(), lat.area / b.embed(lat.p2).norm());
    const int k = static_cast<int>(std::ceil(2 * reach / h)) + 1;
    std::vector<PlacedRhombus> window;
    for (int i = -k; i <= k; ++i)
        for (int j = -k; j <= k; ++j) {
            const ExactPoint d = cert.periods[0] * i + cert.periods[1] * j;
            for (PlacedRhombus t : cert.domain.tiles()) {
                t.anchor += d;
                window.push_back(t);
            }
        }
    Patch big;
    try {
        big = Patch(b.order(), std::move(window), cert.domain.palette(), false);
    } catch (const Error&) {
        return false;
    }
    if (!check_color_validity(big)) return false;
    // Complete stars around every vertex of the center copy.
    std::unordered_map<ExactPoint, int, ExactPointHash> angle;
    for (const PlacedRhombus& t : big.tiles()) {
        const auto v = t.vertices(b);
        const int a = interior_angle_units(b, t.shape);
        for (int i = 0; i < 4; ++i) angle[v[i]] += (i % 2 == 0) ? a : b.line_count() - a;
    }
    for (const PlacedRhombus& t : cert.domain.tiles())
        for (const ExactPoint& v : t.vertices(b))
            if (angle[v] != b.turn()) return false;
    for (const Pattern& f : forbidden)
        if (occurs_in(f, big.tiles(), nullptr)) return false;
    return true;
}

SearchVerdict refutation_search(const Tileset& tileset, const SubshiftSpec& spec, int n_max,
                                const RefutationOptions& options) {
    SearchVerdict v;
    for (int n = 0; n <= n_max; ++n) {
        bool ok = false;
        try {
            ok = disk_tiling(tileset, spec, n, options.search, &v.stats);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Budget) throw;
            v.kind = VerdictKind::BudgetExhausted;
            v.rank = n;
            return v;
        }
        if (!ok) {
            v.kind = VerdictKind::UntileableAtRank;
            v.rank = n;
            return v;
        }
    }
    v.kind = VerdictKind::AllowedUpToRank;
    v.rank = n_max;
    if (options.try_certificate) {
        auto cert = periodic_certificate(tileset, spec, options.max_period, options.search, &v.stats);
        if (cert) {
            v.kind = VerdictKind::PeriodicCertificate;
            v.certificate = std::move(cert);
        }
    }
    return v;
}

const char* to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::AllowedUpToRank: return "ALLOWED_UP_TO_RANK";
        case VerdictKind::UntileableAtRank: return "UNTILEABLE_AT_RANK";
        case VerdictKind::PeriodicCertificate: return "PERIODIC_CERTIFICATE";
        case VerdictKind::BudgetExhausted: return "BUDGET_EXHAUSTED";
    }
    return "UNKNOWN";
}

std::string format_point(const ExactPoint& p) {
    const DirectionBasis& b = DirectionBasis::of(p.order);
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < b.degree(); ++i) os << (i ? "," : "") << p.c[i];
    os << ')';
    return os.str();
}

std::string describe(const SearchVerdict& v) {
    std::string s = to_string(v.kind);
    if (v.kind == VerdictKind::PeriodicCertificate && v.certificate)
        return s + " period " + format_point(v.certificate->periods[0]) + "," +
               format_point(v.certificate->periods[1]);
    return s + " " + std::to_string(v.rank);
}

std::optional<Patch> find_coloring(const Patch& geometric, const Tileset& tileset, std::uint64_t max_nodes) {
    if (geometric.order() != tileset.order()) throw Error(ErrorCode::BasisMismatch, "patch and tileset over different bases");
    const auto tiles = geometric.tiles();
    const DirectionBasis& b = geometric.basis();
    // Neighbor across each side as (tile, side), or (-1, -1).
    std::vector<std::array<EdgeSide, 4>> nb(tiles.size());
    for (std::size_t t = 0; t < tiles.size(); ++t)
        for (int s = 0; s < 4; ++s) {
            const EdgeIncidence& inc = geometric.edges().at(edge_key(b, tiles[t], s));
            nb[t][s] = {};
            for (const EdgeSide& e : inc.sides)
                if (e.tile >= 0 && e.tile != static_cast<int>(t)) nb[t][s] = e;
        }
    std::vector<std::vector<const Tile*>> candidates(tiles.size());
    for (std::size_t t = 0; t < tiles.size(); ++t) {
        for (const Tile& c : tileset.tiles())
            if (c.shape == tiles[t].shape) candidates[t].push_back(&c);
        if (candidates[t].empty()) return std::nullopt;
    }
    // Breadth-first order so every tile after the first of its component has a fixed neighbor.
    std::vector<std::size_t> order;
    std::vector<char> queued(tiles.size(), 0);
    for (std::size_t root = 0; root < tiles.size(); ++root) {
        if (queued[root]) continue;
        queued[root] = 1;
        order.push_back(root);
        for (std::size_t k = order.size() - 1; k < order.size(); ++k)
            for (const EdgeSide& e : nb[order[k]])
                if (e.tile >= 0 && !queued[e.tile]) {
                    queued[e.tile] = 1;
                    order.push_back(static_cast<std::size_t>(e.tile));
                }
    }
    std::vector<const Tile*> chosen(tiles.size(), nullptr);
    std::uint64_t nodes = 0;
    std::function<bool(std::size_t)> assign = [&](std::size_t k) -> bool {
        if (k == order.size()) return true;
        const std::size_t t = order[k];
        for (const Tile* c : candidates[t]) {
            bool ok = true;
            for (int s = 0; s < 4 && ok; ++s) {
                const EdgeSide& e = nb[t][s];
                if (e.tile >= 0 && chosen[e.tile] && chosen[e.tile]->colors[e.side] != c->colors[s]) ok = false;
            }
            if (!ok) continue;
            if (max_nodes && ++nodes > max_nodes) throw Error(ErrorCode::Budget, "coloring search budget exhausted");
            chosen[t] = c;
            if (assign(k + 1)) return true;
            chosen[t] = nullptr;
        }
        return false;
    };
    if (!assign(0)) return std::nullopt;
    std::vector<PlacedRhombus> out(tiles.begin(), tiles.end());
    for (std::size_t t = 0; t < out.size(); ++t) out[t].colors = chosen[t]->colors;
    return Patch(Patch::Unchecked{}, geometric.order(), std::move(out), tileset.palette());
}

}  // namespace rhombus
