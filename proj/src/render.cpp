#include "rhombus/render.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <vector>

#include "rhombus/chains.hpp"
#include "rhombus/error.hpp"

namespace rhombus {

namespace {

std::string num(double x) {
    if (x == 0) x = 0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

constexpr const char* kStrokeCycle[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
                                        "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr const char* kChainCycle[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628"};

std::string default_fill(const DirectionBasis& b, const Shape& s) {
    const int a = interior_angle_units(b, s);
    const int acute = std::min(a, b.line_count() - a);
    // Narrow rhombi darker.
    const int level = 150 + (105 * acute * 2) / b.line_count();
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", std::min(level, 255), std::min(level, 255), std::min(level + 10, 255));
    return buf;
}

}  // namespace

std::string render_svg(const Patch& patch, const RenderStyle& style) {
    std::string out;
    if (patch.empty()) {
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(2 * style.margin) + "\" height=\"" +
               num(2 * style.margin) + "\" viewBox=\"0 0 " + num(2 * style.margin) + " " + num(2 * style.margin) +
               "\">\n</svg>\n";
        return out;
    }
    const DirectionBasis& b = patch.basis();
    const auto tiles = patch.tiles();

    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x, min_y = min_x, max_y = -min_x;
    std::vector<std::array<Eigen::Vector2d, 4>> pts;
    for (const PlacedRhombus& t : tiles) {
        std::array<Eigen::Vector2d, 4> v;
        const auto ev = t.vertices(b);
        for (int i = 0; i < 4; ++i) {
            v[i] = b.embed(ev[i]);
            min_x = std::min(min_x, v[i].x());
            max_x = std::max(max_x, v[i].x());
            min_y = std::min(min_y, v[i].y());
            max_y = std::max(max_y, v[i].y());
        }
        pts.push_back(v);
    }
    const double s = style.scale, m = style.margin;
    auto X = [&](double x) { return num((x - min_x) * s + m); };
    auto Y = [&](double y) { return num((max_y - y) * s + m); };
    const std::string w = num((max_x - min_x) * s + 2 * m), h = num((max_y - min_y) * s + 2 * m);

    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w + "\" height=\"" + h + "\" viewBox=\"0 0 " + w +
           " " + h + "\">\n";
    out += "<g stroke=\"#333333\" stroke-width=\"1\" stroke-linejoin=\"round\">\n";
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const auto it = style.fills.find(tiles[i].shape);
        const std::string fill = it != style.fills.end() ? it->second : default_fill(b, tiles[i].shape);
        out += "<polygon points=\"";
        for (int k = 0; k < 4; ++k) out += (k ? " " : "") + X(pts[i][k].x()) + "," + Y(pts[i][k].y());
        out += "\" fill=\"" + fill + "\"/>\n";
    }
    out += "</g>\n";

    if (patch.colored()) {
        // Side colors as inset strokes so both tiles of an edge stay visible.
        std::map<std::string, std::string> assigned;
        std::size_t next = 0;
        for (const Color& c : *patch.palette()) {
            const auto it = style.strokes.find(c.label());
            assigned[c.label()] = it != style.strokes.end() ? it->second : kStrokeCycle[next++ % 8];
        }
        out += "<g stroke-width=\"3\" stroke-linecap=\"round\">\n";
        for (std::size_t i = 0; i < tiles.size(); ++i) {
            const Eigen::Vector2d c = (pts[i][0] + pts[i][2]) / 2;
            for (int k = 0; k < 4; ++k) {
                const Eigen::Vector2d a = pts[i][k] + 0.15 * (c - pts[i][k]);
                const Eigen::Vector2d e = pts[i][(k + 1) & 3] + 0.15 * (c - pts[i][(k + 1) & 3]);
                const std::string& label = (*patch.palette())[tiles[i].colors[k]].label();
                out += "<line x1=\"" + X(a.x()) + "\" y1=\"" + Y(a.y()) + "\" x2=\"" + X(e.x()) + "\" y2=\"" +
                       Y(e.y()) + "\" stroke=\"" + assigned[label] + "\"/>\n";
            }
        }
        out += "</g>\n";
    }

    if (style.arrows && patch.colored()) {
        out += "<g fill=\"#000000\">\n";
        for (std::size_t i = 0; i < tiles.size(); ++i)
            for (int k = 0; k < 4; ++k) {
                const Color& c = (*patch.palette())[tiles[i].colors[k]];
                const std::string& n = c.name;
                if (c.kind != ColorKind::User || n.size() < 3 || (n[0] != 's' && n[0] != 'd')) continue;
                if (n.back() != '+' && n.back() != '-') continue;
                const int line = std::stoi(n.substr(1, n.size() - 2));
                Eigen::Vector2d dir = b.unit_vector(b.line_angle(line));
                if (n.back() == '-') dir = -dir;
                const Eigen::Vector2d normal(-dir.y(), dir.x());
                const Eigen::Vector2d mid = (pts[i][k] + pts[i][(k + 1) & 3]) / 2;
                const int heads = n[0] == 'd' ? 2 : 1;
                for (int hd = 0; hd < heads; ++hd) {
                    const Eigen::Vector2d tip = mid + dir * (0.08 * hd + 0.06);
                    const Eigen::Vector2d l = tip - dir * 0.1 + normal * 0.05, r = tip - dir * 0.1 - normal * 0.05;
                    out += "<polygon points=\"" + X(tip.x()) + "," + Y(tip.y()) + " " + X(l.x()) + "," + Y(l.y()) +
                           " " + X(r.x()) + "," + Y(r.y()) + "\"/>\n";
                }
            }
        out += "</g>\n";
    }

    if (style.chains) {
        out += "<g fill=\"none\" stroke-opacity=\"0.35\" stroke-width=\"" + num(0.35 * s) +
               "\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n";
        for (const Chain& c : extract_chains(patch)) {
            out += "<polyline stroke=\"" + std::string(kChainCycle[c.normal % 6]) + "\" points=\"";
            for (std::size_t k = 0; k < c.members.size(); ++k) {
                const auto& v = pts[c.members[k]];
                const Eigen::Vector2d ctr = (v[0] + v[2]) / 2;
                out += (k ? " " : "") + X(ctr.x()) + "," + Y(ctr.y());
            }
            out += "\"/>\n";
        }
        out += "</g>\n";
    }

    if (style.indices && style.index_shape) {
        std::vector<Occurrence> occ;
        try {
            occ = index_occurrences(patch, *style.index_shape);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoOccurrence) throw;
        }
        out += "<g font-family=\"monospace\" font-size=\"" + num(0.22 * s) + "\" text-anchor=\"middle\">\n";
        for (const Occurrence& o : occ) {
            const auto& v = pts[o.tile];
            const Eigen::Vector2d ctr = (v[0] + v[2]) / 2;
            out += "<text x=\"" + X(ctr.x()) + "\" y=\"" + Y(ctr.y()) + "\">" + std::to_string(o.i) + "," +
                   std::to_string(o.j) + "</text>\n";
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace rhombus
