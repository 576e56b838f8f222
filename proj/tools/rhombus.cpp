// rhombus: command-line front end for the rhombus tiling library.
//
// Exit codes: 0 success or verdict delivered, 1 usage or input error, 2 budget exhausted.

#include <cstdio>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rhombus/chains.hpp"
#include "rhombus/error.hpp"
#include "rhombus/io.hpp"
#include "rhombus/penrose.hpp"
#include "rhombus/reductions.hpp"
#include "rhombus/render.hpp"
#include "rhombus/solver.hpp"

using namespace rhombus;
using Report = nlohmann::ordered_json;

namespace {

constexpr int kUsage = 1;
constexpr int kBudget = 2;

struct Common {
    int rank = 1;
    std::uint64_t budget_nodes = 0;
    double budget_seconds = 0;
    int jobs = 1;
    std::string out;
    std::string format = "text";
    std::string svg;

    SearchOptions search() const { return {{budget_nodes, budget_seconds}, jobs}; }
};

void add_search_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("-n,--rank", c.rank, "Rank n (disk radius and forbidden prefix length)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--budget-nodes", c.budget_nodes, "Node cap (0: none)");
    cmd->add_option("--budget-seconds", c.budget_seconds, "Wall-clock cap in seconds (0: none)");
    cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void add_output_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--out", c.out, "Write the result document here");
    cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--svg", c.svg, "Also render an SVG here");
}

std::string text_value(const Report& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

// Text form: the "verdict" entry alone on the first line (if any), then "key value" lines.
void print(const Report& r, const Common& c) {
    if (c.format == "json") {
        std::cout << r.dump(2) << "\n";
        return;
    }
    if (r.contains("verdict")) std::cout << text_value(r["verdict"]) << "\n";
    for (auto it = r.begin(); it != r.end(); ++it) {
        if (it.key() == "verdict") continue;
        std::cout << it.key() << " " << text_value(it.value()) << "\n";
    }
}

Shape parse_shape(const std::string& s) {
    int u = 0, v = 0;
    char comma = 0;
    std::istringstream in(s);
    if (!(in >> u >> comma >> v) || comma != ',' || !in.eof())
        throw Error(ErrorCode::Parse, "shape '" + s + "': expected U,V");
    return {u, v};
}

Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    try {
        std::size_t used = 0;
        const long long num = std::stoll(s.substr(0, slash), &used);
        if (used != s.substr(0, slash).size()) throw std::invalid_argument(s);
        long long den = 1;
        if (slash != std::string::npos) {
            den = std::stoll(s.substr(slash + 1), &used);
            if (used != s.size() - slash - 1 || den == 0) throw std::invalid_argument(s);
        }
        return Rational(num, den);
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::Parse, "offset '" + s + "': expected P or P/Q");
    }
}

void write_out(const std::string& path, const std::string& contents) {
    if (!path.empty()) io::write_file_atomic(path, contents);
}

Report stats_json(const SearchStats& s) {
    return Report{{"nodes", s.nodes}, {"leaves", s.leaves}, {"patterns", s.patterns}};
}

SubshiftSpec load_spec(const std::string& spec_path, const ShapeSet& fallback) {
    if (!spec_path.empty()) return io::parse_spec(io::read_file(spec_path));
    SubshiftSpec s = SubshiftSpec::full_shift(fallback);
    s.complete = true;
    return s;
}

int run_solve(const Common& c, const std::string& tileset_path, const std::string& spec_path, int max_period) {
    const Tileset ts = io::parse_tileset(io::read_file(tileset_path));
    const SubshiftSpec spec = load_spec(spec_path, ts.shapeset());
    RefutationOptions opts;
    opts.search = c.search();
    opts.max_period = max_period;
    const SearchVerdict v = refutation_search(ts, spec, c.rank, opts);
    Report r{{"verdict", describe(v)}, {"kind", to_string(v.kind)}, {"rank", v.rank}, {"stats", stats_json(v.stats)}};
    if (v.certificate) {
        r["domain_tiles"] = v.certificate->domain.size();
        write_out(c.out, io::emit_certificate(*v.certificate));
        if (!c.svg.empty()) io::write_file_atomic(c.svg, render_svg(v.certificate->domain));
    }
    print(r, c);
    return v.kind == VerdictKind::BudgetExhausted ? kBudget : 0;
}

int run_enumerate(const Common& c, const std::string& tileset_path, const std::string& shapeset_path,
                  const std::string& spec_path) {
    if (tileset_path.empty() == shapeset_path.empty() && spec_path.empty())
        throw CLI::ValidationError("enumerate", "give exactly one of --tileset or --shapeset (or a --spec)");
    std::optional<Tileset> ts;
    ShapeSet shapes;
    if (!tileset_path.empty()) {
        ts = io::parse_tileset(io::read_file(tileset_path));
        shapes = ts->shapeset();
    } else if (!shapeset_path.empty()) {
        shapes = io::parse_shapeset(io::read_file(shapeset_path));
    }
    SubshiftSpec spec = load_spec(spec_path, shapes);
    if (spec_path.empty() == false && shapes.size() == 0) shapes = spec.shapeset;
    const auto f = spec.prefix(static_cast<std::size_t>(c.rank));
    const Enumeration e = ts ? enumerate_locally_allowed(c.rank, f, *ts, c.search())
                             : enumerate_geometric(c.rank, f, shapes, c.search());
    Report r{{"verdict", e.budget_exhausted ? "BUDGET_EXHAUSTED" : "PATTERNS " + std::to_string(e.patterns.size())},
             {"rank", c.rank},
             {"stats", stats_json(e.stats)}};
    print(r, c);
    if (!e.budget_exhausted) {
        write_out(c.out, io::emit_patterns(e.patterns));
        if (!c.svg.empty() && !e.patterns.empty()) io::write_file_atomic(c.svg, render_svg(e.patterns.front().patch()));
    }
    return e.budget_exhausted ? kBudget : 0;
}

Report counts(const ReductionReport& rep) {
    return Report{{"input_tiles", rep.input_tiles}, {"input_colors", rep.input_colors},
                  {"output_tiles", rep.output.size()}, {"coding", rep.coding},
                  {"link", rep.link},               {"neutral", rep.neutral},
                  {"fresh", rep.fresh}};
}

int run_wang_to_rhombus(const Common& c, const std::string& wang_path, const std::string& shapeset_path,
                        const std::string& shape) {
    const SquareWangTileset wang = io::parse_wang(io::read_file(wang_path));
    const ShapeSet shapes = io::parse_shapeset(io::read_file(shapeset_path));
    const Shape r = shape.empty() ? shapes.shapes().front() : parse_shape(shape);
    const ReductionReport rep = phi_r_report(wang, shapes, r);
    Report out = counts(rep);
    out["shape"] = {r.u, r.v};
    print(out, c);
    write_out(c.out, io::emit_tileset(rep.output));
    return 0;
}

int run_fresh(const Common& c, const std::string& tileset_path, const std::string& shapeset_path) {
    const Tileset ts = io::parse_tileset(io::read_file(tileset_path));
    const ShapeSet full = io::parse_shapeset(io::read_file(shapeset_path));
    const ReductionReport rep = fresh_color_report(ts, full);
    Report out = counts(rep);
    Report subset = Report::array();
    for (const Shape& s : rep.subset) subset.push_back({s.u, s.v});
    out["subset"] = subset;
    print(out, c);
    write_out(c.out, io::emit_tileset(rep.output));
    return 0;
}

int run_restrict(const Common& c, const std::string& spec_path, const std::string& subset_path) {
    const SubshiftSpec spec = io::parse_spec(io::read_file(spec_path));
    const ShapeSet subset = io::parse_shapeset(io::read_file(subset_path));
    const SubshiftSpec out = restrict_shapeset(spec, subset);
    print(Report{{"shapes", out.shapeset.size()}, {"forbidden_kept", out.forbidden.size()},
                 {"forbidden_dropped", spec.forbidden.size() - out.forbidden.size()}},
          c);
    write_out(c.out, io::emit_spec(out));
    return 0;
}

int run_recurrence(const Common& c, const std::string& spec_path) {
    const SubshiftSpec spec = io::parse_spec(io::read_file(spec_path));
    std::vector<ShapeRecurrence> rec;
    try {
        rec = find_uniformly_recurrent_candidate(spec, c.rank, c.search());
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Budget) throw;
        print(Report{{"verdict", "BUDGET_EXHAUSTED"}}, c);
        return kBudget;
    }
    Report r{{"verdict", "HEURISTIC bounded check up to rank " + std::to_string(c.rank)}};
    for (const ShapeRecurrence& s : rec) {
        const std::string key = "shape " + std::to_string(s.shape.u) + "," + std::to_string(s.shape.v);
        r[key] = s.present_in_all ? std::string("present-in-all")
                                  : "absent-from-some at rank " + std::to_string(s.absent_at_rank);
    }
    print(r, c);
    return 0;
}

int run_chains(const Common& c, const std::string& patch_path, const std::string& shape) {
    const Patch p = io::parse_patch(io::read_file(patch_path));
    const ChainAudit a = audit_chains(p);
    const auto chains = extract_chains(p);
    Report r{{"chains", a.chains},
             {"crossing_violations", a.crossing_violations},
             {"parallel_violations", a.parallel_violations},
             {"partition_violations", a.partition_violations},
             {"cone_checks", a.cone_checks},
             {"cone_violations", a.cone_violations},
             {"adjacency_checks", a.adjacency_checks},
             {"adjacency_violations", a.adjacency_violations}};
    std::size_t crossing_pairs = 0;
    for (std::size_t i = 0; i < chains.size(); ++i)
        for (std::size_t j = i + 1; j < chains.size(); ++j) crossing_pairs += crossings(chains[i], chains[j]) == 1;
    r["crossing_pairs"] = crossing_pairs;
    RenderStyle style;
    style.chains = true;
    if (!shape.empty()) {
        const Shape s = parse_shape(shape);
        Report table = Report::array();
        try {
            for (const Occurrence& o : index_occurrences(p, s))
                table.push_back({{"tile", o.tile}, {"component", o.component}, {"i", o.i}, {"j", o.j}});
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoOccurrence) throw;
        }
        r["indexing"] = table;
        style.indices = true;
        style.index_shape = s;
    }
    print(r, c);
    if (!c.svg.empty()) io::write_file_atomic(c.svg, render_svg(p, style));
    return 0;
}

int run_penrose_gen(const Common& c, int window, const std::vector<std::string>& offsets) {
    if (offsets.size() != 5) throw CLI::ValidationError("--offsets", "expected 5 values");
    std::array<Rational, 5> o;
    for (int k = 0; k < 5; ++k) o[k] = parse_rational(offsets[k]);
    const Patch p = pentagrid_patch(window, o);
    const std::string doc = io::emit_patch(p);
    if (c.out.empty()) std::cout << doc;
    else print(Report{{"tiles", p.size()}}, c);
    write_out(c.out, doc);
    if (!c.svg.empty()) io::write_file_atomic(c.svg, render_svg(p));
    return 0;
}

int run_penrose_tileset(const Common& c, int which) {
    const Tileset ts = which == 20 ? penrose_wang20() : penrose_wang4();
    std::set<Shape> shapes;
    for (const TileLabels& t : ts.labels()) shapes.insert(t.shape);
    const std::string doc = io::emit_tileset(ts);
    if (c.out.empty()) std::cout << doc;
    else print(Report{{"tiles", ts.size()}, {"shapes", shapes.size()}, {"colors", ts.palette()->size()}}, c);
    write_out(c.out, doc);
    return 0;
}

int run_penrose_counterexample(const Common& c) {
    const IsometryCounterexample ce = single_tile_isometry_counterexample();
    const SubshiftSpec spec = SubshiftSpec::full_shift(ce.single.shapeset());
    RefutationOptions opts;
    opts.search = c.search();
    const SearchVerdict single = refutation_search(ce.single, spec, c.rank, opts);
    const SearchVerdict closure = refutation_search(ce.closure, spec, c.rank, opts);
    print(Report{{"single", describe(single)},
                 {"closure_tiles", ce.closure.size()},
                 {"closure", describe(closure)},
                 {"certificate_verified", verify_certificate(ce.certificate, ce.closure, {})}},
          c);
    write_out(c.out, io::emit_certificate(ce.certificate));
    if (!c.svg.empty()) io::write_file_atomic(c.svg, render_svg(ce.certificate.domain));
    return 0;
}

int run_render(const Common& c, const std::string& patch_path, RenderStyle style, const std::string& shape) {
    const Patch p = io::parse_patch(io::read_file(patch_path));
    if (!shape.empty()) {
        style.indices = true;
        style.index_shape = parse_shape(shape);
    }
    const std::string svg = render_svg(p, style);
    const std::string target = !c.svg.empty() ? c.svg : c.out;
    if (target.empty()) std::cout << svg;
    else io::write_file_atomic(target, svg);
    return 0;
}

int run_validate(const Common& c, const std::string& path) {
    const std::string text = io::read_file(path);
    std::string kind;
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.is_object() && j.contains("kind") && j["kind"].is_string()) kind = j["kind"].get<std::string>();
    } catch (const nlohmann::json::parse_error&) {
        io::parse_patch(text);  // reports the line
    }
    Report r{{"verdict", "VALID"}, {"kind", kind}};
    if (kind == "shapeset") {
        r["shapes"] = io::parse_shapeset(text).size();
    } else if (kind == "tileset") {
        r["tiles"] = io::parse_tileset(text).size();
    } else if (kind == "patch") {
        const Patch p = io::parse_patch(text);
        r["tiles"] = p.size();
        if (p.colored()) {
            const bool ok = check_color_validity(p);
            r["color_valid"] = ok;
            if (!ok) r["verdict"] = "INVALID";
        }
    } else if (kind == "subshift") {
        r["forbidden"] = io::parse_spec(text).forbidden.size();
    } else if (kind == "square-wang") {
        r["tiles"] = io::parse_wang(text).tiles.size();
    } else if (kind == "periodic-certificate") {
        io::parse_certificate(text);
    } else if (kind == "patterns") {
        r["patterns"] = io::parse_patterns(text).size();
    } else {
        throw Error(ErrorCode::Parse, "field 'kind': expected one of shapeset, tileset, patch, subshift, square-wang, "
                                      "periodic-certificate, patterns");
    }
    print(r, c);
    return r["verdict"] == "VALID" ? 0 : kUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge-to-edge rhombus Wang tilings"};
    app.require_subcommand(1);
    Common c;
    std::string tileset, shapeset, spec, wang, shape, patch, file, subset;
    int max_period = 2, window = 2, which = 20;
    std::vector<std::string> offsets;
    RenderStyle style;

    auto* solve = app.add_subcommand("solve", "Refutation search with a periodic certificate attempt");
    solve->add_option("--tileset", tileset, "Tileset file")->required();
    solve->add_option("--spec", spec, "Subshift file (default: full shift, complete)");
    solve->add_option("--max-period", max_period, "Longest period vector, in unit steps");
    add_search_flags(solve, c);
    add_output_flags(solve, c);

    auto* enumerate = app.add_subcommand("enumerate", "Locally allowed patterns of rank n");
    enumerate->add_option("--tileset", tileset, "Colored enumeration");
    enumerate->add_option("--shapeset", shapeset, "Geometric enumeration");
    enumerate->add_option("--spec", spec, "Subshift file");
    add_search_flags(enumerate, c);
    add_output_flags(enumerate, c);

    auto* reduce = app.add_subcommand("reduce", "Tileset reductions");
    reduce->require_subcommand(1);
    auto* w2r = reduce->add_subcommand("wang-to-rhombus", "Square Wang tiles to a rhombus tileset");
    w2r->add_option("--wang", wang, "Square Wang tileset file")->required();
    w2r->add_option("--shapeset", shapeset, "Target shapeset file")->required();
    w2r->add_option("--shape", shape, "Coding shape U,V (default: least shape)");
    add_output_flags(w2r, c);
    auto* fresh = reduce->add_subcommand("fresh", "Complete a tileset on a shape subset with fresh colors");
    fresh->add_option("--tileset,--subset", tileset, "Tileset on the subset")->required();
    fresh->add_option("--shapeset", shapeset, "Full shapeset file")->required();
    add_output_flags(fresh, c);
    auto* restrict_cmd = reduce->add_subcommand("restrict", "Restrict a subshift to a shape subset");
    restrict_cmd->add_option("--spec", spec, "Subshift file")->required();
    restrict_cmd->add_option("--subset", subset, "Shapeset file of the subset")->required();
    add_output_flags(restrict_cmd, c);
    auto* recur = reduce->add_subcommand("recurrence", "Bounded per-shape presence check (heuristic)");
    recur->add_option("--spec", spec, "Subshift file")->required();
    add_search_flags(recur, c);
    add_output_flags(recur, c);

    auto* chains = app.add_subcommand("chains", "Chain report for a patch");
    chains->add_option("--patch", patch, "Patch file")->required();
    chains->add_option("--shape", shape, "Index the occurrences of U,V");
    add_output_flags(chains, c);

    auto* penrose = app.add_subcommand("penrose", "Penrose fixtures");
    penrose->require_subcommand(1);
    auto* gen = penrose->add_subcommand("gen", "Pentagrid patch");
    gen->add_option("--window", window, "Window radius in grid space")->check(CLI::PositiveNumber);
    gen->add_option("--offsets", offsets, "Five offsets, P or P/Q")->expected(5)->required()->delimiter(',');
    add_output_flags(gen, c);
    auto* pts = penrose->add_subcommand("tileset", "Built-in Penrose Wang tileset");
    pts->add_option("--which", which, "20 or 4")->check(CLI::IsMember({4, 20}));
    add_output_flags(pts, c);
    auto* ce = penrose->add_subcommand("counterexample", "Single square tile under half-turns");
    add_search_flags(ce, c);
    add_output_flags(ce, c);

    auto* render = app.add_subcommand("render", "SVG of a patch");
    render->add_option("--patch", patch, "Patch file")->required();
    render->add_option("--scale", style.scale, "Pixels per unit edge")->check(CLI::PositiveNumber);
    render->add_flag("--chains", style.chains, "Overlay chains");
    render->add_flag("--arrows", style.arrows, "Draw arrow colors");
    render->add_option("--shape", shape, "Label the Z^2 indices of U,V");
    add_output_flags(render, c);

    auto* validate = app.add_subcommand("validate", "Parse and check a document");
    validate->add_option("file", file, "Any document written by this tool")->required();
    add_output_flags(validate, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*solve) return run_solve(c, tileset, spec, max_period);
        if (*enumerate) return run_enumerate(c, tileset, shapeset, spec);
        if (*w2r) return run_wang_to_rhombus(c, wang, shapeset, shape);
        if (*fresh) return run_fresh(c, tileset, shapeset);
        if (*restrict_cmd) return run_restrict(c, spec, subset);
        if (*recur) return run_recurrence(c, spec);
        if (*chains) return run_chains(c, patch, shape);
        if (*gen) return run_penrose_gen(c, window, offsets);
        if (*pts) return run_penrose_tileset(c, which);
        if (*ce) return run_penrose_counterexample(c);
        if (*render) return run_render(c, patch, style, shape);
        if (*validate) return run_validate(c, file);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::Budget ? kBudget : kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
