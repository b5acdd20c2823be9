#include "ugraph/cli.hpp"

#include "ugraph/errors.hpp"
#include "ugraph/generate.hpp"
#include "ugraph/ideals.hpp"
#include "ugraph/paths.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#ifndef UGRAPH_DATA_DIR
#define UGRAPH_DATA_DIR "data"
#endif

namespace ugraph::cli {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Ultragraph load(const std::string& path) { return Ultragraph::from_spec(dsl::parse(read_file(path))); }

template <class T, class F>
std::string join(const std::vector<T>& xs, F render, std::size_t limit = 0) {
    std::string out;
    std::size_t shown = limit == 0 ? xs.size() : std::min(limit, xs.size());
    for (std::size_t i = 0; i < shown; ++i) out += (i ? ", " : "") + render(xs[i]);
    if (shown < xs.size()) out += ", ... (" + std::to_string(xs.size()) + " total)";
    return out;
}

std::string word_text(const BinaryWord& w) { return w.str(); }
std::string vertex_text(const EVertex& x) { return x.to_string(); }

std::string sigma_text(const BinaryWord& w) { return w.is_empty() ? "empty" : w.str(); }

bool is_finite_instance(const Ultragraph& g) {
    return g.universe_size() && g.edge_count() && *g.universe_size() <= kMaxAlgebraVertices;
}

bool all_ranges_finite(const Ultragraph& g) {
    auto count = g.edge_count();
    if (!count) return false;
    for (std::int64_t n = 1; n <= *count; ++n) {
        if (!g.range(EdgeId(n)).is_finite()) return false;
    }
    return true;
}

BuildParams clamp(const Ultragraph& g, BuildParams p) {
    if (auto n = g.universe_size()) p.vertex_horizon = std::min(p.vertex_horizon, *n);
    if (auto n = g.edge_count()) {
        p.edge_horizon = std::min(p.edge_horizon, *n);
        p.word_depth = std::min(p.word_depth, std::max<std::int64_t>(*n, 1));
    }
    return p;
}

json report_json(const Report& rep) {
    json checks = json::array();
    for (const Check& c : rep.checks) checks.push_back({{"identity", c.identity}, {"pass", c.pass}, {"witness", c.witness}});
    return {{"checks", checks}, {"pass", rep.all_pass()}};
}

void add_path_bijection(Builder& b, const BuiltGraph& e, std::int64_t bound, std::size_t max_eps, Report& rep) {
    std::vector<std::string> fails;
    std::size_t checked = 0, skipped = 0;
    for (std::int64_t v = 1; v <= bound; ++v) {
        for (std::int64_t w = 1; w <= bound; ++w) {
            try {
                BijectionResult r = verify_path_bijection(b, e, VertexId(v), VertexId(w), max_eps);
                checked += r.g_paths;
                for (const Check& c : r.report.checks) {
                    if (!c.pass) fails.push_back(c.witness);
                }
            } catch (const HorizonTooSmall&) {
                ++skipped;
            }
        }
    }
    rep.summarize("path-bijection", checked, fails);
    if (skipped > 0) rep.checks.back().witness += " (" + std::to_string(skipped) + " pairs leave the window)";
}

void add_condition_k(const Ultragraph& g, const BuiltGraph& e, Report& rep) {
    const Multigraph mg = ultragraph_multigraph(g);
    const Multigraph me = built_multigraph(e);
    const ConditionK kg = condition_k(mg);
    const ConditionK ke = condition_k(me);
    rep.add(kg.kind == ke.kind, "condition-k-equivalence", "G: " + kg.to_string() + ", E: " + ke.to_string());

    std::vector<std::string> fails;
    std::size_t checked = 0;
    for (const Multigraph* m : {&mg, &me}) {
        const std::size_t cap = m->names.size() * (m->arcs.size() + 1) + 1;
        for (std::size_t x = 0; x < m->names.size(); ++x) {
            ++checked;
            ReturnCount exact = first_return_count(*m, x);
            ReturnCount listed = first_return_count_enumerated(*m, x, cap);
            if (!(exact == listed)) {
                fails.push_back(m->names[x] + ": " + exact.to_string() + " vs enumerated " + listed.to_string());
            }
        }
    }
    rep.summarize("first-return-enumeration", checked, fails);
}

void add_edge_ideals(Builder& b, std::int64_t edges, Report& rep) {
    std::vector<std::string> fails;
    const Ultragraph& g = b.graph();
    std::vector<std::pair<std::string, UPSet>> ideals = {{"all", UPSet::all()}, {"none", UPSet::empty()}};
    if (g.has_edge(EdgeId(1))) ideals.emplace_back("r(e1)", g.range(EdgeId(1)));
    for (const auto& [name, s] : ideals) {
        for (const Check& c : verify_edge_ideal_equivalence(b, ideal_below(s), edges).checks) {
            if (!c.pass) fails.push_back("below " + name + ": " + c.witness);
        }
    }
    rep.summarize("edge-ideal-equivalence", ideals.size(), fails);
}

std::string render_summary(Builder& b, const BuiltGraph& e) {
    const Ultragraph& g = b.graph();
    const BuildParams& p = e.params;
    std::ostringstream os;
    os << "instance: " << g.describe() << "\n";
    os << "window: D=" << p.word_depth << " M=" << p.vertex_horizon << " N=" << p.edge_horizon << "\n";
    if (all_ranges_finite(g)) os << "degenerate: edge-split graph\n";
    for (std::int64_t n = 1; n <= p.word_depth; ++n) {
        auto level = b.delta_level(n);
        os << "Delta_" << n << " (" << level.size() << "): {" << join(level, word_text, 12) << "}\n";
    }
    os << "Gamma0: {" << join(b.gamma0_up_to(p.word_depth), [](const BinaryWord& w) { return w.compact(); }) << "}\n";
    std::vector<std::string> w0;
    for (std::int64_t m = 1; m <= p.vertex_horizon; ++m) {
        if (b.sigma(VertexId(m)).is_empty()) w0.push_back(VertexId(m).to_string());
    }
    os << "W0 (m <= " << p.vertex_horizon << "): {" << join(w0, [](const std::string& s) { return s; }) << "}\n";
    os << "sigma:\n";
    for (std::int64_t m = 1; m <= p.vertex_horizon; ++m) {
        os << "  " << VertexId(m).to_string() << " " << sigma_text(b.sigma(VertexId(m))) << "\n";
    }
    os << "X-sets:\n";
    for (std::int64_t n = 1; n <= p.edge_horizon; ++n) {
        os << "  X(" << n << ") = {" << join(b.x_set(EdgeId(n)), vertex_text, 16) << "}\n";
    }
    std::size_t frontier = 0;
    for (const EVertex& x : e.vertices()) frontier += e.is_frontier(x);
    os << "E: " << e.vertices().size() << " vertices (" << frontier << " frontier), " << e.edges().size() << " edges\n";
    return os.str();
}

std::string render_graph(const BuiltGraph& e, const std::string& format) {
    if (format == "json") return e.to_json() + "\n";
    if (format == "dot") return e.to_dot();
    std::ostringstream os;
    os << "vertices:";
    for (const EVertex& x : e.vertices()) os << " " << x.to_string() << (e.is_frontier(x) ? "*" : "");
    os << "\nedges:\n";
    for (const BuiltEdge& be : e.edges()) {
        os << "  " << be.label.to_string() << ": " << be.source.to_string() << " -> " << be.range.to_string() << "\n";
    }
    return os.str();
}

struct Options {
    std::string input;
    std::int64_t word_depth = 7;
    std::int64_t vertex_horizon = 8;
    std::int64_t edge_horizon = 8;
    std::int64_t sigma_cap = 200;
    std::uint64_t seed = 42;
    std::string format = "text";
    std::string output;
    std::int64_t pointwise_bound = 60;
    std::size_t max_eps = 2;
    std::size_t fuzz_max_eps = 3;
    std::int64_t from = 1, to = 1;
    std::int64_t corrupt_sigma = 0;
    std::size_t count = 200;
    unsigned threads = 0;
    std::string golden_dir;
    std::string action;
    std::vector<std::int64_t> h, v;

    BuildParams params() const { return {word_depth, vertex_horizon, edge_horizon}; }
    BuilderOptions builder_options() const {
        BuilderOptions o;
        o.sigma_cap = sigma_cap;
        return o;
    }
};

void emit(const std::string& text, const Options& o, std::ostream& out) {
    if (o.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.output);
    if (!f) throw Error("cannot write " + o.output);
    f << text;
}

int cmd_build(const Options& o, std::ostream& out) {
    Builder b(load(o.input), std::nullopt, o.builder_options());
    BuiltGraph e = build_e(b, clamp(b.graph(), o.params()));
    if (o.format == "text") {
        out << render_summary(b, e);
        if (!o.output.empty()) {
            std::ofstream f(o.output);
            if (!f) throw Error("cannot write " + o.output);
            f << e.to_json() << "\n";
        }
    } else {
        emit(render_graph(e, o.format), o, out);
    }
    return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
    Ultragraph g = load(o.input);
    Report rep;
    if (is_finite_instance(g) && o.corrupt_sigma == 0) {
        rep = verify_finite_instance(g, o.max_eps);
    } else {
        Builder b(g, std::nullopt, o.builder_options());
        if (o.corrupt_sigma > 0) {
            const VertexId bad(o.corrupt_sigma);
            b.set_sigma_override([bad](VertexId v) -> std::optional<BinaryWord> {
                if (v == bad) return BinaryWord();
                return std::nullopt;
            });
        }
        rep = verify_window(b, clamp(g, o.params()), o.pointwise_bound, o.max_eps);
    }
    if (o.format == "json") {
        emit(report_json(rep).dump(2) + "\n", o, out);
    } else {
        emit(rep.to_string(), o, out);
    }
    return rep.all_pass() ? 0 : 1;
}

int cmd_demo(const Options& o, std::ostream& out) {
    const std::string dir = o.golden_dir.empty() ? data_dir() + "/golden" : o.golden_dir;
    const std::string input = o.input.empty() ? data_dir() + "/example_fig1.ug" : o.input;
    Builder b(load(input), std::nullopt, o.builder_options());
    bool ok = true;
    for (const auto& [name, text] : example_tables(b)) {
        const std::string path = dir + "/" + name + ".txt";
        std::string golden;
        try {
            golden = read_file(path);
        } catch (const Error&) {
            out << "FAIL " << name << " missing golden file " << path << "\n";
            ok = false;
            continue;
        }
        if (golden == text) {
            out << "PASS " << name << "\n";
            continue;
        }
        ok = false;
        std::istringstream a(golden), c(text);
        std::string la, lc;
        std::size_t line = 0;
        while (true) {
            ++line;
            bool more_a = static_cast<bool>(std::getline(a, la));
            bool more_c = static_cast<bool>(std::getline(c, lc));
            if (!more_a && !more_c) break;
            if (!more_a) la = "<end>";
            if (!more_c) lc = "<end>";
            if (la != lc) {
                out << "FAIL " << name << " line " << line << ": expected '" << la << "', computed '" << lc << "'\n";
                break;
            }
        }
    }
    return ok ? 0 : 1;
}

int cmd_paths(const Options& o, std::ostream& out) {
    Builder b(load(o.input), std::nullopt, o.builder_options());
    BuiltGraph e = build_e(b, clamp(b.graph(), o.params()));
    const VertexId v(o.from), w(o.to);
    BijectionResult r = verify_path_bijection(b, e, v, w, o.max_eps);
    if (o.format == "json") {
        emit(json{{"from", o.from}, {"to", o.to}, {"max_eps", o.max_eps}, {"e_paths", r.e_paths},
                  {"g_paths", r.g_paths}, {"report", report_json(r.report)}}
                     .dump(2) +
                 "\n",
             o, out);
    } else {
        out << "E-paths " << v.to_string() << " -> " << w.to_string() << " with at most " << o.max_eps
            << " eps edges: " << r.e_paths << "\n";
        out << "ultragraph paths: " << r.g_paths << "\n";
        out << r.report.to_string();
    }
    return r.report.all_pass() ? 0 : 1;
}

int cmd_check_k(const Options& o, std::ostream& out) {
    Ultragraph g = load(o.input);
    Builder b(g, std::nullopt, o.builder_options());
    BuiltGraph e = build_e(b, clamp(g, o.params()));
    const ConditionK ke = condition_k(built_multigraph(e));
    json j{{"E", ke.to_string()}};
    bool ok = true;
    if (g.universe_size() && g.edge_count()) {
        const ConditionK kg = condition_k(ultragraph_multigraph(g));
        j["G"] = kg.to_string();
        ok = kg.kind == ke.kind;
    }
    if (o.format == "json") {
        out << j.dump(2) << "\n";
    } else {
        if (j.contains("G")) out << "G: " << j["G"].get<std::string>() << "\n";
        out << "E" << (all_ranges_finite(g) ? "" : " (window)") << ": " << ke.to_string() << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_sigma(const Options& o, std::ostream& out) {
    Builder b(load(o.input), std::nullopt, o.builder_options());
    std::int64_t top = o.vertex_horizon;
    if (auto n = b.graph().universe_size()) top = std::min(top, *n);
    json j = json::array();
    for (std::int64_t m = 1; m <= top; ++m) {
        const BinaryWord s = b.sigma(VertexId(m));
        if (o.format == "json") {
            j.push_back({{"v", m}, {"sigma", s.str()}});
        } else {
            out << VertexId(m).to_string() << " " << sigma_text(s) << "\n";
        }
    }
    if (o.format == "json") out << j.dump(2) << "\n";
    return 0;
}

int cmd_xsets(const Options& o, std::ostream& out) {
    Builder b(load(o.input), std::nullopt, o.builder_options());
    std::int64_t top = o.edge_horizon;
    if (auto n = b.graph().edge_count()) top = std::min(top, *n);
    json j = json::array();
    for (std::int64_t n = 1; n <= top; ++n) {
        auto xs = b.x_set(EdgeId(n));
        if (o.format == "json") {
            json items = json::array();
            for (const EVertex& x : xs) items.push_back(x.to_string());
            j.push_back({{"n", n}, {"x", items}});
        } else {
            out << "X(" << n << ") = {" << join(xs, vertex_text) << "}\n";
        }
    }
    if (o.format == "json") out << j.dump(2) << "\n";
    return 0;
}

int cmd_ideals(const Options& o, std::ostream& out) {
    Ultragraph g = load(o.input);
    if (o.action == "enumerate") {
        auto pairs = enumerate_admissible_pairs(g);
        if (o.format == "json") {
            json j = json::array();
            for (const AdmissiblePair& p : pairs) {
                json members = json::array();
                for (VertexMask m : p.ideal) members.push_back(mask_to_string(m));
                j.push_back({{"support", mask_to_string(p.support())}, {"members", members}, {"V", json::array()}});
            }
            out << j.dump(2) << "\n";
        } else {
            out << pairs.size() << " admissible pairs\n";
            for (const AdmissiblePair& p : pairs) out << "  " << p.to_string() << "\n";
        }
        return 0;
    }
    CorrespondenceResult r = verify_ideal_correspondence(g);
    if (o.format == "json") {
        out << json{{"admissible_pairs", r.ultra_pairs}, {"graph_pairs", r.graph_pairs}, {"surjective", r.surjective},
                    {"report", report_json(r.report)}}
                   .dump(2)
            << "\n";
    } else {
        out << "admissible pairs: " << r.ultra_pairs << ", graph pairs: " << r.graph_pairs << "\n";
        out << r.report.to_string();
    }
    return r.report.all_pass() ? 0 : 1;
}

int cmd_quotient(const Options& o, std::ostream& out) {
    Ultragraph g = load(o.input);
    const SetAlgebra algebra = g0_algebra(g);
    VertexMask support = 0;
    for (std::int64_t m : o.h) {
        if (m < 1 || m > algebra.universe) throw ValidationError("--H names " + VertexId(m).to_string() + " outside the universe");
        support |= VertexMask{1} << (m - 1);
    }
    AdmissiblePair pair;
    for (VertexMask m : algebra.members) {
        if ((m & ~support) == 0) pair.ideal.push_back(m);
    }
    for (std::int64_t m : o.v) pair.breaking.emplace_back(m);
    Report check = check_admissible(g, algebra, pair);
    if (!check.all_pass()) throw ValidationError("not an admissible pair:\n" + check.to_string());

    Builder b(g, std::nullopt, o.builder_options());
    BuildParams p = clamp(g, o.params());
    p.vertex_horizon = algebra.universe;
    p.edge_horizon = *g.edge_count();
    BuiltGraph e = build_e(b, p);
    std::set<EVertex> h = theta(b, ideal_below(mask_to_upset(support)), p.word_depth, algebra.universe);
    std::set<EVertex> fin_minus_v;
    for (VertexId v : fin_infinity(g, pair)) {
        if (std::find(pair.breaking.begin(), pair.breaking.end(), v) == pair.breaking.end()) {
            fin_minus_v.insert(EVertex::vertex(v));
        }
    }
    emit(render_graph(quotient_graph(e, h, fin_minus_v), o.format), o, out);
    return 0;
}

int cmd_import_matrix(const Options& o, std::ostream& out) {
    Ultragraph g = matrix_to_ultragraph(read_file(o.input));
    emit(g.spec() ? dsl::pretty_print(*g.spec()) : to_compact_dsl(g), o, out);
    return 0;
}

int cmd_fuzz(const Options& o, std::ostream& out) {
    FuzzOptions f;
    f.seed = o.seed;
    f.count = o.count;
    f.max_eps = o.fuzz_max_eps;
    f.threads = o.threads;
    const auto cases = fuzz(f);

    struct Tally {
        std::size_t pass = 0, fail = 0;
        std::string first;
    };
    std::map<std::string, Tally> tally;
    std::size_t failed_cases = 0;
    json failures = json::array();
    for (const FuzzCase& c : cases) {
        failed_cases += !c.report.all_pass();
        for (const Check& k : c.report.checks) {
            Tally& t = tally[k.identity];
            if (k.pass) {
                ++t.pass;
                continue;
            }
            ++t.fail;
            if (t.first.empty()) t.first = "case " + std::to_string(c.index) + ": " + k.witness;
            failures.push_back({{"case", c.index}, {"instance", c.instance}, {"identity", k.identity}, {"witness", k.witness}});
        }
    }
    if (o.format == "json") {
        json ids = json::object();
        for (const auto& [id, t] : tally) ids[id] = {{"pass", t.pass}, {"fail", t.fail}};
        emit(json{{"seed", o.seed}, {"cases", cases.size()}, {"failed_cases", failed_cases}, {"identities", ids},
                  {"failures", failures}}
                     .dump(2) +
                 "\n",
             o, out);
    } else {
        std::ostringstream os;
        for (const auto& [id, t] : tally) {
            if (t.fail == 0) {
                os << "PASS " << id << " cases=" << t.pass << "\n";
            } else {
                os << "FAIL " << id << " " << t.fail << " of " << (t.pass + t.fail) << " cases, first " << t.first << "\n";
            }
        }
        os << "fuzz seed=" << o.seed << ": " << cases.size() << " cases, " << failed_cases << " failed\n";
        emit(os.str(), o, out);
    }
    return failed_cases == 0 ? 0 : 1;
}

}  // namespace

std::string data_dir() {
    if (const char* env = std::getenv("UGRAPH_DATA_DIR")) return env;
    return UGRAPH_DATA_DIR;
}

std::map<std::string, std::string> example_tables(Builder& b) {
    std::map<std::string, std::string> out;
    std::string s;
    for (const BinaryWord& w : b.gamma0_up_to(29)) s += w.compact() + "\n";
    out["gamma0"] = s;

    std::string w0, wplus;
    std::size_t n0 = 0, np = 0;
    for (std::int64_t m = 1; n0 < 10 || np < 13; ++m) {
        const bool plus = b.classify(VertexId(m)).w_plus;
        if (!plus && n0 < 10) {
            w0 += VertexId(m).to_string() + "\n";
            ++n0;
        } else if (plus && np < 13) {
            wplus += VertexId(m).to_string() + "\n";
            ++np;
        }
    }
    out["w0"] = w0;
    out["wplus"] = wplus;

    s.clear();
    for (std::int64_t m = 1; m <= 20; ++m) s += VertexId(m).to_string() + " " + sigma_text(b.sigma(VertexId(m))) + "\n";
    out["sigma"] = s;

    s.clear();
    for (std::int64_t n = 1; n <= 8; ++n) s += "X(" + std::to_string(n) + ") = {" + join(b.x_set(EdgeId(n)), vertex_text) + "}\n";
    out["xsets"] = s;

    s.clear();
    for (std::int64_t n = 1; n <= 6; ++n) s += "Delta_" + std::to_string(n) + " = {" + join(b.delta_level(n), word_text) + "}\n";
    out["delta"] = s;
    return out;
}

std::string to_compact_dsl(const Ultragraph& g) {
    auto size = g.universe_size();
    auto count = g.edge_count();
    if (!size || !count) throw InfiniteUniverse("compact rendering needs a finite instance");
    std::ostringstream os;
    os << "v: " << *size << ";";
    for (std::int64_t n = 1; n <= *count; ++n) {
        const UPSet& r = g.range(EdgeId(n));
        os << " e" << n << ": s=" << g.source(EdgeId(n)).value << ", r={"
           << join(r.members(), [](std::int64_t m) { return std::to_string(m); }) << "};";
    }
    return os.str();
}

Report verify_finite_instance(const Ultragraph& g, std::size_t max_eps) {
    Builder b(g);
    const std::int64_t n = *g.universe_size();
    const std::int64_t edges = *g.edge_count();
    const BuildParams p{std::max<std::int64_t>(edges, 1), n, edges};
    const BuiltGraph e = build_e(b, p);

    Report rep = verify_set_identities(b, p.word_depth, n);
    rep.append(check_regular(b, e));
    if (all_ranges_finite(g)) rep.add(e == edge_split_graph(g, p), "edge-split-degeneracy", "|E0|=" + std::to_string(e.vertices().size()));
    rep.add(quotient_graph(e, {}, {}) == e, "quotient-trivial", "H={}, V={}");
    rep.append(verify_f_structure(b, e));
    add_path_bijection(b, e, n, max_eps, rep);
    add_condition_k(g, e, rep);
    add_edge_ideals(b, edges, rep);
    if (n <= kMaxAlgebraVertices) rep.append(verify_ideal_correspondence(g).report);
    return rep;
}

Report verify_window(Builder& b, const BuildParams& params, std::int64_t pointwise_bound, std::size_t max_eps) {
    const Ultragraph& g = b.graph();
    const BuiltGraph e = build_e(b, params);
    Report rep = verify_set_identities(b, params.word_depth, pointwise_bound);
    rep.append(check_regular(b, e));
    rep.append(verify_f_structure(b, e));
    add_path_bijection(b, e, params.vertex_horizon, max_eps, rep);
    add_edge_ideals(b, params.edge_horizon, rep);
    if (all_ranges_finite(g)) rep.add(e == edge_split_graph(g, params), "edge-split-degeneracy", "window");
    return rep;
}

Ultragraph fuzz_instance(std::uint64_t seed, std::size_t index, int max_vertices, int max_edges) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    return random_finite(rng, max_vertices, max_edges);
}

std::vector<FuzzCase> fuzz(const FuzzOptions& opts) {
    std::vector<FuzzCase> cases(opts.count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < opts.count; i = next++) {
            Ultragraph g = fuzz_instance(opts.seed, i, opts.max_vertices, opts.max_edges);
            FuzzCase& c = cases[i];
            c.index = i;
            c.instance = to_compact_dsl(g);
            try {
                c.report = verify_finite_instance(g, opts.max_eps);
            } catch (const std::exception& ex) {
                c.report.add(false, "exception", ex.what());
            }
        }
    };
    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(opts.count, 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    return cases;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Builds the graph E of an ultragraph and checks the correspondences between them."};
    app.require_subcommand(1);
    Options o;

    auto window = [&o](CLI::App* sub) {
        sub->add_option("-D,--word-depth", o.word_depth, "Longest word of Delta kept in E")->check(CLI::PositiveNumber);
        sub->add_option("-M,--vertex-horizon", o.vertex_horizon, "Vertices v_1..v_M kept in E")->check(CLI::PositiveNumber);
        sub->add_option("-N,--edge-horizon", o.edge_horizon, "Ultraedges e_1..e_N encoded in E")->check(CLI::PositiveNumber);
        sub->add_option("--sigma-cap", o.sigma_cap, "Longest sigma chain followed")->check(CLI::PositiveNumber);
    };
    auto format = [&o](CLI::App* sub, std::vector<std::string> allowed) {
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember(allowed));
    };
    auto input = [&o](CLI::App* sub) { sub->add_option("input", o.input, "Ultragraph spec file")->required(); };

    CLI::App* build = app.add_subcommand("build", "Construct E and print a summary, JSON or DOT");
    input(build);
    window(build);
    format(build, {"text", "json", "dot"});
    build->add_option("-o,--output", o.output, "Write the output (the JSON graph in text mode) to a file");

    CLI::App* verify = app.add_subcommand("verify", "Run every check; exit 0 iff all pass");
    input(verify);
    window(verify);
    format(verify, {"text", "json"});
    verify->add_option("-o,--output", o.output, "Write the report to a file");
    verify->add_option("--pointwise-bound", o.pointwise_bound, "Vertex bound of the pointwise checks")->check(CLI::PositiveNumber);
    verify->add_option("--max-eps", o.max_eps, "Eps edges per path in the bijection check");
    verify->add_option("--corrupt-sigma", o.corrupt_sigma, "Test hook: set sigma(v_m) to the empty word");

    CLI::App* demo = app.add_subcommand("demo", "Recompute the worked example and diff against the golden tables");
    demo->add_option("input", o.input, "Spec file (defaults to the bundled example)");
    demo->add_option("--golden-dir", o.golden_dir, "Directory of golden tables");

    CLI::App* paths = app.add_subcommand("paths", "Compare paths of E and of the ultragraph between two vertices");
    input(paths);
    window(paths);
    format(paths, {"text", "json"});
    paths->add_option("--from", o.from, "Source vertex index")->check(CLI::PositiveNumber);
    paths->add_option("--to", o.to, "Target vertex index")->check(CLI::PositiveNumber);
    paths->add_option("-k,--max-eps", o.max_eps, "Eps edges per path");

    CLI::App* check_k = app.add_subcommand("check-k", "Condition (K) for the ultragraph and for E");
    input(check_k);
    window(check_k);
    format(check_k, {"text", "json"});

    CLI::App* sigma = app.add_subcommand("sigma", "sigma(v_m) for m <= M");
    input(sigma);
    window(sigma);
    format(sigma, {"text", "json"});

    CLI::App* xsets = app.add_subcommand("xsets", "X(n) for n <= N");
    input(xsets);
    window(xsets);
    format(xsets, {"text", "json"});

    CLI::App* ideals = app.add_subcommand("ideals", "Admissible pairs and the ideal correspondence (finite instances)");
    ideals->add_option("action", o.action, "enumerate | correspond")->required()->check(CLI::IsMember({"enumerate", "correspond"}));
    input(ideals);
    format(ideals, {"text", "json"});

    CLI::App* quotient = app.add_subcommand("quotient", "The quotient graph E_I of a finite instance");
    input(quotient);
    format(quotient, {"text", "json", "dot"});
    quotient->add_option("-o,--output", o.output, "Write the graph to a file");
    quotient->add_option("--H", o.h, "Vertices whose singletons generate the ideal")->delimiter(',');
    quotient->add_option("--V", o.v, "Breaking vertices")->delimiter(',');

    CLI::App* import = app.add_subcommand("import-matrix", "Ultragraph of a {0,1}-matrix, printed in the input language");
    input(import);
    import->add_option("-o,--output", o.output, "Write the ultragraph description to a file");

    CLI::App* fuzz_cmd = app.add_subcommand("fuzz", "Run every check on random finite instances");
    format(fuzz_cmd, {"text", "json"});
    fuzz_cmd->add_option("--seed", o.seed, "Random seed");
    fuzz_cmd->add_option("--count", o.count, "Number of instances");
    fuzz_cmd->add_option("--max-eps", o.fuzz_max_eps, "Eps edges per path in the bijection check");
    fuzz_cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    fuzz_cmd->add_option("-o,--output", o.output, "Write the summary to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*build) return cmd_build(o, out);
        if (*verify) return cmd_verify(o, out);
        if (*demo) return cmd_demo(o, out);
        if (*paths) return cmd_paths(o, out);
        if (*check_k) return cmd_check_k(o, out);
        if (*sigma) return cmd_sigma(o, out);
        if (*xsets) return cmd_xsets(o, out);
        if (*ideals) return cmd_ideals(o, out);
        if (*quotient) return cmd_quotient(o, out);
        if (*import) return cmd_import_matrix(o, out);
        if (*fuzz_cmd) return cmd_fuzz(o, out);
    } catch (const SyntaxError& e) {
        err << o.input << ":" << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace ugraph::cli
