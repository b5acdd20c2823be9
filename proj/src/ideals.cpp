#include "ugraph/ideals.hpp"

#include "ugraph/errors.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <regex>
#include <sstream>

namespace ugraph {

namespace {

VertexMask bit(std::int64_t m) { return VertexMask{1} << (m - 1); }

VertexMask upset_mask(const UPSet& s, std::int64_t universe) {
    VertexMask out = 0;
    for (std::int64_t m = 1; m <= universe; ++m) {
        if (s.contains(m)) out |= bit(m);
    }
    return out;
}

std::int64_t finite_universe(const Ultragraph& g) {
    auto size = g.universe_size();
    auto count = g.edge_count();
    if (!size || !count) throw InfiniteUniverse("the set algebra is enumerated for finite instances only");
    if (*size > kMaxAlgebraVertices) {
        throw ValidationError("set algebra enumeration supports at most " + std::to_string(kMaxAlgebraVertices) +
                              " vertices");
    }
    return *size;
}

std::vector<EdgeId> out_edges(const Ultragraph& g, VertexId v) {
    return g.edges_from(v, *g.edge_count());
}

}  // namespace

std::string mask_to_string(VertexMask m) {
    std::string out = "{";
    for (std::int64_t i = 1; m != 0; ++i, m >>= 1) {
        if (m & 1) out += (out.size() > 1 ? "," : "") + VertexId(i).to_string();
    }
    return out + "}";
}

UPSet mask_to_upset(VertexMask m) {
    std::vector<std::int64_t> members;
    for (std::int64_t i = 1; m != 0; ++i, m >>= 1) {
        if (m & 1) members.push_back(i);
    }
    return UPSet::from_members(members);
}

bool SetAlgebra::contains(VertexMask m) const { return std::binary_search(members.begin(), members.end(), m); }

std::vector<VertexMask> SetAlgebra::atoms() const {
    std::vector<VertexMask> out;
    for (VertexMask a : members) {
        if (a == 0) continue;
        bool minimal = std::none_of(members.begin(), members.end(),
                                    [&](VertexMask b) { return b != 0 && b != a && (b & ~a) == 0; });
        if (minimal) out.push_back(a);
    }
    return out;
}

SetAlgebra g0_algebra(const Ultragraph& g) {
    const std::int64_t n = finite_universe(g);
    std::set<VertexMask> closed{0};
    std::vector<VertexMask> work;
    auto add = [&](VertexMask m) {
        if (closed.insert(m).second) work.push_back(m);
    };
    for (std::int64_t m = 1; m <= n; ++m) add(bit(m));
    for (std::int64_t e = 1; e <= *g.edge_count(); ++e) add(upset_mask(g.range(EdgeId(e)), n));
    while (!work.empty()) {
        VertexMask a = work.back();
        work.pop_back();
        std::vector<VertexMask> snapshot(closed.begin(), closed.end());
        for (VertexMask b : snapshot) {
            add(a | b);
            add(a & b);
            add(a & ~b);
            add(b & ~a);
        }
    }
    return SetAlgebra{n, std::vector<VertexMask>(closed.begin(), closed.end())};
}

VertexMask AdmissiblePair::support() const {
    VertexMask out = 0;
    for (VertexMask m : ideal) out |= m;
    return out;
}

bool AdmissiblePair::contains(VertexMask m) const { return std::binary_search(ideal.begin(), ideal.end(), m); }

std::string AdmissiblePair::to_string() const {
    std::string out = "(H generated by " + mask_to_string(support()) + ", V = {";
    for (std::size_t i = 0; i < breaking.size(); ++i) out += (i ? "," : "") + breaking[i].to_string();
    return out + "})";
}

std::vector<VertexId> fin_infinity(const Ultragraph& g, const AdmissiblePair& p) {
    const std::int64_t n = finite_universe(g);
    std::vector<VertexId> out;
    for (std::int64_t v = 1; v <= n; ++v) {
        // Every vertex of a finite listing has finite out-degree, so the
        // |s^{-1}(v)| = ∞ clause fails before the count is looked at.
        if (g.out_degree(VertexId(v))) continue;
        std::size_t outside = 0;
        for (EdgeId e : out_edges(g, VertexId(v))) outside += !p.contains(upset_mask(g.range(e), n));
        if (outside > 0) out.push_back(VertexId(v));
    }
    return out;
}

Report check_admissible(const Ultragraph& g, const SetAlgebra& algebra, const AdmissiblePair& p) {
    const std::int64_t n = algebra.universe;
    Report rep;
    std::vector<std::string> fails;
    std::size_t checked = 0;

    for (VertexMask a : p.ideal) {
        if (!algebra.contains(a)) fails.push_back(mask_to_string(a) + " is not in the algebra");
        for (VertexMask b : p.ideal) {
            ++checked;
            if (!p.contains(a | b)) fails.push_back(mask_to_string(a | b) + " (a union) is missing");
        }
        for (VertexMask b : algebra.members) {
            ++checked;
            if ((b & ~a) == 0 && !p.contains(b)) fails.push_back(mask_to_string(b) + " (a subset) is missing");
        }
    }
    if (!p.contains(0)) fails.push_back("the empty set is missing");
    rep.summarize("ideal", checked, fails);

    fails.clear();
    checked = 0;
    for (std::int64_t e = 1; e <= *g.edge_count(); ++e) {
        ++checked;
        const VertexId s = g.source(EdgeId(e));
        if (p.contains(bit(s.value)) && !p.contains(upset_mask(g.range(EdgeId(e)), n))) {
            fails.push_back(EdgeId(e).to_string() + " leaves " + s.to_string());
        }
    }
    rep.summarize("hereditary", checked, fails);

    fails.clear();
    checked = 0;
    for (std::int64_t v = 1; v <= n; ++v) {
        if (!g.is_regular(VertexId(v))) continue;
        ++checked;
        auto es = out_edges(g, VertexId(v));
        bool all_in = std::all_of(es.begin(), es.end(),
                                  [&](EdgeId e) { return p.contains(upset_mask(g.range(e), n)); });
        if (all_in && !p.contains(bit(v))) fails.push_back(VertexId(v).to_string() + " should be saturated into H");
    }
    rep.summarize("saturated", checked, fails);

    fails.clear();
    const auto fin = fin_infinity(g, p);
    for (VertexId v : p.breaking) {
        if (std::find(fin.begin(), fin.end(), v) == fin.end()) fails.push_back(v.to_string() + " is not in H^fin_inf");
    }
    rep.summarize("breaking-vertices", p.breaking.size(), fails);
    return rep;
}

std::vector<AdmissiblePair> enumerate_admissible_pairs(const Ultragraph& g) {
    const SetAlgebra algebra = g0_algebra(g);
    const auto atoms = algebra.atoms();
    std::vector<AdmissiblePair> out;
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << atoms.size()); ++pick) {
        VertexMask support = 0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if ((pick >> i) & 1) support |= atoms[i];
        }
        AdmissiblePair p;
        for (VertexMask m : algebra.members) {
            if ((m & ~support) == 0) p.ideal.push_back(m);
        }
        // V ranges over subsets of ℋ^fin_∞, which is empty for finite instances.
        if (check_admissible(g, algebra, p).all_pass()) out.push_back(std::move(p));
    }
    return out;
}

std::string GraphIdealPair::to_string() const {
    std::string out = "(H = {";
    bool first = true;
    for (const EVertex& x : h) {
        out += (first ? "" : ",") + x.to_string();
        first = false;
    }
    out += "}, B = {";
    first = true;
    for (const EVertex& x : b) {
        out += (first ? "" : ",") + x.to_string();
        first = false;
    }
    return out + "})";
}

bool is_hereditary(const BuiltGraph& e, const std::set<EVertex>& h) {
    return std::all_of(e.edges().begin(), e.edges().end(),
                       [&](const BuiltEdge& be) { return !h.count(be.source) || h.count(be.range); });
}

bool is_saturated(const BuiltGraph& e, const std::set<EVertex>& h) {
    for (const EVertex& x : e.vertices()) {
        if (h.count(x) || e.is_frontier(x)) continue;
        auto out = e.out_edges(x);
        if (out.empty()) continue;
        bool all_in = std::all_of(out.begin(), out.end(), [&](std::size_t i) { return h.count(e.edges()[i].range) != 0; });
        if (all_in) return false;
    }
    return true;
}

std::set<EVertex> graph_fin_infinity(const BuiltGraph&, const std::set<EVertex>&) {
    // Every stored vertex has a finite out-edge list, so |s_E^{-1}(x)| = ∞
    // never holds; frontier vertices are undecided and left out.
    return {};
}

std::vector<GraphIdealPair> enumerate_graph_pairs(const BuiltGraph& e) {
    const auto& vs = e.vertices();
    if (vs.size() > 20) throw ValidationError("graph pair enumeration supports at most 20 vertices");
    std::vector<GraphIdealPair> out;
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << vs.size()); ++pick) {
        std::set<EVertex> h;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if ((pick >> i) & 1) h.insert(vs[i]);
        }
        if (is_hereditary(e, h) && is_saturated(e, h)) out.push_back(GraphIdealPair{std::move(h), {}});
    }
    return out;
}

IdealTest ideal_below(UPSet s) {
    return [s = std::move(s)](const UPSet& u) { return u.is_subset_of(s); };
}

std::set<EVertex> theta(Builder& b, const IdealTest& in_ideal, std::int64_t word_depth, std::int64_t vertex_bound) {
    std::set<EVertex> out;
    if (auto n = b.graph().universe_size()) vertex_bound = std::min(vertex_bound, *n);
    for (std::int64_t v = 1; v <= vertex_bound; ++v) {
        if (in_ideal(UPSet::singleton(v))) out.insert(EVertex::vertex(VertexId(v)));
    }
    if (auto max = b.max_word_length()) word_depth = std::min(word_depth, *max);
    for (const BinaryWord& w : b.delta_up_to(word_depth)) {
        if (in_ideal(b.r_prime(w))) out.insert(EVertex::word(w));
    }
    return out;
}

CorrespondenceResult verify_ideal_correspondence(const Ultragraph& g) {
    const std::int64_t n = finite_universe(g);
    Builder b(g);
    const std::int64_t edges = *g.edge_count();
    const BuiltGraph e = build_e(b, {std::max<std::int64_t>(edges, 1), n, edges});

    const auto ultra = enumerate_admissible_pairs(g);
    const auto graph = enumerate_graph_pairs(e);
    CorrespondenceResult result;
    result.ultra_pairs = ultra.size();
    result.graph_pairs = graph.size();

    std::vector<std::string> valid_fails, fin_fails, inj_fails;
    std::set<std::set<EVertex>> images;
    std::size_t fin_checked = 0;
    for (const AdmissiblePair& p : ultra) {
        const IdealTest in_ideal = [&](const UPSet& u) { return p.contains(upset_mask(u, n)); };
        GraphIdealPair image{theta(b, in_ideal, edges, n), {}};
        for (VertexId v : p.breaking) image.b.insert(EVertex::vertex(v));
        if (!is_hereditary(e, image.h) || !is_saturated(e, image.h)) {
            valid_fails.push_back("theta of " + p.to_string() + " is not saturated hereditary");
        }
        if (std::find(graph.begin(), graph.end(), image) == graph.end()) {
            valid_fails.push_back("theta of " + p.to_string() + " is not among the graph pairs");
        }
        if (!images.insert(image.h).second) inj_fails.push_back("two pairs map to " + image.to_string());

        std::set<EVertex> ultra_fin;
        for (VertexId v : fin_infinity(g, p)) ultra_fin.insert(EVertex::vertex(v));
        ++fin_checked;
        if (ultra_fin != graph_fin_infinity(e, image.h)) fin_fails.push_back("fin_inf sets differ for " + p.to_string());
        // The counting condition behind the fin_∞ agreement, vertex by vertex.
        for (std::int64_t v = 1; v <= n; ++v) {
            ++fin_checked;
            std::size_t ultra_count = 0, graph_count = 0;
            for (EdgeId en : out_edges(g, VertexId(v))) ultra_count += !p.contains(upset_mask(g.range(en), n));
            for (std::size_t id : e.out_edges(EVertex::vertex(VertexId(v)))) graph_count += !image.h.count(e.edges()[id].range);
            if ((ultra_count > 0) != (graph_count > 0)) {
                fin_fails.push_back(VertexId(v).to_string() + " leaves H on one side only for " + p.to_string());
            }
        }
    }
    result.report.summarize("ideal-theta-valid", ultra.size(), valid_fails);
    result.report.summarize("ideal-fin-infinity", fin_checked, fin_fails);
    result.report.summarize("ideal-injective", ultra.size(), inj_fails);
    result.surjective = images.size() == graph.size();
    result.report.add(true, "ideal-surjective",
                      std::string(result.surjective ? "yes" : "no") + " (" + std::to_string(images.size()) + " of " +
                          std::to_string(graph.size()) + " graph pairs hit)");
    return result;
}

Report verify_edge_ideal_equivalence(Builder& b, const IdealTest& in_ideal, std::int64_t edges) {
    const Ultragraph& g = b.graph();
    if (auto count = g.edge_count()) edges = std::min(edges, *count);
    std::vector<std::string> fails;
    std::map<VertexId, std::pair<std::size_t, std::size_t>> leaving;
    for (std::int64_t n = 1; n <= edges; ++n) {
        const EdgeId en(n);
        bool x_inside = true;
        std::size_t outside = 0;
        for (const EVertex& x : b.x_set(en)) {
            const UPSet piece = x.is_vertex() ? UPSet::singleton(x.v.value) : b.r_prime(x.w);
            if (!in_ideal(piece)) {
                x_inside = false;
                ++outside;
            }
        }
        const bool r_inside = in_ideal(g.range(en));
        if (r_inside != x_inside) fails.push_back(en.to_string() + ": range and X-set disagree on membership");
        auto& [ultra_count, graph_count] = leaving[g.source(en)];
        ultra_count += !r_inside;
        graph_count += outside;
    }
    for (const auto& [v, counts] : leaving) {
        if ((counts.first > 0) != (counts.second > 0)) fails.push_back(v.to_string() + ": edges leaving H disagree");
    }
    Report rep;
    rep.summarize("edge-ideal-equivalence", static_cast<std::size_t>(edges), fails);
    return rep;
}

BuiltGraph quotient_graph(const BuiltGraph& e, const std::set<EVertex>& h, const std::set<EVertex>& fin_minus_v) {
    BuiltGraph q;
    q.params = e.params;
    for (const EVertex& x : e.vertices()) {
        if (!h.count(x)) q.add_vertex(x, e.is_frontier(x));
    }
    for (const EVertex& x : fin_minus_v) q.add_vertex(x.tilded(), e.is_frontier(x));
    for (const BuiltEdge& be : e.edges()) {
        if (!h.count(be.range)) q.add_edge(be);
        if (fin_minus_v.count(be.range)) {
            BuiltEdge copy = be;
            copy.label.tilde = true;
            copy.range = be.range.tilded();
            q.add_edge(std::move(copy));
        }
    }
    q.normalize();
    return q;
}

Ultragraph matrix_to_ultragraph(std::string_view text) {
    std::vector<std::string> lines;
    {
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            line.erase(0, line.find_first_not_of(" \t\r"));
            line.erase(line.find_last_not_of(" \t\r") + 1);
            if (!line.empty()) lines.push_back(line);
        }
    }
    if (lines.empty()) throw ValidationError("empty matrix");

    if (lines.front().rfind("row", 0) != 0) {
        std::vector<std::vector<bool>> rows;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            std::vector<bool> row;
            for (std::size_t j = 0; j < lines[i].size(); ++j) {
                char c = lines[i][j];
                if (c == '0' || c == '1') {
                    row.push_back(c == '1');
                } else if (c != ' ' && c != '\t' && c != ',') {
                    throw SyntaxError(std::string("unexpected character '") + c + "' in matrix row", i + 1, j + 1);
                }
            }
            rows.push_back(std::move(row));
        }
        const std::int64_t size = static_cast<std::int64_t>(rows.size());
        std::vector<Ultragraph::Edge> edges;
        for (std::int64_t i = 0; i < size; ++i) {
            if (static_cast<std::int64_t>(rows[i].size()) != size) {
                throw ValidationError("matrix row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                                      " entries, expected " + std::to_string(size));
            }
            std::vector<std::int64_t> members;
            for (std::int64_t j = 0; j < size; ++j) {
                if (rows[i][j]) members.push_back(j + 1);
            }
            if (members.empty()) throw ZeroRow("matrix row " + std::to_string(i + 1) + " is zero");
            edges.push_back({VertexId(i + 1), UPSet::from_members(members)});
        }
        return Ultragraph::finite(size, std::move(edges));
    }

    static const std::regex row_re(R"(row\s+(i|\d+)\s*:\s*(.+))");
    std::smatch m;
    if (lines.size() == 1 && std::regex_match(lines[0], m, row_re) && m[1] == "i") {
        static const std::regex param(R"(\bi\b)");
        const std::string range = std::regex_replace(m[2].str(), param, "k");
        const std::string spec = "ultragraph matrix {\n  vertices: infinite;\n  edges:\n    family k in 1.. : e[k] { s: v[k], r: " +
                                 range + " }\n}\n";
        try {
            return Ultragraph::from_spec(dsl::parse(spec));
        } catch (const EmptyRangeError& err) {
            throw ZeroRow(std::string("schematic matrix has a zero row: ") + err.what());
        }
    }
    std::map<std::int64_t, std::string> rows;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!std::regex_match(lines[i], m, row_re) || m[1] == "i") {
            throw SyntaxError("expected 'row <n>: <range>'", i + 1, 1);
        }
        rows[std::stoll(m[1].str())] = m[2].str();
    }
    const std::int64_t size = static_cast<std::int64_t>(rows.size());
    if (rows.begin()->first != 1 || rows.rbegin()->first != size) throw ValidationError("matrix rows must be numbered 1..n");
    std::string spec = "v: " + std::to_string(size) + ";";
    for (const auto& [i, range] : rows) spec += " e" + std::to_string(i) + ": s=" + std::to_string(i) + ", r=" + range + ";";
    try {
        return Ultragraph::from_spec(dsl::parse(spec));
    } catch (const EmptyRangeError& err) {
        throw ZeroRow(std::string("matrix has a zero row: ") + err.what());
    }
}

}  // namespace ugraph
