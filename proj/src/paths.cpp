#include "ugraph/paths.hpp"

#include "ugraph/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ugraph {

namespace {

std::int64_t len(const BinaryWord& w) { return static_cast<std::int64_t>(w.length()); }

}  // namespace

EVertex e_source(Builder& b, const EEdge& e) {
    if (e.is_eps()) return EVertex::vertex(b.graph().source(e.n));
    if (e.x.is_vertex()) return EVertex::word(b.sigma(e.x.v));
    return EVertex::word(e.x.w.parent());
}

// ---------------------------------------------------------------------------
// EPath
// ---------------------------------------------------------------------------

std::size_t EPath::eps_count() const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [](const EEdge& e) { return e.is_eps(); }));
}

std::int64_t EPath::max_edge_index() const {
    std::int64_t m = 0;
    for (const EEdge& e : edges) {
        if (e.is_eps()) m = std::max(m, e.n.value);
    }
    return m;
}

EPath EPath::then(const EPath& other) const {
    if (!(end() == other.base)) throw std::logic_error("paths do not compose: " + to_string() + " then " + other.to_string());
    EPath out = *this;
    out.edges.insert(out.edges.end(), other.edges.begin(), other.edges.end());
    return out;
}

std::string EPath::to_string() const {
    if (edges.empty()) return base.to_string();
    std::string out;
    for (const EEdge& e : edges) out += (out.empty() ? "" : ".") + e.to_string();
    return out;
}

bool composable(Builder& b, const EPath& p) {
    EVertex at = p.base;
    for (const EEdge& e : p.edges) {
        if (!(e_source(b, e) == at)) return false;
        at = e.x;
    }
    return true;
}

EPath f_path(Builder& b, const EVertex& x) {
    if (x.is_vertex()) {
        BinaryWord s = b.sigma(x.v);
        if (s.is_empty()) return EPath{x, {}};
        EPath p = f_path(b, EVertex::word(s));
        p.edges.push_back(EEdge::bar(x));
        return p;
    }
    const BinaryWord& w = x.w;
    const std::size_t root = w.str().find('1') + 1;  // length of the Γ₀ prefix
    EPath p{EVertex::word(w.restrict_to(root)), {}};
    for (std::size_t j = root + 1; j <= w.length(); ++j) p.edges.push_back(EEdge::bar(EVertex::word(w.restrict_to(j))));
    return p;
}

Factorization factorize(const EPath& p) {
    Factorization f;
    EPath block{p.base, {}};
    for (const EEdge& e : p.edges) {
        if (e.is_bar()) {
            block.edges.push_back(e);
            continue;
        }
        f.blocks.push_back(std::move(block));
        f.eps.emplace_back(e.n, e.x);
        block = EPath{e.x, {}};
    }
    f.blocks.push_back(std::move(block));
    return f;
}

EPath recompose(const Factorization& f) {
    EPath out = f.blocks.at(0);
    for (std::size_t i = 0; i < f.eps.size(); ++i) {
        out.edges.push_back(EEdge::eps(f.eps[i].first, f.eps[i].second));
        const EPath& g = f.blocks.at(i + 1);
        out.edges.insert(out.edges.end(), g.edges.begin(), g.edges.end());
    }
    return out;
}

UltraPath path_image(const EPath& p) {
    UltraPath out;
    for (const EEdge& e : p.edges) {
        if (e.is_eps()) out.push_back(e.n);
    }
    return out;
}

EPath path_preimage(Builder& b, VertexId v, const UltraPath& u, VertexId w) {
    EPath out{EVertex::vertex(v), {}};
    for (std::size_t i = 0; i < u.size(); ++i) {
        const std::int64_t n = u[i].value;
        const VertexId t = i + 1 < u.size() ? b.graph().source(u[i + 1]) : w;
        const BinaryWord s = b.sigma(t);
        if (len(s) < n) {
            out.edges.push_back(EEdge::eps(u[i], EVertex::vertex(t)));
            continue;
        }
        out.edges.push_back(EEdge::eps(u[i], EVertex::word(s.restrict_to(static_cast<std::size_t>(n)))));
        for (std::int64_t j = n + 1; j <= len(s); ++j) {
            out.edges.push_back(EEdge::bar(EVertex::word(s.restrict_to(static_cast<std::size_t>(j)))));
        }
        out.edges.push_back(EEdge::bar(EVertex::vertex(t)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Path bijection
// ---------------------------------------------------------------------------

namespace {

std::string ultra_to_string(const UltraPath& u) {
    if (u.empty()) return "(trivial)";
    std::string out;
    for (EdgeId e : u) out += (out.empty() ? "" : ".") + e.to_string();
    return out;
}

bool path_in_window(const BuiltGraph& e, const EPath& p) {
    if (!e.contains(p.base)) return false;
    EVertex at = p.base;
    for (const EEdge& edge : p.edges) {
        auto id = e.find_edge(edge);
        if (!id || !(e.edges()[*id].source == at)) return false;
        at = edge.x;
    }
    return true;
}

}  // namespace

BijectionResult verify_path_bijection(Builder& b, const BuiltGraph& e, VertexId v, VertexId w, std::size_t max_eps) {
    const Ultragraph& g = b.graph();
    const EVertex ev = EVertex::vertex(v), ew = EVertex::vertex(w);
    if (!e.contains(ev) || !e.contains(ew)) {
        throw HorizonTooSmall("the window does not contain " + v.to_string() + " and " + w.to_string());
    }
    std::int64_t M = e.params.vertex_horizon, N = e.params.edge_horizon;
    if (auto size = g.universe_size()) M = std::min(M, *size);
    if (auto count = g.edge_count()) N = std::min(N, *count);

    // E-paths v -> w inside the window.
    std::vector<EPath> e_paths;
    {
        EPath cur{ev, {}};
        std::function<void(std::size_t)> dfs = [&](std::size_t eps_used) {
            if (cur.end() == ew) e_paths.push_back(cur);
            for (std::size_t id : e.out_edges(cur.end())) {
                const EEdge& label = e.edges()[id].label;
                if (label.is_eps() && eps_used == max_eps) continue;
                cur.edges.push_back(label);
                dfs(eps_used + (label.is_eps() ? 1 : 0));
                cur.edges.pop_back();
            }
        };
        dfs(0);
    }

    // Ultragraph paths from v with w in the last range.
    std::vector<UltraPath> g_paths;
    {
        if (v == w) g_paths.emplace_back();
        UltraPath cur;
        std::function<void(VertexId)> dfs = [&](VertexId at) {
            for (EdgeId n : g.edges_from(at, N)) {
                cur.push_back(n);
                const UPSet& r = g.range(n);
                if (r.contains(w.value)) g_paths.push_back(cur);
                if (cur.size() < max_eps) {
                    for (std::int64_t t = 1; t <= M; ++t) {
                        if (r.contains(t)) dfs(VertexId(t));
                    }
                }
                cur.pop_back();
            }
        };
        if (max_eps > 0) dfs(v);
    }

    BijectionResult result;
    result.e_paths = e_paths.size();
    result.g_paths = g_paths.size();
    std::vector<std::string> fails;
    const std::string where = v.to_string() + "->" + w.to_string() + " k<=" + std::to_string(max_eps);

    std::map<UltraPath, const EPath*> images;
    for (const EPath& p : e_paths) {
        UltraPath u = path_image(p);
        bool valid = u.empty() ? v == w : g.source(u.front()) == v && g.range(u.back()).contains(w.value);
        for (std::size_t i = 0; valid && i + 1 < u.size(); ++i) valid = g.range(u[i]).contains(g.source(u[i + 1]).value);
        if (!valid) fails.push_back(where + ": image of " + p.to_string() + " is not an ultragraph path");
        if (!images.emplace(u, &p).second) fails.push_back(where + ": two E-paths map to " + ultra_to_string(u));
        if (!(recompose(factorize(p)) == p)) fails.push_back(where + ": factorization of " + p.to_string() + " does not recompose");
    }
    for (const UltraPath& u : g_paths) {
        EPath pre = path_preimage(b, v, u, w);
        if (!(path_image(pre) == u)) fails.push_back(where + ": preimage of " + ultra_to_string(u) + " maps elsewhere");
        if (!path_in_window(e, pre)) {
            throw HorizonTooSmall("the E-path " + pre.to_string() + " over " + ultra_to_string(u) + " leaves the window");
        }
        auto it = images.find(u);
        if (it == images.end()) {
            fails.push_back(where + ": no E-path maps to " + ultra_to_string(u));
        } else if (!(*it->second == pre)) {
            fails.push_back(where + ": E-path over " + ultra_to_string(u) + " differs from the constructed preimage");
        }
    }
    if (e_paths.size() != g_paths.size()) {
        fails.push_back(where + ": " + std::to_string(e_paths.size()) + " E-paths vs " + std::to_string(g_paths.size()) +
                        " ultragraph paths");
    }
    result.report.summarize("path-bijection", e_paths.size() + g_paths.size(), fails);
    result.report.checks.back().witness += " " + where;
    return result;
}

Report verify_f_structure(Builder& b, const BuiltGraph& e) {
    std::vector<std::string> fails;
    std::size_t checked = 0;
    std::map<EVertex, std::vector<EVertex>> children;
    std::map<EVertex, int> bar_in;
    for (const BuiltEdge& be : e.edges()) {
        if (be.label.is_bar()) {
            children[be.source].push_back(be.range);
            ++bar_in[be.range];
        } else if (be.source.is_word()) {
            fails.push_back("eps edge " + be.label.to_string() + " leaves a word");
        }
    }
    for (const auto& [x, k] : bar_in) {
        ++checked;
        if (k > 1) fails.push_back(x.to_string() + " receives " + std::to_string(k) + " bar edges");
    }
    std::int64_t D = e.params.word_depth;
    if (auto max = b.max_word_length()) D = std::min(D, *max);

    for (const EVertex& x : e.vertices()) {
        if (!x.is_word() || x.tilde) continue;
        std::set<EVertex> reach;
        std::vector<EVertex> stack{x};
        while (!stack.empty()) {
            EVertex y = stack.back();
            stack.pop_back();
            for (const EVertex& c : children[y]) {
                if (c == x) fails.push_back("F has a return path at " + x.to_string());
                if (reach.insert(c).second) stack.push_back(c);
            }
        }
        UPSet rp = b.r_prime(x.w);
        for (const EVertex& y : e.vertices()) {
            if (y.tilde || y == x) continue;
            ++checked;
            bool expected = y.is_word() ? x.w.is_prefix_of(y.w)
                                        : rp.contains(y.v.value) && len(b.sigma(y.v)) <= D;
            if ((reach.count(y) != 0) != expected) {
                fails.push_back("F-reachability " + x.to_string() + " -> " + y.to_string() + " is " +
                                (expected ? "missing" : "unexpected"));
            }
        }
    }
    Report rep;
    rep.summarize("f-structure", checked, fails);
    return rep;
}

// ---------------------------------------------------------------------------
// Multigraphs and Condition (K)
// ---------------------------------------------------------------------------

std::size_t Multigraph::add_node(std::string name, bool is_frontier) {
    names.push_back(std::move(name));
    frontier.push_back(is_frontier);
    return names.size() - 1;
}

void Multigraph::add_arc(std::size_t from, std::size_t to, std::string label) {
    arcs.push_back(Arc{from, to, std::move(label)});
}

std::vector<std::vector<std::size_t>> Multigraph::out_lists() const {
    std::vector<std::vector<std::size_t>> out(names.size());
    for (std::size_t i = 0; i < arcs.size(); ++i) out[arcs[i].from].push_back(i);
    return out;
}

std::optional<std::size_t> Multigraph::find(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

Multigraph ultragraph_multigraph(const Ultragraph& g) {
    auto size = g.universe_size();
    auto count = g.edge_count();
    if (!size || !count) throw InfiniteUniverse("first-return analysis needs finitely many vertices and edges");
    Multigraph mg;
    for (std::int64_t m = 1; m <= *size; ++m) mg.add_node(VertexId(m).to_string());
    for (std::int64_t n = 1; n <= *count; ++n) {
        std::size_t from = static_cast<std::size_t>(g.source(EdgeId(n)).value - 1);
        for (auto m : g.range(EdgeId(n)).members()) mg.add_arc(from, static_cast<std::size_t>(m - 1), EdgeId(n).to_string());
    }
    return mg;
}

Multigraph built_multigraph(const BuiltGraph& e) {
    Multigraph mg;
    std::map<EVertex, std::size_t> id;
    for (const EVertex& x : e.vertices()) id[x] = mg.add_node(x.to_string(), e.is_frontier(x));
    for (const BuiltEdge& be : e.edges()) mg.add_arc(id.at(be.source), id.at(be.range), be.label.to_string());
    return mg;
}

std::string ReturnCount::to_string() const {
    switch (kind) {
        case Kind::Zero: return "0";
        case Kind::One: return "1";
        case Kind::AtLeastTwo: return "AtLeast(2)";
        case Kind::Unknown: return "UnknownAtCap";
    }
    return "?";
}

namespace {

ReturnCount from_count(std::size_t c) {
    if (c == 0) return {ReturnCount::Kind::Zero};
    if (c == 1) return {ReturnCount::Kind::One};
    return {ReturnCount::Kind::AtLeastTwo};
}

/// Nodes other than `base` that can reach `base` without passing through it.
std::vector<bool> co_reachable(const Multigraph& g, std::size_t base) {
    std::vector<std::vector<std::size_t>> in(g.names.size());
    for (const auto& a : g.arcs) in[a.to].push_back(a.from);
    std::vector<bool> seen(g.names.size(), false);
    std::vector<std::size_t> stack{base};
    while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        for (std::size_t y : in[x]) {
            if (y != base && !seen[y]) {
                seen[y] = true;
                stack.push_back(y);
            }
        }
    }
    return seen;
}

}  // namespace

ReturnCount first_return_count(const Multigraph& g, std::size_t base) {
    const std::size_t n = g.names.size();
    const auto out = g.out_lists();
    // Forward: nodes reachable from base whose intermediate stops avoid base.
    std::vector<bool> fwd(n, false);
    std::vector<std::size_t> stack{base};
    while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        for (std::size_t a : out[x]) {
            std::size_t y = g.arcs[a].to;
            if (y != base && !fwd[y]) {
                fwd[y] = true;
                stack.push_back(y);
            }
        }
    }
    const std::vector<bool> bwd = co_reachable(g, base);
    std::vector<bool> core(n);
    for (std::size_t x = 0; x < n; ++x) core[x] = fwd[x] && bwd[x];

    bool truncated = g.frontier[base];
    for (std::size_t x = 0; x < n; ++x) truncated = truncated || (fwd[x] && g.frontier[x]);

    // A cycle inside the core yields infinitely many first-return paths.
    std::vector<int> color(n, 0);
    std::vector<std::size_t> order;
    bool cyclic = false;
    std::function<void(std::size_t)> visit = [&](std::size_t x) {
        color[x] = 1;
        for (std::size_t a : out[x]) {
            std::size_t y = g.arcs[a].to;
            if (!core[y]) continue;
            if (color[y] == 1) cyclic = true;
            if (color[y] == 0) visit(y);
        }
        color[x] = 2;
        order.push_back(x);
    };
    for (std::size_t x = 0; x < n; ++x) {
        if (core[x] && color[x] == 0) visit(x);
    }
    if (cyclic) return {ReturnCount::Kind::AtLeastTwo};

    std::vector<std::size_t> ways(n, 0);
    auto add = [](std::size_t a, std::size_t b) { return std::min<std::size_t>(a + b, 2); };
    for (std::size_t a : out[base]) {
        if (core[g.arcs[a].to]) ways[g.arcs[a].to] = add(ways[g.arcs[a].to], 1);
    }
    std::size_t total = 0;
    for (std::size_t a : out[base]) {
        if (g.arcs[a].to == base) total = add(total, 1);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        std::size_t x = *it;
        for (std::size_t a : out[x]) {
            std::size_t y = g.arcs[a].to;
            if (y == base) {
                total = add(total, ways[x]);
            } else if (core[y]) {
                ways[y] = add(ways[y], ways[x]);
            }
        }
    }
    ReturnCount c = from_count(total);
    if (truncated && c.kind != ReturnCount::Kind::AtLeastTwo) return {ReturnCount::Kind::Unknown};
    return c;
}

ReturnCount first_return_count_enumerated(const Multigraph& g, std::size_t base, std::size_t max_len) {
    const auto out = g.out_lists();
    const std::vector<bool> bwd = co_reachable(g, base);
    std::size_t found = 0;
    std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t x, std::size_t depth) {
        if (found >= 2 || depth == max_len) return;
        for (std::size_t a : out[x]) {
            if (found >= 2) return;
            std::size_t y = g.arcs[a].to;
            if (y == base) {
                ++found;
            } else if (bwd[y]) {
                dfs(y, depth + 1);
            }
        }
    };
    dfs(base, 0);
    return from_count(found);
}

std::string ConditionK::to_string() const {
    switch (kind) {
        case Kind::Holds: return "Holds";
        case Kind::Fails: return "Fails(" + witness + ")";
        case Kind::UnknownTruncated: return "UnknownTruncated";
    }
    return "?";
}

ConditionK condition_k(const Multigraph& g) {
    bool unknown = false;
    for (std::size_t x = 0; x < g.names.size(); ++x) {
        ReturnCount c = first_return_count(g, x);
        if (c.kind == ReturnCount::Kind::One) return {ConditionK::Kind::Fails, g.names[x]};
        if (c.kind == ReturnCount::Kind::Unknown) unknown = true;
    }
    return {unknown ? ConditionK::Kind::UnknownTruncated : ConditionK::Kind::Holds, ""};
}

}  // namespace ugraph
