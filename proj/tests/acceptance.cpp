// Acceptance suite: one PASS/FAIL line per criterion; exit status 0 iff all pass.

#include "support/fig1_oracle.hpp"
#include "ugraph/builder.hpp"
#include "ugraph/cli.hpp"
#include "ugraph/generate.hpp"
#include "ugraph/ideals.hpp"
#include "ugraph/paths.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

using namespace ugraph;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

Ultragraph fig1_graph() {
    std::ifstream in(std::string(UGRAPH_DATA_DIR) + "/example_fig1.ug");
    std::stringstream ss;
    ss << in.rdbuf();
    return Ultragraph::from_spec(dsl::parse(ss.str()));
}

template <class T>
std::string join(const std::vector<T>& xs) {
    std::ostringstream os;
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i];
    return os.str();
}

Outcome mismatch(const std::string& what, const std::string& expected, const std::string& got) {
    return {false, what + ": expected {" + expected + "}, got {" + got + "}"};
}

// Values as displayed in the worked example.

Outcome gamma0() {
    Builder b(fig1_graph());
    std::vector<std::string> got;
    for (const BinaryWord& w : b.gamma0_up_to(29)) got.push_back(w.compact());
    const std::vector<std::string> expected{"1", "001", "00001", "0^{8}1", "0^{16}1", "0^{20}1", "0^{28}1"};
    if (got != expected) return mismatch("Gamma0", join(expected), join(got));
    return {true, "7 words up to length 29"};
}

Outcome w0() {
    Builder b(fig1_graph());
    std::vector<std::int64_t> got;
    for (std::int64_t m = 1; got.size() < 10; ++m) {
        if (!b.classify(VertexId(m)).w_plus) got.push_back(m);
    }
    const std::vector<std::int64_t> expected{1, 2, 7, 11, 13, 14, 17, 19, 22, 23};
    if (got != expected) return mismatch("W0", join(expected), join(got));
    return {true, "first ten indices"};
}

Outcome sigma_table() {
    Builder b(fig1_graph());
    const std::vector<std::pair<std::int64_t, std::string>> table = {
        {4, "001"},   {8, "001"},      {12, "101"},   {16, "0010"},      {20, "00101"}, {3, "100"},
        {5, "00001"}, {6, "10000"},    {9, "10000"},  {10, "0000100"},   {15, "1000100"}, {18, "100000100"},
        {1, ""},      {2, ""},         {7, ""},       {11, ""},          {13, ""},     {14, ""},
        {17, ""},     {19, ""}};
    for (const auto& [m, s] : table) {
        std::string got = b.sigma(VertexId(m)).str();
        if (got != s) return {false, "sigma(v" + std::to_string(m) + ") = '" + got + "', expected '" + s + "'"};
    }
    return {true, std::to_string(table.size()) + " values"};
}

Outcome x_sets() {
    Builder b(fig1_graph());
    const std::vector<std::string> expected = {
        "1",
        "v1",
        "001, 101",
        "v1, v2, v3",
        "00001, 00101, 10001, 10101",
        "v1, v2, v3, v5, v6, v7, v9",
        "v6, v12, v24, 1000001, 1000101, 1010001, 1010101",
        "v1, v2, v3, v5, v6, v7, v9, v10, v11, v13, v14, v15"};
    for (std::int64_t n = 1; n <= 8; ++n) {
        std::vector<std::string> got;
        for (const EVertex& x : b.x_set(EdgeId(n))) got.push_back(x.to_string());
        if (join(got) != expected[n - 1]) return mismatch("X(" + std::to_string(n) + ")", expected[n - 1], join(got));
    }
    return {true, "X(1)..X(8)"};
}

Outcome delta_characterization() {
    Builder b(fig1_graph());
    std::size_t compared = 0;
    for (std::size_t n = 1; n <= 7; ++n) {
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            std::string bits;
            for (std::size_t i = 0; i < n; ++i) bits += (mask >> i) & 1 ? '1' : '0';
            ++compared;
            if (b.in_delta(BinaryWord(bits)) != fig1::in_delta(bits)) return {false, "disagreement on " + bits};
        }
    }
    return {true, std::to_string(compared) + " words of length <= 7"};
}

// Random finite instances shared by the identity, path and Condition (K) criteria.

std::vector<Ultragraph> finite_instances(std::uint64_t seed, std::size_t count, int max_vertices, int max_edges) {
    std::vector<Ultragraph> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(cli::fuzz_instance(seed, i, max_vertices, max_edges));
    return out;
}

struct Finite {
    Ultragraph g;
    std::unique_ptr<Builder> b;
    BuiltGraph e;
};

Finite prepare(const Ultragraph& g) {
    Finite f{g, std::make_unique<Builder>(g), {}};
    const std::int64_t edges = *g.edge_count();
    f.e = build_e(*f.b, {std::max<std::int64_t>(edges, 1), *g.universe_size(), edges});
    return f;
}

Outcome first_failure(const Report& rep, const std::string& where) {
    for (const Check& c : rep.checks) {
        if (!c.pass) return {false, where + ": " + c.identity + " " + c.witness};
    }
    return {};
}

Outcome identity_suite(const std::vector<Ultragraph>& instances) {
    {
        Builder b(fig1_graph());
        Report rep = verify_set_identities(b, 7, 60);
        rep.append(check_regular(b, build_e(b, {7, 8, 8})));
        if (Outcome o = first_failure(rep, "example"); !o.pass) return o;
    }
    for (std::size_t i = 0; i < instances.size(); ++i) {
        Finite f = prepare(instances[i]);
        Report rep = verify_set_identities(*f.b, 7, *f.g.universe_size());
        rep.append(check_regular(*f.b, f.e));
        if (Outcome o = first_failure(rep, "case " + std::to_string(i) + " " + cli::to_compact_dsl(f.g)); !o.pass) return o;
    }
    return {true, "example at depth 7 and " + std::to_string(instances.size()) + " random instances"};
}

Outcome path_bijection(const std::vector<Ultragraph>& instances) {
    std::size_t paths = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        Finite f = prepare(instances[i]);
        const std::int64_t n = *f.g.universe_size();
        for (std::int64_t v = 1; v <= n; ++v) {
            for (std::int64_t w = 1; w <= n; ++w) {
                BijectionResult r = verify_path_bijection(*f.b, f.e, VertexId(v), VertexId(w), 3);
                if (r.e_paths != r.g_paths) {
                    return {false, "case " + std::to_string(i) + ": " + std::to_string(r.e_paths) + " E-paths vs " +
                                       std::to_string(r.g_paths) + " ultragraph paths"};
                }
                if (Outcome o = first_failure(r.report, "case " + std::to_string(i)); !o.pass) return o;
                paths += r.g_paths;
            }
        }
    }
    return {true, std::to_string(paths) + " paths matched over " + std::to_string(instances.size()) + " instances"};
}

Outcome condition_k_equivalence(const std::vector<Ultragraph>& instances) {
    std::size_t holds = 0, nodes = 0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        Finite f = prepare(instances[i]);
        const Multigraph mg = ultragraph_multigraph(f.g), me = built_multigraph(f.e);
        const ConditionK kg = condition_k(mg), ke = condition_k(me);
        if (kg.kind != ke.kind) return {false, "case " + std::to_string(i) + ": G " + kg.to_string() + ", E " + ke.to_string()};
        holds += kg.kind == ConditionK::Kind::Holds;
        for (const Multigraph* m : {&mg, &me}) {
            const std::size_t cap = m->names.size() * (m->arcs.size() + 1) + 1;
            for (std::size_t x = 0; x < m->names.size(); ++x, ++nodes) {
                if (!(first_return_count(*m, x) == first_return_count_enumerated(*m, x, cap))) {
                    return {false, "case " + std::to_string(i) + ": first-return count at " + m->names[x]};
                }
            }
        }
    }
    return {true, std::to_string(holds) + " of " + std::to_string(instances.size()) + " satisfy (K); " +
                      std::to_string(nodes) + " first-return counts cross-checked"};
}

Outcome ideal_correspondence() {
    CorrespondenceResult two = verify_ideal_correspondence(Ultragraph::finite(2, {{VertexId(1), UPSet::singleton(2)}}));
    if (two.ultra_pairs != 2 || two.graph_pairs != 2 || !two.report.all_pass()) {
        return {false, "two-vertex instance: " + std::to_string(two.ultra_pairs) + " vs " + std::to_string(two.graph_pairs)};
    }
    std::size_t surjective = 0;
    const auto instances = finite_instances(9, 100, 4, 3);
    for (std::size_t i = 0; i < instances.size(); ++i) {
        CorrespondenceResult r = verify_ideal_correspondence(instances[i]);
        if (Outcome o = first_failure(r.report, "case " + std::to_string(i)); !o.pass) return o;
        surjective += r.surjective;
    }
    return {true, "two-vertex 2 <-> 2; 100 random instances valid and injective, surjective on " +
                      std::to_string(surjective)};
}

Outcome degeneracy() {
    std::mt19937_64 rng(50);
    for (int i = 0; i < 50; ++i) {
        Ultragraph g = random_finite(rng, 5, 4);
        Finite f = prepare(g);
        const BuildParams p = f.e.params;
        if (!(f.e == edge_split_graph(g, p))) return {false, "build_e differs from the edge-split graph for " + cli::to_compact_dsl(g)};
        if (!(quotient_graph(f.e, {}, {}) == f.e)) return {false, "trivial quotient differs for " + cli::to_compact_dsl(g)};
    }
    return {true, "50 instances"};
}

// Random expressions over ultimately periodic sets, checked against plain bit vectors.

struct Leaf {
    std::int64_t threshold, period;
    std::vector<std::int64_t> transient, residues;

    bool contains(std::int64_t m) const {
        if (m <= threshold) return std::find(transient.begin(), transient.end(), m) != transient.end();
        return std::find(residues.begin(), residues.end(), m % period) != residues.end();
    }
};

struct Expr {
    char op = 'L';  // L(eaf), u(nion), i(ntersection), d(ifference), c(omplement)
    Leaf leaf;
    std::unique_ptr<Expr> a, b;
};

std::unique_ptr<Expr> random_expr(std::mt19937_64& rng, int depth) {
    auto e = std::make_unique<Expr>();
    std::uniform_int_distribution<int> pick(0, 4);
    int k = depth == 0 ? 0 : pick(rng);
    if (k == 0) {
        std::uniform_int_distribution<std::int64_t> t(0, 10), p(1, 8);
        std::bernoulli_distribution coin(0.4);
        Leaf& l = e->leaf;
        l.threshold = t(rng);
        l.period = p(rng);
        for (std::int64_t m = 1; m <= l.threshold; ++m)
            if (coin(rng)) l.transient.push_back(m);
        for (std::int64_t x = 0; x < l.period; ++x)
            if (coin(rng)) l.residues.push_back(x);
        return e;
    }
    e->op = "Luidc"[k];
    e->a = random_expr(rng, depth - 1);
    if (e->op != 'c') e->b = random_expr(rng, depth - 1);
    return e;
}

UPSet eval(const Expr& e) {
    switch (e.op) {
        case 'u': return eval(*e.a) | eval(*e.b);
        case 'i': return eval(*e.a) & eval(*e.b);
        case 'd': return eval(*e.a) - eval(*e.b);
        case 'c': return eval(*e.a).complement();
        default: return UPSet::from_parts(e.leaf.threshold, e.leaf.transient, e.leaf.period, e.leaf.residues);
    }
}

std::vector<bool> eval_bits(const Expr& e, std::int64_t bound) {
    std::vector<bool> out(bound + 1, false);
    if (e.op == 'L') {
        for (std::int64_t m = 1; m <= bound; ++m) out[m] = e.leaf.contains(m);
        return out;
    }
    std::vector<bool> a = eval_bits(*e.a, bound), b = e.b ? eval_bits(*e.b, bound) : std::vector<bool>{};
    for (std::int64_t m = 1; m <= bound; ++m) {
        switch (e.op) {
            case 'u': out[m] = a[m] || b[m]; break;
            case 'i': out[m] = a[m] && b[m]; break;
            case 'd': out[m] = a[m] && !b[m]; break;
            default: out[m] = !a[m];
        }
    }
    return out;
}

void leaf_bounds(const Expr& e, std::int64_t& threshold, std::int64_t& period) {
    if (e.op == 'L') {
        threshold = std::max(threshold, e.leaf.threshold);
        period = std::lcm(period, e.leaf.period);
        return;
    }
    leaf_bounds(*e.a, threshold, period);
    if (e.b) leaf_bounds(*e.b, threshold, period);
}

Outcome upset_oracle() {
    std::mt19937_64 rng(1000);
    std::size_t points = 0;
    for (int i = 0; i < 1000; ++i) {
        auto e = random_expr(rng, 4);
        std::int64_t threshold = 0, period = 1;
        leaf_bounds(*e, threshold, period);
        // Past the largest leaf threshold every leaf, hence the result, is periodic.
        const std::int64_t bound = threshold + 2 * period;
        const UPSet s = eval(*e);
        const std::vector<bool> bits = eval_bits(*e, bound);
        for (std::int64_t m = 1; m <= bound; ++m, ++points) {
            if (s.contains(m) != bits[m]) return {false, "expression " + std::to_string(i) + " disagrees at " + std::to_string(m)};
        }
        if (s.threshold() > threshold || period % s.period() != 0) {
            return {false, "expression " + std::to_string(i) + " has a non-canonical threshold or period"};
        }
    }
    return {true, "1000 expressions, " + std::to_string(points) + " points"};
}

}  // namespace

int main() {
    const auto instances = finite_instances(42, 200, 5, 4);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 example Gamma0", gamma0},
        {"2 example W0", w0},
        {"3 example sigma table", sigma_table},
        {"4 example X-sets", x_sets},
        {"5 Delta characterization", delta_characterization},
        {"6 identity suite", [&] { return identity_suite(instances); }},
        {"7 path bijection", [&] { return path_bijection(instances); }},
        {"8 Condition (K) equivalence", [&] { return condition_k_equivalence(instances); }},
        {"9 ideal correspondence", ideal_correspondence},
        {"10 degeneracy", degeneracy},
        {"11 UPSet oracle equivalence", upset_oracle},
    };
    bool all = true;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        all = all && o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << secs << "s]\n";
    }
    return all ? 0 : 1;
}
