#include "doctest.h"

#include "support/fig1_oracle.hpp"
#include "ugraph/builder.hpp"
#include "ugraph/errors.hpp"
#include "ugraph/generate.hpp"

#include <fstream>
#include <random>
#include <sstream>

using namespace ugraph;

namespace {

Ultragraph fig1_graph() {
    std::ifstream in(std::string(UGRAPH_DATA_DIR) + "/example_fig1.ug");
    std::stringstream ss;
    ss << in.rdbuf();
    return Ultragraph::from_spec(dsl::parse(ss.str()));
}

std::vector<std::string> render(const std::vector<EVertex>& xs) {
    std::vector<std::string> out;
    for (const EVertex& x : xs) out.push_back(x.to_string());
    return out;
}

std::vector<std::string> strs(const std::vector<BinaryWord>& ws) {
    std::vector<std::string> out;
    for (const BinaryWord& w : ws) out.push_back(w.str());
    return out;
}

}  // namespace

TEST_CASE("Delta levels of the bundled example") {
    Builder b(fig1_graph());
    CHECK(strs(b.delta_level(1)) == std::vector<std::string>{"1"});
    CHECK(strs(b.delta_level(2)) == std::vector<std::string>{"10"});
    CHECK(strs(b.delta_level(3)) == std::vector<std::string>{"001", "100", "101"});
}

TEST_CASE("Gamma0 of the bundled example") {
    Builder b(fig1_graph());
    std::vector<std::string> got;
    for (const BinaryWord& w : b.gamma0_up_to(29)) got.push_back(w.compact());
    CHECK(got == std::vector<std::string>{"1", "001", "00001", "0^{8}1", "0^{16}1", "0^{20}1", "0^{28}1"});
}

TEST_CASE("W0 and classification") {
    Builder b(fig1_graph());
    std::vector<std::int64_t> w0;
    for (std::int64_t m = 1; w0.size() < 10; ++m)
        if (!b.classify(VertexId(m)).w_plus) w0.push_back(m);
    CHECK(w0 == std::vector<std::int64_t>{1, 2, 7, 11, 13, 14, 17, 19, 22, 23});
    CHECK(b.classify(VertexId(4)).witness.str() == "001");
    CHECK(b.classify(VertexId(5)).witness.str() == "00001");
    CHECK_FALSE(b.classify(VertexId(7)).w_plus);
}

TEST_CASE("sigma table of the bundled example") {
    Builder b(fig1_graph());
    const std::vector<std::pair<int, std::string>> table = {
        {4, "001"},     {8, "001"},      {12, "101"},     {16, "0010"},     {20, "00101"},
        {3, "100"},     {5, "00001"},    {6, "10000"},    {9, "10000"},     {10, "0000100"},
        {15, "1000100"}, {18, "100000100"}, {1, ""},      {2, ""},          {7, ""},
        {11, ""},       {13, ""},        {14, ""},        {17, ""},         {19, ""}};
    for (const auto& [m, s] : table) CHECK_MESSAGE(b.sigma(VertexId(m)).str() == s, "v" << m);
}

TEST_CASE("X-sets of the bundled example") {
    Builder b(fig1_graph());
    using V = std::vector<std::string>;
    CHECK(render(b.x_set(EdgeId(1))) == V{"1"});
    CHECK(render(b.x_set(EdgeId(2))) == V{"v1"});
    CHECK(render(b.x_set(EdgeId(3))) == V{"001", "101"});
    CHECK(render(b.x_set(EdgeId(4))) == V{"v1", "v2", "v3"});
    CHECK(render(b.x_set(EdgeId(5))) == V{"00001", "00101", "10001", "10101"});
    CHECK(render(b.x_set(EdgeId(6))) == V{"v1", "v2", "v3", "v5", "v6", "v7", "v9"});
    CHECK(render(b.x_set(EdgeId(7))) == V{"v6", "v12", "v24", "1000001", "1000101", "1010001", "1010101"});
    CHECK(render(b.x_set(EdgeId(8))) == V{"v1", "v2", "v3", "v5", "v6", "v7", "v9", "v10", "v11", "v13", "v14", "v15"});
}

TEST_CASE("Delta agrees with the closed-form characterization") {
    Builder b(fig1_graph());
    std::size_t compared = 0;
    for (std::size_t n = 1; n <= 9; ++n) {
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            std::string bits;
            for (std::size_t i = 0; i < n; ++i) bits += (mask >> i) & 1 ? '1' : '0';
            REQUIRE_MESSAGE(b.in_delta(BinaryWord(bits)) == fig1::in_delta(bits), bits);
            ++compared;
        }
    }
    CHECK(compared == 1022);
}

TEST_CASE("property: sigma agrees with an independent oracle") {
    Builder b(fig1_graph());
    for (std::int64_t m = 1; m <= 120; ++m) CHECK_MESSAGE(b.sigma(VertexId(m)).str() == fig1::sigma(m), "v" << m);
}

TEST_CASE("r-prime values") {
    Builder b(fig1_graph());
    CHECK(b.r_prime(BinaryWord("01")).is_empty());
    CHECK(b.r_prime(BinaryWord("001")) == b.r(BinaryWord("001")));
    CHECK(b.r_prime(BinaryWord("0000001")).is_empty());  // r(0000001) is finite
    for (std::int64_t m = 1; m <= 100; ++m) {
        bool expected = b.r(BinaryWord("101")).contains(m) && fig1::sigma(m).size() >= 3;
        REQUIRE(b.r_prime(BinaryWord("101")).contains(m) == expected);
    }
    CHECK_THROWS_AS(b.r_prime(BinaryWord("00")), AllZeroWord);
}

TEST_CASE("set identities on the bundled example") {
    Builder b(fig1_graph());
    Report rep = verify_set_identities(b, 7, 60);
    INFO(rep.to_string());
    CHECK(rep.all_pass());
    CHECK(rep.checks.size() == 9);
}

TEST_CASE("corrupted sigma is detected") {
    Builder b(fig1_graph());
    b.set_sigma_override([](VertexId v) -> std::optional<BinaryWord> {
        if (v == VertexId(3)) return BinaryWord();
        return std::nullopt;
    });
    Report rep = verify_set_identities(b, 5, 30);
    bool decomposition_failed = false;
    for (const Check& c : rep.checks)
        if (c.identity == "edge-range-decomposition" && !c.pass) decomposition_failed = c.witness.find("v3") != std::string::npos;
    CHECK(decomposition_failed);
}

TEST_CASE("built graph around the bundled example") {
    Builder b(fig1_graph());
    BuiltGraph e = build_e(b, {7, 8, 8});
    auto bar = [&](const EVertex& x) { return e.find_edge(EEdge::bar(x)); };
    EVertex w1 = EVertex::word(BinaryWord("1")), w10 = EVertex::word(BinaryWord("10"));
    REQUIRE(bar(w10));
    CHECK(e.edges()[*bar(w10)].source == w1);
    for (const char* child : {"100", "101"}) {
        auto id = bar(EVertex::word(BinaryWord(child)));
        REQUIRE(id);
        CHECK(e.edges()[*id].source == w10);
    }
    auto b6 = bar(EVertex::vertex(VertexId(6)));
    REQUIRE(b6);
    CHECK(e.edges()[*b6].source == EVertex::word(BinaryWord("10000")));
    auto eps43 = e.find_edge(EEdge::eps(EdgeId(4), EVertex::vertex(VertexId(3))));
    REQUIRE(eps43);
    CHECK(e.edges()[*eps43].source == EVertex::vertex(VertexId(4)));
    // every edge endpoint is present and Bar edges form a forest
    for (const BuiltEdge& be : e.edges()) {
        CHECK(e.contains(be.source));
        CHECK(e.contains(be.range));
        if (be.label.is_bar()) CHECK(e.in_edges(be.range).size() >= 1);
    }
    Report reg = check_regular(b, e);
    INFO(reg.to_string());
    CHECK(reg.all_pass());
    for (const EVertex& x : e.vertices())
        if (x.is_word() && !e.is_frontier(x)) CHECK(!e.out_edges(x).empty());
}

TEST_CASE("infinite emitter is irregular in both structures") {
    auto spec = dsl::parse("ultragraph star { vertices: infinite; edges:"
                           " family k in 1.. : e[k] { s: v[1], r: m == k + 1 } }");
    Builder b(Ultragraph::from_spec(spec));
    BuiltGraph e = build_e(b, {4, 6, 6});
    CHECK(e.is_frontier(EVertex::vertex(VertexId(1))));
    CHECK(e.out_edges(EVertex::vertex(VertexId(1))).size() == 5);
    BuiltGraph wider = build_e(b, {4, 12, 12});
    CHECK(wider.out_edges(EVertex::vertex(VertexId(1))).size() == 11);
    CHECK(check_regular(b, e).all_pass());
}

TEST_CASE("oracle errors") {
    Builder b(fig1_graph(), InfinityOracle::unknown());
    CHECK_THROWS_AS(b.sigma(VertexId(4)), OracleUnknown);
    Builder wrong(fig1_graph(), InfinityOracle::none());
    CHECK_THROWS_AS(wrong.sigma(VertexId(4)), NonTermination);

    auto spec = dsl::parse("ultragraph gap { vertices: infinite; edges:"
                           " family k in 1.. : e[k] { s: v[k], r: m == 2 * k } }");
    BuilderOptions opts;
    opts.search_cap = 50;
    Builder odd(Ultragraph::from_spec(spec), std::nullopt, opts);
    CHECK_FALSE(odd.classify(VertexId(3)).w_plus);  // certified: no range ever contains v3
    CHECK_FALSE(odd.classify(VertexId(4)).w_plus);
    CHECK_THROWS_AS(odd.classify(VertexId(1000)), UnknownAtDepth);
}

TEST_CASE("property: degenerate finite ultragraphs give the edge-split graph") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        Ultragraph g = random_finite(rng, 5, 4);
        Builder b(g);
        CHECK(b.delta_up_to(4).empty());
        BuildParams p{4, 5, 4};
        CHECK(build_e(b, p) == edge_split_graph(g, p));
        for (std::int64_t n = 1; n <= *g.edge_count(); ++n) {
            std::vector<EVertex> expect;
            for (auto m : g.range(EdgeId(n)).members()) expect.push_back(EVertex::vertex(VertexId(m)));
            CHECK(b.x_set(EdgeId(n)) == expect);
        }
        Report rep = verify_set_identities(b, 4, 5);
        rep.append(check_regular(b, build_e(b, p)));
        INFO(rep.to_string());
        CHECK(rep.all_pass());
    }
}

TEST_CASE("finite listing with infinite ranges") {
    auto spec = dsl::parse("v: inf; e1: s=1, r=2 | m; e2: s=2, r=3 | m; e3: s=3, r={1}");
    Ultragraph g = Ultragraph::from_spec(spec);
    Builder b(g);
    CHECK(strs(b.delta_level(2)) == std::vector<std::string>{"01", "10", "11"});
    CHECK(b.sigma(VertexId(6)).str() == "110");
    CHECK(b.sigma(VertexId(1)).str() == "");
    Report rep = verify_set_identities(b, 3, 40);
    INFO(rep.to_string());
    CHECK(rep.all_pass());
    BuiltGraph e = build_e(b, {3, 12, 3});
    CHECK(e.is_frontier(EVertex::word(BinaryWord("110"))));
    CHECK(check_regular(b, e).all_pass());
}
