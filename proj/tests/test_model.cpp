#include "doctest.h"

#include "support/fig1_oracle.hpp"
#include "ugraph/errors.hpp"
#include "ugraph/model.hpp"

#include <fstream>
#include <sstream>

using namespace ugraph;

namespace {

Ultragraph fig1_graph() {
    std::ifstream in(std::string(UGRAPH_DATA_DIR) + "/example_fig1.ug");
    std::stringstream ss;
    ss << in.rdbuf();
    return Ultragraph::from_spec(dsl::parse(ss.str()));
}

UPSet brute(std::int64_t bound, auto pred) {
    std::vector<std::int64_t> ms;
    for (std::int64_t m = 1; m <= bound; ++m)
        if (pred(m)) ms.push_back(m);
    return UPSet::from_members(ms);
}

UPSet upto(const UPSet& s, std::int64_t bound) { return s & UPSet::interval(1, bound); }

}  // namespace

TEST_CASE("binary words") {
    BinaryWord w("10110");
    CHECK(w.length() == 5);
    CHECK(w.bit(1));
    CHECK_FALSE(w.bit(2));
    CHECK(w.restrict_to(3).str() == "101");
    CHECK(w.child(true).str() == "101101");
    CHECK(w.parent().str() == "1011");
    CHECK(BinaryWord::zeros_then_one(3).str() == "0001");
    CHECK(BinaryWord::zeros_then_one(3).is_gamma0_shape());
    CHECK_FALSE(w.is_gamma0_shape());
    CHECK(BinaryWord::zeros(4).is_all_zero());
    CHECK(BinaryWord("1") < BinaryWord("00"));
    CHECK(BinaryWord("01") < BinaryWord("10"));
    CHECK(BinaryWord::zeros_then_one(16).compact() == "0^{16}1");
    CHECK(BinaryWord("101").is_prefix_of(w));
    CHECK_THROWS_AS(BinaryWord("012"), std::invalid_argument);
    CHECK_THROWS_AS(w.restrict_to(6), std::out_of_range);
}

TEST_CASE("r(lambda, mu) on the bundled example") {
    Ultragraph g = fig1_graph();
    auto r13 = g.r_lambda_mu({EdgeId(1)}, {EdgeId(3)});
    CHECK(upto(r13, 100) == brute(100, [](auto m) { return m % 3 == 0 && m % 4 != 0; }));
    CHECK(r13.first_members(5) == std::vector<std::int64_t>{3, 6, 9, 15, 18});
    CHECK(g.r_lambda_mu({EdgeId(1)}, {}) == g.range(EdgeId(1)));
    auto r135 = g.r_lambda_mu({EdgeId(1), EdgeId(3)}, {EdgeId(5)});
    CHECK(upto(r135, 200) == brute(200, [](auto m) { return m % 12 == 0 && m % 5 != 0; }));
    CHECK_THROWS_AS(g.r_lambda_mu({}, {EdgeId(1)}), InvalidIndexSets);
    CHECK_THROWS_AS(g.r_lambda_mu({EdgeId(1)}, {EdgeId(1)}), InvalidIndexSets);
}

TEST_CASE("r(omega) on the bundled example") {
    Ultragraph g = fig1_graph();
    CHECK(g.r_omega(BinaryWord("1")) == UPSet::multiples_of(3));
    CHECK(upto(g.r_omega(BinaryWord("001")), 300) == brute(300, [](auto m) { return m % 3 != 0 && m % 4 == 0; }));
    CHECK(upto(g.r_omega(BinaryWord("00001")), 300) ==
          brute(300, [](auto m) { return m % 3 != 0 && m % 4 != 0 && m % 5 == 0 && m > 1; }));
    CHECK_THROWS_AS(g.r_omega(BinaryWord("000")), AllZeroWord);
}

TEST_CASE("property: ranges of words of length n partition the vertices") {
    Ultragraph g = fig1_graph();
    for (std::int64_t n = 1; n <= 8; ++n) {
        for (std::int64_t m = 1; m <= 120; ++m) {
            int hits = 0;
            for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
                std::string bits;
                for (std::int64_t i = 0; i < n; ++i) bits += (mask >> i) & 1 ? '1' : '0';
                if (g.r_omega(BinaryWord(bits)).contains(m)) ++hits;
            }
            bool in_none = true;
            for (std::int64_t i = 1; i <= n; ++i) in_none = in_none && !g.range(EdgeId(i)).contains(m);
            REQUIRE(hits + (in_none ? 1 : 0) == 1);
        }
    }
}

TEST_CASE("property: r(omega) agrees with r(lambda, mu) and with the closed form") {
    Ultragraph g = fig1_graph();
    for (std::uint32_t mask = 1; mask < (1u << 6); ++mask) {
        std::string bits;
        std::set<EdgeId> lambda, mu;
        for (std::int64_t i = 1; i <= 6; ++i) {
            bool one = (mask >> (i - 1)) & 1;
            bits += one ? '1' : '0';
            (one ? lambda : mu).insert(EdgeId(i));
        }
        UPSet r = g.r_omega(BinaryWord(bits));
        CHECK(r == g.r_lambda_mu(lambda, mu));
        for (std::int64_t m = 1; m <= 400; ++m) REQUIRE(r.contains(m) == (fig1::chain(m, 6) == bits));
    }
}

TEST_CASE("regular vertices") {
    Ultragraph g = fig1_graph();
    for (std::int64_t m = 1; m <= 30; ++m) CHECK(g.out_degree(VertexId(m)) == 1);
    CHECK(regular_vertices(g, 10).size() == 10);

    Ultragraph h = Ultragraph::finite(3, {{VertexId(1), UPSet::singleton(2)}, {VertexId(1), UPSet::singleton(3)}});
    CHECK(h.is_regular(VertexId(1)));
    CHECK_FALSE(h.is_regular(VertexId(2)));
    CHECK(h.edges_from(VertexId(1), 10) == std::vector<EdgeId>{EdgeId(1), EdgeId(2)});

    auto spec = dsl::parse("ultragraph star { vertices: infinite; edges:"
                           " family k in 1.. : e[k] { s: v[1], r: m == k + 1 } }");
    Ultragraph star = Ultragraph::from_spec(spec);
    CHECK_FALSE(star.out_degree(VertexId(1)).has_value());
    CHECK_FALSE(star.is_regular(VertexId(1)));
    CHECK_FALSE(star.is_regular(VertexId(2)));
    CHECK(star.edges_from(VertexId(1), 4).size() == 4);
}

TEST_CASE("finite ultragraph validation") {
    CHECK_THROWS_AS(Ultragraph::finite(2, {{VertexId(3), UPSet::singleton(1)}}), ValidationError);
    CHECK_THROWS_AS(Ultragraph::finite(2, {{VertexId(1), UPSet::empty()}}), EmptyRangeError);
    CHECK_THROWS_AS(Ultragraph::finite(2, {{VertexId(1), UPSet::singleton(5)}}), ValidationError);
    Ultragraph g = Ultragraph::finite(2, {{VertexId(1), UPSet::singleton(2)}});
    CHECK_THROWS_AS(g.range(EdgeId(2)), UncoveredIndex);
}

TEST_CASE("built graph bookkeeping and exports") {
    BuiltGraph e;
    EVertex a = EVertex::vertex(VertexId(1)), w = EVertex::word(BinaryWord("10"));
    e.add_vertex(w);
    e.add_vertex(a, true);
    e.add_edge({EEdge::bar(a), w, a});
    e.add_edge({EEdge::eps(EdgeId(1), w), a, w});
    CHECK_THROWS(e.add_edge({EEdge::eps(EdgeId(2), a), EVertex::vertex(VertexId(9)), a}));
    CHECK(e.out_edges(a).size() == 1);
    CHECK(e.is_frontier(a));
    e.normalize();
    CHECK(e.vertices().front() == a);
    std::string json = e.to_json();
    CHECK(json.find("\"kind\": \"w\"") != std::string::npos);
    CHECK(json.find("\"bits\": \"10\"") != std::string::npos);
    CHECK(json.find("\"kind\": \"bar\"") != std::string::npos);
    std::string dot = e.to_dot();
    CHECK(dot.find("arrowhead=normalnormal") != std::string::npos);
    BuiltGraph copy = e;
    CHECK(copy == e);
    copy.mark_frontier(w);
    CHECK_FALSE(copy == e);
}
