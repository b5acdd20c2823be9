#include "doctest.h"

#include "ugraph/dsl.hpp"
#include "ugraph/errors.hpp"

#include <fstream>
#include <functional>
#include <random>
#include <sstream>

using namespace ugraph;
using ugraph::dsl::parse;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

dsl::UltragraphSpec fig1() { return parse(read_file(std::string(UGRAPH_DATA_DIR) + "/example_fig1.ug")); }

}  // namespace

TEST_CASE("bundled example parses to two families over an infinite universe") {
    auto spec = fig1();
    CHECK(spec.name == "fig1");
    CHECK_FALSE(spec.finite_universe.has_value());
    CHECK(spec.clauses.size() == 2);
    CHECK(spec.has_families());
    CHECK_FALSE(spec.edge_count().has_value());
    REQUIRE(spec.winf);
    CHECK(spec.winf->elaborate() == UPSet::multiples_of(4));
}

TEST_CASE("compact two vertex file") {
    auto spec = parse("v:2; e1: s=1, r={2}");
    CHECK(spec.finite_universe == 2);
    CHECK(spec.edge_count() == 1);
    auto [src, r] = dsl::instantiate_edge(spec, EdgeId(1));
    CHECK(src == VertexId(1));
    CHECK(r == UPSet::singleton(2));
    CHECK_THROWS_AS(dsl::instantiate_edge(spec, EdgeId(2)), UncoveredIndex);
}

TEST_CASE("coverage errors") {
    CHECK_THROWS_AS(parse("v:3; e1: s=1, r={2}; e2: s=1, r={2}; e3: s=2, r={1}; e3: s=3, r={1}"), CoverageError);
    CHECK_THROWS_AS(parse("v:3; e1: s=1, r={2}; e3: s=1, r={2}"), CoverageError);
    CHECK_THROWS_AS(parse("ultragraph g { vertices: infinite; edges:"
                          " family k in 1.. : e[k] { s: v[k], r: all }"
                          " edge e[3] { s: v[1], r: all } }"),
                    CoverageError);
    CHECK_THROWS_AS(parse("ultragraph g { vertices: infinite; edges:"
                          " family k in 1.. : e[2*k] { s: v[k], r: all } }"),
                    CoverageError);
    CHECK_NOTHROW(parse("ultragraph g { vertices: infinite; edges:"
                        " edge e[1] { s: v[1], r: all }"
                        " family k in 1.. : e[k + 1] { s: v[k], r: all } }"));
}

TEST_CASE("empty ranges and syntax errors carry diagnostics") {
    CHECK_THROWS_AS(parse("v:2; e1: s=1, r={3}"), EmptyRangeError);
    CHECK_THROWS_AS(parse("ultragraph g { vertices: infinite; edges:"
                          " family k in 1.. : e[k] { s: v[k], r: m <= k - 1 } }"),
                    EmptyRangeError);
    CHECK_THROWS_AS(parse("v:2; e1: s=3, r={1}"), ValidationError);
    try {
        parse("ultragraph g {\n  vertices: infinite;\n  edges:\n    edge e[1] { s: v[1], r: m <=> 3 }\n}");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 4);
        CHECK(e.column() > 1);
    }
    CHECK_THROWS_AS(parse("ultragraph g { vertices: infinite; edges:"
                          " family k in 1.. : e[k] { s: v[k], r: m <= k^3 } }"),
                    SyntaxError);
    CHECK_THROWS_AS(parse("ultragraph g { vertices: infinite; edges:"
                          " family k in 1.. : e[k] { s: v[k], r: m <= j } }"),
                    SyntaxError);
}

TEST_CASE("instantiation of the bundled example") {
    auto spec = fig1();
    auto [s2, r2] = dsl::instantiate_edge(spec, EdgeId(2));
    CHECK(s2 == VertexId(2));
    CHECK(r2 == UPSet::singleton(1));

    auto [s5, r5] = dsl::instantiate_edge(spec, EdgeId(5));
    CHECK(s5 == VertexId(5));
    CHECK(r5 == UPSet::multiples_of(5));

    auto [s8, r8] = dsl::instantiate_edge(spec, EdgeId(8));
    CHECK(s8 == VertexId(8));
    CHECK(r8.members() == std::vector<UPSet::Value>{1, 2, 3, 5, 6, 7, 9, 10, 11, 13, 14, 15});
}

TEST_CASE("pretty printing round-trips") {
    const char* sources[] = {
        "v:2; e1: s=1, r={2}",
        "v: inf; winf: 3 | m or m == 1; e1: s=1, r=not {1, 2} and m < 40 || m > 100; e2: s=2, r=!(m != 5)",
        "ultragraph h { vertices: infinite; edges:"
        " edge e[1] { s: v[2], r: (2) | m and (m >= 3 or none) }"
        " family q in 1.. : e[q + 1] { s: v[1], r: {q, 2*q - 1} or (q^2 - q + 1) | m } }",
    };
    for (const char* src : sources) {
        auto spec = parse(src);
        std::string text = dsl::pretty_print(spec);
        auto again = parse(text);
        CHECK(again == spec);
        CHECK(dsl::pretty_print(again) == text);
    }
    auto spec = fig1();
    CHECK(parse(dsl::pretty_print(spec)) == spec);
}

TEST_CASE("property: elaboration agrees with direct evaluation") {
    auto spec = fig1();
    for (std::int64_t n = 1; n <= 24; ++n) {
        auto hit = spec.clause_for(EdgeId(n));
        REQUIRE(hit);
        const auto& fc = std::get<dsl::FamilyClause>(*hit->first);
        auto [src, r] = dsl::instantiate_edge(spec, EdgeId(n));
        CHECK(src == VertexId(n));
        for (std::int64_t m = 1; m <= 1000; ++m) REQUIRE(r.contains(m) == fc.range->holds(m, hit->second));
    }

    // random closed expressions
    std::mt19937_64 rng(31);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    std::function<std::string(int)> gen = [&](int depth) -> std::string {
        int choice = depth <= 0 ? pick(0, 4) : pick(0, 7);
        switch (choice) {
            case 0: return std::to_string(pick(1, 9)) + " | m";
            case 1: return "m <= " + std::to_string(pick(0, 60));
            case 2: return "m >= " + std::to_string(pick(0, 60));
            case 3: return "m == " + std::to_string(pick(1, 60));
            case 4: return "{" + std::to_string(pick(1, 40)) + ", " + std::to_string(pick(1, 40)) + "}";
            case 5: return "(" + gen(depth - 1) + " and " + gen(depth - 1) + ")";
            case 6: return "(" + gen(depth - 1) + " or " + gen(depth - 1) + ")";
            default: return "not " + gen(depth - 1);
        }
    };
    for (int trial = 0; trial < 200; ++trial) {
        std::string text = "v: inf; winf: " + gen(3) + "; e1: s=1, r=all";
        auto s = parse(text);
        UPSet e = s.winf->elaborate();
        for (std::int64_t m = 1; m <= 1000; ++m) REQUIRE(e.contains(m) == s.winf->holds(m));
    }
}

TEST_CASE("property: family ranges are nonempty up to a horizon") {
    auto spec = fig1();
    for (std::int64_t n = 1; n <= 200; ++n) CHECK_FALSE(dsl::instantiate_edge(spec, EdgeId(n)).second.is_empty());
}
