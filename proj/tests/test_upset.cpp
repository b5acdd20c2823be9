#include "doctest.h"

#include "ugraph/errors.hpp"
#include "ugraph/upset.hpp"

#include <numeric>
#include <random>
#include <vector>

using ugraph::Cardinality;
using ugraph::UPSet;
using V = UPSet::Value;

namespace {

UPSet divisible_by(V d) { return UPSet::multiples_of(d); }

struct RawSet {
    V threshold;
    std::vector<V> transient;
    V period;
    std::vector<V> residues;

    bool contains(V m) const {
        if (m <= threshold) return std::find(transient.begin(), transient.end(), m) != transient.end();
        return std::find(residues.begin(), residues.end(), m % period) != residues.end();
    }
    UPSet build() const { return UPSet::from_parts(threshold, transient, period, residues); }
};

RawSet random_raw(std::mt19937_64& rng) {
    std::uniform_int_distribution<V> tdist(0, 12), pdist(1, 12);
    std::bernoulli_distribution coin(0.4);
    RawSet r{tdist(rng), {}, pdist(rng), {}};
    for (V m = 1; m <= r.threshold; ++m)
        if (coin(rng)) r.transient.push_back(m);
    // a quarter of the samples are finite
    bool finite = std::uniform_int_distribution<int>(0, 3)(rng) == 0;
    for (V x = 0; x < r.period && !finite; ++x)
        if (coin(rng)) r.residues.push_back(x);
    return r;
}

}  // namespace

TEST_CASE("intersection of divisibility classes") {
    CHECK((divisible_by(3) & divisible_by(4)) == divisible_by(12));
}

TEST_CASE("idempotence and self-difference") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        UPSet a = random_raw(rng).build();
        CHECK((a & a) == a);
        CHECK((a | a) == a);
        CHECK((a - a).is_empty());
    }
}

TEST_CASE("multiples of four avoiding three and one") {
    UPSet s = divisible_by(4) - (divisible_by(3) | UPSet::singleton(1));
    CHECK(s.enumerate(30) == std::vector<V>{4, 8, 16, 20, 28});
    CHECK(s.enumerate(20) == std::vector<V>{4, 8, 16, 20});
    CHECK(s.cardinality() == Cardinality::infinite());
}

TEST_CASE("cardinality, emptiness and finiteness") {
    UPSet le4_not4 = UPSet::interval(1, 4) - divisible_by(4);
    CHECK(le4_not4.cardinality() == Cardinality::finite(3));
    CHECK(le4_not4.members() == std::vector<V>{1, 2, 3});
    CHECK(le4_not4.is_finite());

    CHECK(UPSet::empty().cardinality() == Cardinality::finite(0));
    CHECK(UPSet::empty().is_empty());
    CHECK(divisible_by(3).cardinality() == Cardinality::infinite());
    CHECK_FALSE(divisible_by(3).is_finite());
}

TEST_CASE("membership and minimum") {
    CHECK_FALSE(UPSet::empty().contains(7));
    CHECK(divisible_by(12).min_element() == 12);
    CHECK_FALSE(UPSet::empty().min_element().has_value());
    CHECK(UPSet::at_least(5).min_element() == 5);
    CHECK_FALSE(UPSet::all().contains(0));
    CHECK_FALSE(UPSet::all().contains(-3));
}

TEST_CASE("canonical form collapses redundant periods and thresholds") {
    // {m : 2 | m} presented with period 6 and a needlessly long transient part.
    UPSet padded = UPSet::from_parts(5, std::vector<V>{2, 4}, 6, std::vector<V>{0, 2, 4});
    CHECK(padded == divisible_by(2));
    CHECK(padded.period() == 2);
    CHECK(padded.threshold() == 0);

    UPSet x = UPSet::from_parts(3, std::vector<V>{1}, 3, std::vector<V>{1});
    CHECK(x.threshold() == 0);  // 1 is already predicted by residue 1 mod 3
}

TEST_CASE("serialization round-trips exactly") {
    UPSet s = (divisible_by(4) - divisible_by(3)) | UPSet::from_members(std::vector<V>{1, 2, 7});
    std::string text = s.serialize();
    CHECK(UPSet::parse(text) == s);
    CHECK(UPSet::parse(text).serialize() == text);
    CHECK(UPSet::empty().serialize() == "upset{T=0; transient=; p=1; residues=}");
    CHECK(divisible_by(3).serialize() == "upset{T=0; transient=; p=3; residues=0}");
    CHECK_THROWS_AS(UPSet::parse("upset{T=1; p=1}"), std::invalid_argument);
}

TEST_CASE("aligned period overflow is reported") {
    UPSet big = divisible_by(9973) - divisible_by(9967);
    CHECK_THROWS_AS(big - divisible_by(9949), ugraph::PeriodOverflow);
}

TEST_CASE("property: boolean operations agree with a bitmask model") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 400; ++trial) {
        RawSet ra = random_raw(rng), rb = random_raw(rng);
        UPSet a = ra.build(), b = rb.build();
        const V bound = 4 * std::lcm(ra.period, rb.period) + ra.threshold + rb.threshold;
        UPSet u = a | b, i = a & b, d = a - b;
        for (V m = 1; m <= bound; ++m) {
            REQUIRE(a.contains(m) == ra.contains(m));
            REQUIRE(u.contains(m) == (ra.contains(m) || rb.contains(m)));
            REQUIRE(i.contains(m) == (ra.contains(m) && rb.contains(m)));
            REQUIRE(d.contains(m) == (ra.contains(m) && !rb.contains(m)));
        }
    }
}

TEST_CASE("property: equal extensions have identical canonical forms") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        RawSet r = random_raw(rng);
        UPSet a = r.build();
        // Re-present the same set with a tripled period and a longer transient part.
        RawSet s{r.threshold + 5, {}, r.period * 3, {}};
        for (V m = 1; m <= s.threshold; ++m)
            if (r.contains(m)) s.transient.push_back(m);
        for (V x = 0; x < s.period; ++x)
            if (r.contains(x + s.period * (r.threshold + 1))) s.residues.push_back(x);
        UPSet b = s.build();
        CHECK(a == b);
        CHECK(a.serialize() == b.serialize());
        // canonicalizing twice is a no-op
        CHECK(UPSet::parse(a.serialize()) == a);
    }
}

TEST_CASE("property: finite cardinality matches enumeration past the threshold") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        UPSet a = random_raw(rng).build();
        if (!a.is_finite()) continue;
        auto listed = a.enumerate(a.threshold() + a.period());
        CHECK(a.cardinality() == Cardinality::finite(listed.size()));
    }
}
