#pragma once

// Admissible pairs, saturated hereditary sets of E, θ and quotients E_I.

#include "ugraph/builder.hpp"

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ugraph {

/// Subset of v_1..v_64 of a finite ultragraph; bit m-1 stands for v_m.
using VertexMask = std::uint64_t;

std::string mask_to_string(VertexMask m);
UPSet mask_to_upset(VertexMask m);

/// The algebra 𝒢⁰ of a finite ultragraph, listed explicitly.
struct SetAlgebra {
    std::int64_t universe = 0;
    std::vector<VertexMask> members;  // increasing

    bool contains(VertexMask m) const;
    /// Minimal nonempty members.
    std::vector<VertexMask> atoms() const;
};

/// Largest universe accepted by g0_algebra.
inline constexpr std::int64_t kMaxAlgebraVertices = 12;

/// Closure of the singletons and the ranges under ∪, ∩ and ∖.
/// Throws InfiniteUniverse for infinite instances.
SetAlgebra g0_algebra(const Ultragraph& g);

struct AdmissiblePair {
    std::vector<VertexMask> ideal;   // members of ℋ, increasing
    std::vector<VertexId> breaking;  // V

    /// Union of the members of ℋ.
    VertexMask support() const;
    bool contains(VertexMask m) const;
    std::string to_string() const;
};

/// ℋ^fin_∞: vertices emitting infinitely many edges, finitely many (but some)
/// of them with range outside ℋ. Only vertices with finite out-degree or a
/// finite edge listing are decided; for finite instances the set is empty.
std::vector<VertexId> fin_infinity(const Ultragraph& g, const AdmissiblePair& p);

/// One PASS/FAIL line per defining condition of an admissible pair.
Report check_admissible(const Ultragraph& g, const SetAlgebra& algebra, const AdmissiblePair& p);

/// All admissible pairs, generated from subsets of the atoms of 𝒢⁰.
std::vector<AdmissiblePair> enumerate_admissible_pairs(const Ultragraph& g);

struct GraphIdealPair {
    std::set<EVertex> h;
    std::set<EVertex> b;

    std::string to_string() const;
    bool operator==(const GraphIdealPair&) const = default;
};

/// Frontier vertices are treated as possibly having more out-edges: the
/// saturation condition is not applied to them.
bool is_hereditary(const BuiltGraph& e, const std::set<EVertex>& h);
bool is_saturated(const BuiltGraph& e, const std::set<EVertex>& h);

/// H^fin_∞ of a stored graph: empty, since stored out-edge lists are finite.
std::set<EVertex> graph_fin_infinity(const BuiltGraph& e, const std::set<EVertex>& h);

/// All saturated hereditary H ⊆ E⁰ with B ⊆ H^fin_∞, by brute force.
std::vector<GraphIdealPair> enumerate_graph_pairs(const BuiltGraph& e);

/// Membership test for an ideal of 𝒢⁰.
using IdealTest = std::function<bool(const UPSet&)>;

/// The ideal of all members of 𝒢⁰ contained in `s`.
IdealTest ideal_below(UPSet s);

/// θ(ℋ) restricted to v_m with m <= vertex_bound and words of length <= word_depth.
std::set<EVertex> theta(Builder& b, const IdealTest& in_ideal, std::int64_t word_depth, std::int64_t vertex_bound);

struct CorrespondenceResult {
    std::size_t ultra_pairs = 0;
    std::size_t graph_pairs = 0;
    bool surjective = false;
    Report report;
};

/// Maps each admissible pair to (θ(ℋ), V) and checks it lands on a distinct
/// graph pair with the same fin_∞ data. Surjectivity is reported, not required.
CorrespondenceResult verify_ideal_correspondence(const Ultragraph& g);

/// For n <= edges: r(e_n) ∈ ℋ iff X(n) ⊆ θ(ℋ), and for each source the number of
/// edges leaving ℋ matches on both sides. Works on infinite instances.
Report verify_edge_ideal_equivalence(Builder& b, const IdealTest& in_ideal, std::int64_t edges);

/// E_I: drops H, keeps the edges into E⁰ ∖ H and adds a tilde copy x̃ of every
/// x in `fin_minus_v`, with a tilde copy of each edge into x.
BuiltGraph quotient_graph(const BuiltGraph& e, const std::set<EVertex>& h, const std::set<EVertex>& fin_minus_v);

/// Ultragraph 𝒢_A of a {0,1}-matrix. Accepts dense rows of 0/1 digits, a list
/// of `row <n>: <range>` lines, or a single schematic `row i: <range>` line in
/// which `i` is the row parameter. Throws ZeroRow for a row with no 1.
Ultragraph matrix_to_ultragraph(std::string_view text);

}  // namespace ugraph
