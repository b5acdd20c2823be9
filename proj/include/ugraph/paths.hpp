#pragma once

// Paths in E and in the ultragraph, the F-subgraph, and Condition (K).

#include "ugraph/builder.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ugraph {

/// s_E and r_E of an edge of E, straight from the construction.
EVertex e_source(Builder& b, const EEdge& e);
inline const EVertex& e_range(const EEdge& e) { return e.x; }

/// A path in E; with no edges it is the vertex `base`.
struct EPath {
    EVertex base;
    std::vector<EEdge> edges;

    std::size_t length() const { return edges.size(); }
    /// l(α): number of eps edges.
    std::size_t eps_count() const;
    /// m(α): largest eps index, 0 when there is none.
    std::int64_t max_edge_index() const;
    EVertex end() const { return edges.empty() ? base : edges.back().x; }
    /// Concatenation; requires this->end() == other.base.
    EPath then(const EPath& other) const;
    std::string to_string() const;

    bool operator==(const EPath&) const = default;
};

bool composable(Builder& b, const EPath& p);

/// f_x: the unique F-path ending at x that starts in W₀ ⊔ Γ₀.
EPath f_path(Builder& b, const EVertex& x);

/// α = g₀ · eps(n₁,x₁) · g₁ ⋯ eps(n_k,x_k) · g_k with every g_i in F*.
struct Factorization {
    std::vector<EPath> blocks;                         // g₀ … g_k
    std::vector<std::pair<EdgeId, EVertex>> eps;       // (n_i, x_i)
};

Factorization factorize(const EPath& p);
EPath recompose(const Factorization& f);

/// A path e_{n₁} ⋯ e_{n_k} of the ultragraph (s(e_{i+1}) ∈ r(e_i)).
using UltraPath = std::vector<EdgeId>;

/// Drops the F-blocks, keeping the eps indices.
UltraPath path_image(const EPath& p);

/// Inverse of path_image for paths from v whose last range contains w.
EPath path_preimage(Builder& b, VertexId v, const UltraPath& u, VertexId w);

struct BijectionResult {
    std::size_t e_paths = 0;
    std::size_t g_paths = 0;
    Report report;
};

/// Compares E-paths v → w with at most `max_eps` eps edges inside `e` against
/// ultragraph paths from v with w in the last range (edge indices and
/// intermediate sources within the window). Throws HorizonTooSmall when the
/// preimage of some ultragraph path leaves the window.
BijectionResult verify_path_bijection(Builder& b, const BuiltGraph& e, VertexId v, VertexId w, std::size_t max_eps);

/// F has no return paths, F-paths are unique, word-to-word reachability is the
/// prefix order and word-to-vertex reachability is membership in r′.
Report verify_f_structure(Builder& b, const BuiltGraph& e);

/// Finite directed multigraph with labelled arcs.
struct Multigraph {
    struct Arc {
        std::size_t from, to;
        std::string label;
    };

    std::vector<std::string> names;
    std::vector<Arc> arcs;
    std::vector<bool> frontier;  // out-arcs may be missing

    std::size_t add_node(std::string name, bool is_frontier = false);
    void add_arc(std::size_t from, std::size_t to, std::string label);
    std::vector<std::vector<std::size_t>> out_lists() const;
    std::optional<std::size_t> find(const std::string& name) const;
};

/// Arc (e, w) from s(e) to w for every edge e and w ∈ r(e). Requires a finite
/// universe and edge list.
Multigraph ultragraph_multigraph(const Ultragraph& g);
Multigraph built_multigraph(const BuiltGraph& e);

struct ReturnCount {
    enum class Kind { Zero, One, AtLeastTwo, Unknown };
    Kind kind = Kind::Zero;

    std::string to_string() const;
    bool operator==(const ReturnCount&) const = default;
};

/// Exact count (capped at two) of first-return paths at `base`.
ReturnCount first_return_count(const Multigraph& g, std::size_t base);
/// Same, by enumerating first-return paths of length <= max_len.
ReturnCount first_return_count_enumerated(const Multigraph& g, std::size_t base, std::size_t max_len);

struct ConditionK {
    enum class Kind { Holds, Fails, UnknownTruncated };
    Kind kind = Kind::Holds;
    std::string witness;

    std::string to_string() const;
};

ConditionK condition_k(const Multigraph& g);

}  // namespace ugraph
