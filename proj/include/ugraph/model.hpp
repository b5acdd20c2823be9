#pragma once

// Ultragraphs, binary words and the output graph E.

#include "ugraph/dsl.hpp"
#include "ugraph/ids.hpp"
#include "ugraph/upset.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ugraph {

/// Finite word over {0,1}. The empty word stands for "no word" (|σ(v)| = 0).
class BinaryWord {
public:
    BinaryWord() = default;
    explicit BinaryWord(std::string bits);

    /// 0^k 1
    static BinaryWord zeros_then_one(std::size_t k);
    static BinaryWord zeros(std::size_t n);

    std::size_t length() const noexcept { return bits_.size(); }
    bool is_empty() const noexcept { return bits_.empty(); }
    /// ω_i, 1-based.
    bool bit(std::size_t i) const;
    /// ω|_m, 1 <= m <= |ω|.
    BinaryWord restrict_to(std::size_t m) const;
    BinaryWord child(bool b) const;
    BinaryWord parent() const { return restrict_to(length() - 1); }
    bool is_all_zero() const noexcept;
    /// 0^k 1 for some k >= 0
    bool is_gamma0_shape() const noexcept;
    bool is_prefix_of(const BinaryWord& other) const noexcept;

    const std::string& str() const noexcept { return bits_; }
    /// Bits, with runs of eight or more zeros written 0^k (e.g. "0^{16}1").
    std::string compact() const;

    /// Shorter words first, then lexicographic.
    std::strong_ordering operator<=>(const BinaryWord& other) const noexcept;
    bool operator==(const BinaryWord& other) const noexcept = default;

private:
    std::string bits_;
};

/// A vertex of E: v_m, a word of Δ, or a tilde copy of either (quotients).
struct EVertex {
    enum class Kind { Vertex, Word };

    Kind kind = Kind::Vertex;
    VertexId v;
    BinaryWord w;
    bool tilde = false;

    static EVertex vertex(VertexId id) { return EVertex{Kind::Vertex, id, {}, false}; }
    static EVertex word(BinaryWord word) { return EVertex{Kind::Word, VertexId(), std::move(word), false}; }
    EVertex tilded() const {
        EVertex out = *this;
        out.tilde = true;
        return out;
    }

    bool is_vertex() const noexcept { return kind == Kind::Vertex; }
    bool is_word() const noexcept { return kind == Kind::Word; }
    std::string to_string() const;

    std::strong_ordering operator<=>(const EVertex& other) const noexcept;
    bool operator==(const EVertex& other) const noexcept = default;
};

/// An edge of E: Bar(x) or Eps(n, x), possibly a tilde copy in a quotient.
struct EEdge {
    enum class Kind { Bar, Eps };

    Kind kind = Kind::Bar;
    EdgeId n;  // Eps only
    EVertex x;
    bool tilde = false;

    static EEdge bar(EVertex x) { return EEdge{Kind::Bar, EdgeId(), std::move(x), false}; }
    static EEdge eps(EdgeId n, EVertex x) { return EEdge{Kind::Eps, n, std::move(x), false}; }

    bool is_bar() const noexcept { return kind == Kind::Bar; }
    bool is_eps() const noexcept { return kind == Kind::Eps; }
    std::string to_string() const;

    std::strong_ordering operator<=>(const EEdge& other) const noexcept;
    bool operator==(const EEdge& other) const noexcept = default;
};

/// An ultragraph with vertices v_1, v_2, ... (or v_1..v_M) and edges e_1, e_2, ...
///
/// Edge data is instantiated lazily from a DSL spec or given explicitly.
/// Copies share the (thread-safe) instantiation cache.
class Ultragraph {
public:
    struct Edge {
        VertexId source;
        UPSet range;
    };

    /// Explicit finite ultragraph on v_1..v_M.
    static Ultragraph finite(std::int64_t vertex_count, std::vector<Edge> edges);
    static Ultragraph from_spec(dsl::UltragraphSpec spec);

    std::optional<std::int64_t> universe_size() const;
    UPSet universe() const;
    bool in_universe(VertexId v) const;
    /// nullopt when the listing is infinite.
    std::optional<std::int64_t> edge_count() const;
    bool has_edge(EdgeId n) const;

    VertexId source(EdgeId n) const;
    const UPSet& range(EdgeId n) const;

    /// |s^{-1}(v)|, nullopt when infinite.
    std::optional<std::int64_t> out_degree(VertexId v) const;
    /// Edges emitted by v with index <= max_index.
    std::vector<EdgeId> edges_from(VertexId v, std::int64_t max_index) const;
    /// s^{-1}(v) finite and nonempty.
    bool is_regular(VertexId v) const;

    /// The W∞ declaration of the underlying spec, if any.
    std::optional<UPSet> declared_w_infinity() const;
    const dsl::UltragraphSpec* spec() const;

    /// r(λ, μ) = ⋂_{e∈λ} r(e) ∖ ⋃_{f∈μ} r(f).
    UPSet r_lambda_mu(const std::set<EdgeId>& lambda, const std::set<EdgeId>& mu) const;
    /// r(ω), computed directly from the edge ranges.
    UPSet r_omega(const BinaryWord& w) const;

    std::string describe() const;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

/// Regular vertices v_m, m <= horizon.
std::vector<VertexId> regular_vertices(const Ultragraph& g, std::int64_t horizon);

struct BuildParams {
    std::int64_t word_depth = 7;      // D
    std::int64_t vertex_horizon = 8;  // M
    std::int64_t edge_horizon = 8;    // N
};

struct BuiltEdge {
    EEdge label;
    EVertex source;
    EVertex range;
};

/// A finite window onto E (or a quotient of it).
class BuiltGraph {
public:
    BuildParams params;

    void add_vertex(const EVertex& x, bool frontier = false);
    void mark_frontier(const EVertex& x);
    /// Both endpoints must already be present.
    void add_edge(BuiltEdge e);

    bool contains(const EVertex& x) const { return index_.count(x) != 0; }
    bool is_frontier(const EVertex& x) const;
    const std::vector<EVertex>& vertices() const { return vertices_; }
    const std::vector<BuiltEdge>& edges() const { return edges_; }
    std::vector<std::size_t> out_edges(const EVertex& x) const;
    std::vector<std::size_t> in_edges(const EVertex& x) const;
    std::optional<std::size_t> find_edge(const EEdge& label) const;

    /// Sorts vertices and edges into canonical order.
    void normalize();

    std::string to_json() const;
    std::string to_dot() const;

    /// Same labelled vertices, edges, endpoints and frontier flags.
    friend bool operator==(const BuiltGraph& a, const BuiltGraph& b);

private:
    std::vector<EVertex> vertices_;
    std::vector<BuiltEdge> edges_;
    std::map<EVertex, std::size_t> index_;
    std::set<EVertex> frontier_;
    std::map<EVertex, std::vector<std::size_t>> out_, in_;
    std::map<EEdge, std::size_t> edge_index_;
};

}  // namespace ugraph
