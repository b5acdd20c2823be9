#pragma once

// Δ, Γ₀/Γ₊, W₀/W₊/W∞, σ, X(n), r′ and the graph E.

#include "ugraph/model.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace ugraph {

/// Answers "is v in W∞?". W∞ is taken to be the answer set intersected with W₊,
/// ordered by increasing vertex index.
class InfinityOracle {
public:
    enum class Answer { Yes, No, Unknown };

    /// W∞ = ∅ (exact for finite edge listings).
    static InfinityOracle none();
    /// W∞ = declared ∩ W₊.
    static InfinityOracle declared(UPSet set);
    /// Answers Unknown for every vertex.
    static InfinityOracle unknown();
    /// The `winf` declaration of the input if present, otherwise none().
    static InfinityOracle for_graph(const Ultragraph& g);

    Answer candidate(VertexId v) const;
    const std::optional<UPSet>& declared_set() const { return set_; }
    std::string describe() const;

private:
    std::optional<UPSet> set_;  // nullopt = unknown
};

struct Classification {
    bool w_plus = false;
    BinaryWord witness;  // the Γ₀ word whose range contains v
};

struct BuilderOptions {
    /// Longest σ-chain followed before reporting NonTermination.
    std::int64_t sigma_cap = 200;
    /// Largest edge index scanned when looking for the first range containing
    /// a vertex; beyond it classification reports UnknownAtDepth.
    std::int64_t search_cap = 100000;
};

/// One line of a verification report.
struct Check {
    bool pass = true;
    std::string identity;
    std::string witness;
};

struct Report {
    std::vector<Check> checks;

    void add(bool pass, std::string identity, std::string witness);
    /// Adds one summary line for `identity`: PASS with `checked` count, or the
    /// first failure witness.
    void summarize(const std::string& identity, std::size_t checked, const std::vector<std::string>& failures);
    bool all_pass() const;
    void append(const Report& other);
    std::string to_string() const;
};

/// Memoized computation of the objects that define E.
///
/// Methods are serialized internally, so a Builder may be shared between
/// threads, although independent builders are faster.
class Builder {
public:
    explicit Builder(Ultragraph g, std::optional<InfinityOracle> oracle = std::nullopt, BuilderOptions opts = {});

    const Ultragraph& graph() const { return g_; }
    const InfinityOracle& oracle() const { return oracle_; }
    const BuilderOptions& options() const { return opts_; }

    /// r(ω); for ω = 0^n this is the set of vertices in no r(e_i), i <= n.
    const UPSet& r(const BinaryWord& w);
    bool in_delta(const BinaryWord& w);
    /// Δ_n in increasing order.
    std::vector<BinaryWord> delta_level(std::int64_t n);
    std::vector<BinaryWord> delta_up_to(std::int64_t depth);
    std::vector<BinaryWord> gamma0_up_to(std::int64_t depth);
    std::vector<BinaryWord> gamma_plus_up_to(std::int64_t depth);

    /// The word of length n whose range contains v (all zeros if v is in none).
    BinaryWord chain_word(VertexId v, std::int64_t n);

    /// W₀ or W₊ with its Γ₀ witness. Throws UnknownAtDepth without a certificate.
    Classification classify(VertexId v);
    /// σ(v), empty for W₀.
    BinaryWord sigma(VertexId v);
    /// Position (1-based) of v in W∞, nullopt if v is not in W∞.
    std::optional<std::int64_t> w_infinity_rank(VertexId v);
    /// The first `count` elements of W∞ (fewer if W∞ is smaller).
    std::vector<VertexId> w_infinity_prefix(std::int64_t count);
    bool in_w_infinity(VertexId v);

    /// X(n) in increasing order (vertices first, then words).
    std::vector<EVertex> x_set(EdgeId n);
    /// r′(ω) = {v ∈ r(ω) : |σ(v)| >= |ω|}.
    UPSet r_prime(const BinaryWord& w);
    /// σ⁻¹(ω) for ω ∈ Δ.
    UPSet sigma_inverse(const BinaryWord& w);

    /// Replaces σ on chosen vertices (test hook for fault injection).
    void set_sigma_override(std::function<std::optional<BinaryWord>(VertexId)> hook);

    /// Largest word length for which r(ω) is defined.
    std::optional<std::int64_t> max_word_length() const { return g_.edge_count(); }

private:
    BinaryWord canonical_sigma(VertexId v);
    std::int64_t first_range_index(VertexId v);
    void require_length(std::size_t n) const;

    Ultragraph g_;
    InfinityOracle oracle_;
    BuilderOptions opts_;
    std::function<std::optional<BinaryWord>(VertexId)> override_;

    std::recursive_mutex mutex_;
    std::map<BinaryWord, UPSet> r_memo_;
    std::map<std::int64_t, std::vector<BinaryWord>> delta_memo_;
    std::map<VertexId, BinaryWord> sigma_memo_;
    std::map<VertexId, std::int64_t> first_index_memo_;
    std::vector<VertexId> w_inf_;       // known prefix of W∞
    std::int64_t w_inf_scanned_ = 0;    // candidates <= this have been examined
    bool w_inf_exhausted_ = false;
};

/// E truncated to v_1..v_M, words of length <= D and eps-edges with n <= N.
BuiltGraph build_e(Builder& b, const BuildParams& params);

/// The edge-split graph: vertices of G and one edge eps(n, v) for each v ∈ r(e_n).
/// Requires every range to be finite.
BuiltGraph edge_split_graph(const Ultragraph& g, const BuildParams& params);

/// E⁰_rg = G⁰_rg ⊔ Δ on the non-frontier part of `e`.
Report check_regular(Builder& b, const BuiltGraph& e);

/// Set identities for all n and ω up to `depth`, plus pointwise checks of the
/// σ-dependent sets for vertices v_m, m <= vertex_bound.
Report verify_set_identities(Builder& b, std::int64_t depth, std::int64_t vertex_bound);

}  // namespace ugraph
