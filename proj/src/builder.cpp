#include "ugraph/builder.hpp"

#include "ugraph/errors.hpp"

#include <algorithm>
#include <sstream>

namespace ugraph {

namespace {

using Lock = std::lock_guard<std::recursive_mutex>;

std::int64_t len(const BinaryWord& w) { return static_cast<std::int64_t>(w.length()); }

std::string join_words(const std::vector<BinaryWord>& ws) {
    std::string out;
    for (const BinaryWord& w : ws) out += (out.empty() ? "" : ",") + w.str();
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// InfinityOracle
// ---------------------------------------------------------------------------

InfinityOracle InfinityOracle::none() {
    InfinityOracle o;
    o.set_ = UPSet::empty();
    return o;
}

InfinityOracle InfinityOracle::declared(UPSet set) {
    InfinityOracle o;
    o.set_ = std::move(set);
    return o;
}

InfinityOracle InfinityOracle::unknown() { return InfinityOracle{}; }

InfinityOracle InfinityOracle::for_graph(const Ultragraph& g) {
    if (auto d = g.declared_w_infinity()) return declared(*d);
    return none();
}

InfinityOracle::Answer InfinityOracle::candidate(VertexId v) const {
    if (!set_) return Answer::Unknown;
    return set_->contains(v.value) ? Answer::Yes : Answer::No;
}

std::string InfinityOracle::describe() const {
    if (!set_) return "unknown";
    if (set_->is_empty()) return "empty";
    return "declared " + set_->describe();
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

void Report::add(bool pass, std::string identity, std::string witness) {
    checks.push_back(Check{pass, std::move(identity), std::move(witness)});
}

void Report::summarize(const std::string& identity, std::size_t checked, const std::vector<std::string>& failures) {
    if (failures.empty()) {
        add(true, identity, "checked=" + std::to_string(checked));
    } else {
        add(false, identity,
            failures.front() + " (" + std::to_string(failures.size()) + " of " + std::to_string(checked) + " failed)");
    }
}

bool Report::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void Report::append(const Report& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }

std::string Report::to_string() const {
    std::ostringstream os;
    for (const Check& c : checks) os << (c.pass ? "PASS " : "FAIL ") << c.identity << " " << c.witness << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Builder
// ---------------------------------------------------------------------------

Builder::Builder(Ultragraph g, std::optional<InfinityOracle> oracle, BuilderOptions opts)
    : g_(std::move(g)), oracle_(oracle ? *oracle : InfinityOracle::for_graph(g_)), opts_(opts) {}

void Builder::require_length(std::size_t n) const {
    auto max = max_word_length();
    if (max && static_cast<std::int64_t>(n) > *max) {
        throw UncoveredIndex("words longer than the " + std::to_string(*max) + " listed edges have no range");
    }
}

const UPSet& Builder::r(const BinaryWord& w) {
    Lock lock(mutex_);
    require_length(w.length());
    if (auto it = r_memo_.find(w); it != r_memo_.end()) return it->second;
    // Walk down to the longest memoized prefix, then extend one edge at a time.
    std::size_t known = w.length();
    while (known > 0 && !r_memo_.count(w.restrict_to(known))) --known;
    if (known == 0) r_memo_.try_emplace(BinaryWord(), g_.universe());
    for (std::size_t m = known + 1; m <= w.length(); ++m) {
        const UPSet& parent = r_memo_.at(w.restrict_to(m - 1));
        const UPSet& e = g_.range(EdgeId(static_cast<std::int64_t>(m)));
        r_memo_.emplace(w.restrict_to(m), w.bit(m) ? (parent & e) : (parent - e));
    }
    return r_memo_.at(w);
}

bool Builder::in_delta(const BinaryWord& w) {
    if (w.is_empty() || w.is_all_zero()) return false;
    auto max = max_word_length();
    if (max && len(w) > *max) return false;
    return !r(w).is_finite();
}

std::vector<BinaryWord> Builder::delta_level(std::int64_t n) {
    Lock lock(mutex_);
    if (n < 1) return {};
    if (auto it = delta_memo_.find(n); it != delta_memo_.end()) return it->second;
    std::vector<BinaryWord> level;
    auto max = max_word_length();
    if (!max || n <= *max) {
        for (const BinaryWord& p : delta_level(n - 1)) {
            for (bool b : {false, true}) {
                if (in_delta(p.child(b))) level.push_back(p.child(b));
            }
        }
        BinaryWord root = BinaryWord::zeros_then_one(static_cast<std::size_t>(n - 1));
        if (in_delta(root)) level.push_back(root);
        std::sort(level.begin(), level.end());
    }
    delta_memo_[n] = level;
    return level;
}

std::vector<BinaryWord> Builder::delta_up_to(std::int64_t depth) {
    std::vector<BinaryWord> out;
    for (std::int64_t n = 1; n <= depth; ++n) {
        auto level = delta_level(n);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

std::vector<BinaryWord> Builder::gamma0_up_to(std::int64_t depth) {
    std::vector<BinaryWord> out;
    auto max = max_word_length();
    for (std::int64_t n = 1; n <= depth && (!max || n <= *max); ++n) {
        BinaryWord root = BinaryWord::zeros_then_one(static_cast<std::size_t>(n - 1));
        if (in_delta(root)) out.push_back(root);
    }
    return out;
}

std::vector<BinaryWord> Builder::gamma_plus_up_to(std::int64_t depth) {
    std::vector<BinaryWord> out;
    for (const BinaryWord& w : delta_up_to(depth)) {
        if (!w.is_gamma0_shape()) out.push_back(w);
    }
    return out;
}

BinaryWord Builder::chain_word(VertexId v, std::int64_t n) {
    std::string bits;
    bits.reserve(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
    for (std::int64_t i = 1; i <= n; ++i) bits += g_.range(EdgeId(i)).contains(v.value) ? '1' : '0';
    return BinaryWord(std::move(bits));
}

std::int64_t Builder::first_range_index(VertexId v) {
    Lock lock(mutex_);
    if (auto it = first_index_memo_.find(v); it != first_index_memo_.end()) return it->second;
    if (!g_.in_universe(v)) throw ValidationError(v.to_string() + " lies outside the vertex universe");
    auto max = max_word_length();
    std::int64_t limit = max ? *max : dsl::containment_bound(*g_.spec(), v.value);
    std::int64_t found = 0;
    for (std::int64_t n = 1; n <= std::min(limit, opts_.search_cap); ++n) {
        if (g_.range(EdgeId(n)).contains(v.value)) {
            found = n;
            break;
        }
    }
    if (found == 0 && limit > opts_.search_cap) {
        throw UnknownAtDepth("locating " + v.to_string() + " needs edges up to e" + std::to_string(limit) +
                                 ", beyond the search cap " + std::to_string(opts_.search_cap),
                             opts_.search_cap);
    }
    first_index_memo_[v] = found;
    return found;
}

Classification Builder::classify(VertexId v) {
    Lock lock(mutex_);
    std::int64_t n0 = first_range_index(v);
    if (n0 == 0) return {};
    BinaryWord root = BinaryWord::zeros_then_one(static_cast<std::size_t>(n0 - 1));
    if (!in_delta(root)) return {};
    return Classification{true, root};
}

std::optional<std::int64_t> Builder::w_infinity_rank(VertexId v) {
    Lock lock(mutex_);
    auto answer = oracle_.candidate(v);
    if (answer == InfinityOracle::Answer::Unknown) throw OracleUnknown("no W-infinity answer for " + v.to_string());
    if (answer == InfinityOracle::Answer::No) return std::nullopt;
    if (!classify(v).w_plus) return std::nullopt;
    while (w_inf_scanned_ < v.value) {
        ++w_inf_scanned_;
        VertexId u(w_inf_scanned_);
        if (oracle_.candidate(u) == InfinityOracle::Answer::Yes && classify(u).w_plus) w_inf_.push_back(u);
    }
    auto it = std::lower_bound(w_inf_.begin(), w_inf_.end(), v);
    return static_cast<std::int64_t>(it - w_inf_.begin()) + 1;
}

std::vector<VertexId> Builder::w_infinity_prefix(std::int64_t count) {
    Lock lock(mutex_);
    const auto& set = oracle_.declared_set();
    if (!set) throw OracleUnknown("W-infinity is unknown");
    std::optional<std::int64_t> last = set->is_finite() ? set->max_element() : std::nullopt;
    if (set->is_finite() && !last) w_inf_exhausted_ = true;
    while (static_cast<std::int64_t>(w_inf_.size()) < count && !w_inf_exhausted_) {
        ++w_inf_scanned_;
        if (last && w_inf_scanned_ > *last) {
            w_inf_exhausted_ = true;
            break;
        }
        if (!g_.in_universe(VertexId(w_inf_scanned_))) {
            w_inf_exhausted_ = true;
            break;
        }
        VertexId u(w_inf_scanned_);
        if (set->contains(u.value) && classify(u).w_plus) w_inf_.push_back(u);
    }
    std::size_t n = std::min<std::size_t>(w_inf_.size(), static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
    return std::vector<VertexId>(w_inf_.begin(), w_inf_.begin() + static_cast<std::ptrdiff_t>(n));
}

bool Builder::in_w_infinity(VertexId v) { return w_infinity_rank(v).has_value(); }

BinaryWord Builder::canonical_sigma(VertexId v) {
    Classification c = classify(v);
    if (!c.w_plus) return {};
    const std::int64_t n0 = len(c.witness);
    auto max = max_word_length();

    if (auto rank = w_infinity_rank(v)) {
        std::int64_t n = std::max(*rank, n0);
        if (n > opts_.sigma_cap) {
            throw NonTermination("sigma(" + v.to_string() + ") needs words of length " + std::to_string(n) +
                                 ", beyond the cap " + std::to_string(opts_.sigma_cap));
        }
        if ((max && n > *max) || !in_delta(chain_word(v, n))) {
            throw ValidationError("declared W-infinity member " + v.to_string() + " (rank " + std::to_string(*rank) +
                                  ") lies in no word of Delta of length " + std::to_string(n));
        }
        return chain_word(v, n);
    }

    BinaryWord w = c.witness;
    while (true) {
        std::int64_t next = len(w) + 1;
        if (max && next > *max) return w;
        if (next > opts_.sigma_cap) {
            throw NonTermination("the chain of " + v.to_string() + " stays in Delta up to length " +
                                 std::to_string(opts_.sigma_cap) + "; is it in W-infinity?");
        }
        BinaryWord ext = w.child(g_.range(EdgeId(next)).contains(v.value));
        try {
            if (!in_delta(ext)) return w;
        } catch (const PeriodOverflow&) {
            throw NonTermination("the chain of " + v.to_string() + " is still in Delta at length " +
                                 std::to_string(len(w)) + " where ranges outgrow the period limit; is it in W-infinity?");
        }
        w = std::move(ext);
    }
}

BinaryWord Builder::sigma(VertexId v) {
    Lock lock(mutex_);
    if (override_) {
        if (auto forced = override_(v)) return *forced;
    }
    if (auto it = sigma_memo_.find(v); it != sigma_memo_.end()) return it->second;
    BinaryWord s = canonical_sigma(v);
    sigma_memo_.emplace(v, s);
    return s;
}

void Builder::set_sigma_override(std::function<std::optional<BinaryWord>(VertexId)> hook) {
    Lock lock(mutex_);
    override_ = std::move(hook);
}

std::vector<EVertex> Builder::x_set(EdgeId n) {
    Lock lock(mutex_);
    const UPSet& range = g_.range(n);
    std::vector<BinaryWord> words;
    UPSet covered = UPSet::empty();
    for (const BinaryWord& w : delta_level(n.value)) {
        if (w.bit(w.length())) {
            words.push_back(w);
            covered = covered | r(w);
        }
    }
    UPSet f1 = range - covered;
    if (!f1.is_finite()) throw std::logic_error("X(" + std::to_string(n.value) + ") candidate set is infinite");
    std::set<std::int64_t> candidates;
    for (auto m : f1.members()) candidates.insert(m);
    const std::vector<VertexId> early = covered.is_empty() ? std::vector<VertexId>{} : w_infinity_prefix(n.value - 1);
    for (VertexId u : early) {
        if (range.contains(u.value)) candidates.insert(u.value);
    }
    std::vector<EVertex> out;
    for (std::int64_t m : candidates) {
        if (len(sigma(VertexId(m))) < n.value) out.push_back(EVertex::vertex(VertexId(m)));
    }
    for (BinaryWord& w : words) out.push_back(EVertex::word(std::move(w)));
    return out;
}

UPSet Builder::r_prime(const BinaryWord& w) {
    Lock lock(mutex_);
    if (w.is_empty() || w.is_all_zero()) throw AllZeroWord("r'(" + w.str() + ") needs a word with at least one 1");
    const UPSet rw = r(w);
    const std::int64_t n = len(w);
    if (rw.is_finite()) {
        std::vector<std::int64_t> keep;
        for (auto m : rw.members()) {
            if (len(sigma(VertexId(m))) >= n) keep.push_back(m);
        }
        return UPSet::from_members(keep);
    }
    // Only W∞ members can have a σ-word shorter than a Δ-word containing them,
    // and those have rank < |ω|.
    std::vector<std::int64_t> drop;
    for (VertexId u : w_infinity_prefix(n - 1)) {
        if (rw.contains(u.value) && len(sigma(u)) < n) drop.push_back(u.value);
    }
    return rw - UPSet::from_members(drop);
}

UPSet Builder::sigma_inverse(const BinaryWord& w) {
    Lock lock(mutex_);
    if (!in_delta(w)) return UPSet::empty();
    auto max = max_word_length();
    if (max && len(w) == *max) return r_prime(w);
    std::set<std::int64_t> candidates;
    for (bool b : {false, true}) {
        BinaryWord c = w.child(b);
        if (!in_delta(c)) {
            for (auto m : r(c).members()) candidates.insert(m);
        }
    }
    const UPSet& rw = r(w);
    for (VertexId u : w_infinity_prefix(len(w))) {
        if (rw.contains(u.value)) candidates.insert(u.value);
    }
    std::vector<std::int64_t> out;
    for (std::int64_t m : candidates) {
        if (sigma(VertexId(m)) == w) out.push_back(m);
    }
    return UPSet::from_members(out);
}

// ---------------------------------------------------------------------------
// E
// ---------------------------------------------------------------------------

namespace {

std::int64_t clamp_vertices(const Ultragraph& g, std::int64_t m) {
    auto size = g.universe_size();
    return size ? std::min(m, *size) : m;
}

std::int64_t clamp_edges(const Ultragraph& g, std::int64_t n) {
    auto count = g.edge_count();
    return count ? std::min(n, *count) : n;
}

/// A vertex misses out-edges when it emits an edge beyond the edge horizon.
bool emits_beyond(const Ultragraph& g, VertexId v, std::int64_t edge_horizon) {
    auto deg = g.out_degree(v);
    if (!deg) return true;
    return static_cast<std::int64_t>(g.edges_from(v, edge_horizon).size()) < *deg;
}

}  // namespace

BuiltGraph build_e(Builder& b, const BuildParams& params) {
    if (params.word_depth < 1 || params.vertex_horizon < 1 || params.edge_horizon < 1) {
        throw ValidationError("build parameters must be positive");
    }
    const Ultragraph& g = b.graph();
    const std::int64_t M = clamp_vertices(g, params.vertex_horizon);
    const std::int64_t D = clamp_edges(g, params.word_depth);
    const std::int64_t N = clamp_edges(g, params.edge_horizon);
    const auto max_len = b.max_word_length();

    BuiltGraph e;
    e.params = params;
    for (std::int64_t m = 1; m <= M; ++m) e.add_vertex(EVertex::vertex(VertexId(m)), emits_beyond(g, VertexId(m), N));
    const std::vector<BinaryWord> words = b.delta_up_to(D);
    for (const BinaryWord& w : words) e.add_vertex(EVertex::word(w), len(w) == D && (!max_len || D < *max_len));

    for (std::int64_t m = 1; m <= M; ++m) {
        BinaryWord s = b.sigma(VertexId(m));
        if (s.is_empty() || len(s) > D) continue;
        EVertex x = EVertex::vertex(VertexId(m));
        e.add_edge(BuiltEdge{EEdge::bar(x), EVertex::word(s), x});
    }
    for (const BinaryWord& w : words) {
        if (w.is_gamma0_shape()) continue;
        EVertex x = EVertex::word(w);
        e.add_edge(BuiltEdge{EEdge::bar(x), EVertex::word(w.parent()), x});
    }
    // Words whose σ-fibre reaches past the vertex horizon lose Bar edges.
    for (const BinaryWord& w : words) {
        UPSet fibre = b.sigma_inverse(w);
        if (!fibre.is_finite() || (!fibre.is_empty() && *fibre.max_element() > M)) e.mark_frontier(EVertex::word(w));
    }
    for (std::int64_t n = 1; n <= N; ++n) {
        VertexId src = g.source(EdgeId(n));
        if (src.value > M) continue;
        EVertex s = EVertex::vertex(src);
        for (EVertex& x : b.x_set(EdgeId(n))) {
            if (!e.contains(x)) {
                e.mark_frontier(s);
                continue;
            }
            e.add_edge(BuiltEdge{EEdge::eps(EdgeId(n), x), s, x});
        }
    }
    e.normalize();
    return e;
}

BuiltGraph edge_split_graph(const Ultragraph& g, const BuildParams& params) {
    const std::int64_t M = clamp_vertices(g, params.vertex_horizon);
    const std::int64_t N = clamp_edges(g, params.edge_horizon);
    BuiltGraph e;
    e.params = params;
    for (std::int64_t m = 1; m <= M; ++m) e.add_vertex(EVertex::vertex(VertexId(m)), emits_beyond(g, VertexId(m), N));
    for (std::int64_t n = 1; n <= N; ++n) {
        const UPSet& range = g.range(EdgeId(n));
        if (!range.is_finite()) throw ValidationError("edge-split graph needs finite ranges; r(e" + std::to_string(n) + ") is infinite");
        VertexId src = g.source(EdgeId(n));
        if (src.value > M) continue;
        EVertex s = EVertex::vertex(src);
        for (auto m : range.members()) {
            EVertex x = EVertex::vertex(VertexId(m));
            if (!e.contains(x)) {
                e.mark_frontier(s);
                continue;
            }
            e.add_edge(BuiltEdge{EEdge::eps(EdgeId(n), x), s, x});
        }
    }
    e.normalize();
    return e;
}

Report check_regular(Builder& b, const BuiltGraph& e) {
    const Ultragraph& g = b.graph();
    std::vector<std::string> failures;
    std::size_t checked = 0, skipped = 0;
    const std::int64_t N = clamp_edges(g, e.params.edge_horizon);
    for (const EVertex& x : e.vertices()) {
        if (x.tilde) continue;
        if (e.is_frontier(x)) {
            // An infinite emitter of G must emit an E-edge for every listed
            // ultraedge whose X-set meets the window, so its E-degree is unbounded.
            if (x.is_vertex() && !g.out_degree(x.v)) {
                ++checked;
                std::set<std::int64_t> seen;
                for (std::size_t id : e.out_edges(x)) seen.insert(e.edges()[id].label.n.value);
                for (EdgeId n : g.edges_from(x.v, N)) {
                    auto xs = b.x_set(n);
                    bool visible = std::any_of(xs.begin(), xs.end(), [&](const EVertex& y) { return e.contains(y); });
                    if (visible && !seen.count(n.value)) {
                        failures.push_back(x.to_string() + " has no E-edge for " + n.to_string());
                        break;
                    }
                }
            } else {
                ++skipped;
            }
            continue;
        }
        ++checked;
        const bool regular_in_e = !e.out_edges(x).empty();
        const bool expected = x.is_word() || g.is_regular(x.v);
        if (regular_in_e != expected) {
            failures.push_back(x.to_string() + (regular_in_e ? " regular in E only" : " regular in G only"));
        }
    }
    Report rep;
    rep.summarize("regular-vertices", checked, failures);
    if (failures.empty() && skipped) rep.checks.back().witness += " frontier-skipped=" + std::to_string(skipped);
    return rep;
}

// ---------------------------------------------------------------------------
// Identities
// ---------------------------------------------------------------------------

namespace {

/// All words of length n (all-zero included) with nonempty range.
std::vector<BinaryWord> nonempty_words(Builder& b, std::int64_t n) {
    std::vector<BinaryWord> level{BinaryWord()};
    for (std::int64_t i = 1; i <= n; ++i) {
        std::vector<BinaryWord> next;
        for (const BinaryWord& w : level) {
            for (bool bit : {false, true}) {
                BinaryWord c = w.child(bit);
                if (!b.r(c).is_empty()) next.push_back(c);
            }
        }
        level = std::move(next);
    }
    return level;
}

/// Checks that `parts` are pairwise disjoint with union `whole`.
std::optional<std::string> disjoint_union(const UPSet& whole, const std::vector<std::pair<std::string, UPSet>>& parts) {
    UPSet acc = UPSet::empty();
    for (const auto& [name, part] : parts) {
        if (!acc.is_disjoint_from(part)) return "part " + name + " overlaps an earlier part";
        acc = acc | part;
    }
    if (!(acc == whole)) {
        UPSet missing = whole - acc, extra = acc - whole;
        if (!missing.is_empty()) return "union misses " + missing.describe(4);
        return "union has extra " + extra.describe(4);
    }
    return std::nullopt;
}

UPSet vertex_part(const std::vector<EVertex>& xs) {
    std::vector<std::int64_t> ms;
    for (const EVertex& x : xs) {
        if (x.is_vertex()) ms.push_back(x.v.value);
    }
    return UPSet::from_members(ms);
}

}  // namespace

Report verify_set_identities(Builder& b, std::int64_t depth, std::int64_t vertex_bound) {
    const Ultragraph& g = b.graph();
    const auto max_len = b.max_word_length();
    const std::int64_t D = clamp_edges(g, depth);
    const std::int64_t V = clamp_vertices(g, vertex_bound);
    Report rep;

    // Δ consistency: nonzero prefixes of Δ-words are in Δ; Δ-words have a Δ child.
    {
        std::vector<std::string> fails;
        std::size_t checked = 0;
        for (const BinaryWord& w : b.delta_up_to(D)) {
            ++checked;
            if (w.length() > 1 && !w.parent().is_all_zero() && !b.in_delta(w.parent())) {
                fails.push_back(w.str() + " has prefix outside Delta");
            }
            if ((!max_len || len(w) < *max_len) && !b.in_delta(w.child(false)) && !b.in_delta(w.child(true))) {
                fails.push_back(w.str() + " has no child in Delta");
            }
        }
        rep.summarize("delta-consistency", checked, fails);
    }

    // W₊ is the disjoint union of the Γ₀ ranges.
    {
        std::vector<std::string> fails;
        std::size_t checked = 0;
        const auto roots = b.gamma0_up_to(D);
        std::vector<std::pair<std::string, UPSet>> parts;
        UPSet acc = UPSet::empty();
        for (const BinaryWord& w : roots) {
            ++checked;
            if (!acc.is_disjoint_from(b.r(w))) fails.push_back("r(" + w.str() + ") overlaps an earlier Gamma0 range");
            acc = acc | b.r(w);
        }
        for (std::int64_t m = 1; m <= V; ++m) {
            ++checked;
            VertexId v(m);
            Classification c = b.classify(v);
            std::vector<BinaryWord> hits;
            for (const BinaryWord& w : roots) {
                if (b.r(w).contains(m)) hits.push_back(w);
            }
            bool witness_in_window = c.w_plus && len(c.witness) <= D;
            bool ok = witness_in_window ? (hits.size() == 1 && hits.front() == c.witness) : hits.empty();
            if (!ok) fails.push_back(v.to_string() + " lies in Gamma0 ranges {" + join_words(hits) + "}");
        }
        rep.summarize("w-plus-partition", checked, fails);
    }

    std::vector<std::string> off_delta_fails, finite_fails;
    std::size_t off_delta_checked = 0, finite_checked = 0;
    std::vector<std::string> split_fails, sigma_len_fails;
    std::size_t split_checked = 0, sigma_len_checked = 0;
    for (std::int64_t n = 1; n <= D; ++n) {
        for (const BinaryWord& w : nonempty_words(b, n)) {
            if (w.is_all_zero()) continue;
            const UPSet& rw = b.r(w);
            const UPSet rp = b.r_prime(w);
            const bool delta = b.in_delta(w);
            if (!delta) {
                ++off_delta_checked;
                if (!rp.is_empty()) off_delta_fails.push_back("r'(" + w.str() + ") = " + rp.describe(4));
            }
            if (rw.is_finite()) {
                ++finite_checked;
                if (!rp.is_empty()) finite_fails.push_back("r'(" + w.str() + ") = " + rp.describe(4));
            }

            // r(ω) = r′(ω) ⊔ {v ∈ r(ω) : |σ(v)| < |ω|}, the second part assembled
            // from the σ-fibres of the proper prefixes of ω.
            ++sigma_len_checked;
            UPSet shorter = UPSet::empty();
            for (std::int64_t j = 1; j < n; ++j) {
                BinaryWord p = w.restrict_to(static_cast<std::size_t>(j));
                if (b.in_delta(p)) shorter = shorter | (b.sigma_inverse(p) & rw);
            }
            if (rw.is_finite()) {
                std::vector<std::int64_t> w0;
                for (auto m : rw.members()) {
                    if (b.sigma(VertexId(m)).is_empty()) w0.push_back(m);
                }
                shorter = shorter | UPSet::from_members(w0);
            }
            if (auto err = disjoint_union(rw, {{"r'", rp}, {"shorter-sigma", shorter}})) {
                sigma_len_fails.push_back("omega=" + w.str() + ": " + *err);
            }

            if (delta && n < D) {
                ++split_checked;
                UPSet fibre = b.sigma_inverse(w);
                auto err = disjoint_union(rp, {{"r'(" + w.str() + "0)", b.r_prime(w.child(false))},
                                               {"r'(" + w.str() + "1)", b.r_prime(w.child(true))},
                                               {"sigma^-1", fibre}});
                if (err) split_fails.push_back("omega=" + w.str() + ": " + *err);
                for (std::int64_t m = 1; m <= V; ++m) {
                    if (rw.contains(m) && fibre.contains(m) != (b.sigma(VertexId(m)) == w)) {
                        split_fails.push_back("omega=" + w.str() + ": membership of v" + std::to_string(m) +
                                              " in sigma^-1 disagrees with sigma");
                    }
                }
            }
        }
    }
    rep.summarize("r-prime-empty-off-delta", off_delta_checked, off_delta_fails);

    // r(e_n) = (X(n) ∩ G⁰) ⊔ ⨆_{ω_n = 1} r′(ω), X(n) nonempty.
    {
        std::vector<std::string> fails, nonempty_fails;
        std::size_t checked = 0;
        for (std::int64_t n = 1; n <= D; ++n) {
            ++checked;
            const auto xs = b.x_set(EdgeId(n));
            if (xs.empty()) nonempty_fails.push_back("X(" + std::to_string(n) + ") is empty");
            const UPSet xg = vertex_part(xs);
            std::vector<std::pair<std::string, UPSet>> parts{{"X(n)", xg}};
            for (const BinaryWord& w : nonempty_words(b, n)) {
                if (w.bit(w.length())) parts.emplace_back("r'(" + w.str() + ")", b.r_prime(w));
            }
            if (auto err = disjoint_union(g.range(EdgeId(n)), parts)) {
                fails.push_back("n=" + std::to_string(n) + ": " + *err);
            }
            for (std::int64_t m = 1; m <= V; ++m) {
                if (!g.range(EdgeId(n)).contains(m)) continue;
                bool short_sigma = len(b.sigma(VertexId(m))) < n;
                if (xg.contains(m) != short_sigma) {
                    fails.push_back("n=" + std::to_string(n) + ": v" + std::to_string(m) +
                                    (short_sigma ? " has |sigma| < n but is missing from X(n)"
                                                 : " is in X(n) with |sigma| >= n"));
                }
            }
            for (const EVertex& x : xs) {
                if (x.is_word() && !(b.in_delta(x.w) && len(x.w) == n && x.w.bit(x.w.length()))) {
                    fails.push_back("n=" + std::to_string(n) + ": stray word " + x.w.str());
                }
            }
        }
        rep.summarize("edge-range-decomposition", checked, fails);
        rep.summarize("x-set-nonempty", checked, nonempty_fails);
    }
    rep.summarize("r-prime-split", split_checked, split_fails);
    rep.summarize("r-split-by-sigma-length", sigma_len_checked, sigma_len_fails);
    rep.summarize("finite-range-r-prime-empty", finite_checked, finite_fails);

    // σ soundness on v_1..v_V.
    {
        std::vector<std::string> fails;
        std::size_t checked = 0;
        for (std::int64_t m = 1; m <= V; ++m) {
            ++checked;
            VertexId v(m);
            Classification c = b.classify(v);
            BinaryWord s = b.sigma(v);
            if (!c.w_plus) {
                if (!s.is_empty()) fails.push_back(v.to_string() + " in W0 has sigma " + s.str());
                continue;
            }
            if (s.is_empty() || !b.in_delta(s) || !b.r(s).contains(m)) {
                fails.push_back(v.to_string() + " has unsound sigma '" + s.str() + "'");
                continue;
            }
            if (auto rank = b.w_infinity_rank(v); rank && *rank > len(s)) {
                fails.push_back(v.to_string() + " has W-infinity rank " + std::to_string(*rank) + " > |sigma|");
            }
        }
        rep.summarize("sigma-soundness", checked, fails);
    }
    return rep;
}

}  // namespace ugraph
