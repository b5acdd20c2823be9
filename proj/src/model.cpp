#include "ugraph/model.hpp"

#include "ugraph/errors.hpp"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "json.hpp"

namespace ugraph {

// ---------------------------------------------------------------------------
// BinaryWord
// ---------------------------------------------------------------------------

BinaryWord::BinaryWord(std::string bits) : bits_(std::move(bits)) {
    if (bits_.find_first_not_of("01") != std::string::npos) {
        throw std::invalid_argument("binary word '" + bits_ + "' contains characters other than 0 and 1");
    }
}

BinaryWord BinaryWord::zeros_then_one(std::size_t k) { return BinaryWord(std::string(k, '0') + "1"); }

BinaryWord BinaryWord::zeros(std::size_t n) { return BinaryWord(std::string(n, '0')); }

bool BinaryWord::bit(std::size_t i) const {
    if (i < 1 || i > bits_.size()) throw std::out_of_range("word coordinate out of range");
    return bits_[i - 1] == '1';
}

BinaryWord BinaryWord::restrict_to(std::size_t m) const {
    if (m > bits_.size()) throw std::out_of_range("restriction longer than the word");
    BinaryWord out;
    out.bits_ = bits_.substr(0, m);
    return out;
}

BinaryWord BinaryWord::child(bool b) const {
    BinaryWord out;
    out.bits_ = bits_ + (b ? '1' : '0');
    return out;
}

bool BinaryWord::is_all_zero() const noexcept { return bits_.find('1') == std::string::npos; }

bool BinaryWord::is_gamma0_shape() const noexcept {
    return !bits_.empty() && bits_.back() == '1' && bits_.find('1') == bits_.size() - 1;
}

bool BinaryWord::is_prefix_of(const BinaryWord& other) const noexcept {
    return bits_.size() <= other.bits_.size() && other.bits_.compare(0, bits_.size(), bits_) == 0;
}

std::string BinaryWord::compact() const {
    std::string out;
    std::size_t i = 0;
    while (i < bits_.size()) {
        if (bits_[i] == '0') {
            std::size_t j = i;
            while (j < bits_.size() && bits_[j] == '0') ++j;
            if (j - i >= 8) {
                out += "0^{" + std::to_string(j - i) + "}";
            } else {
                out.append(j - i, '0');
            }
            i = j;
        } else {
            out += '1';
            ++i;
        }
    }
    return out;
}

std::strong_ordering BinaryWord::operator<=>(const BinaryWord& other) const noexcept {
    if (auto c = bits_.size() <=> other.bits_.size(); c != 0) return c;
    return bits_.compare(other.bits_) <=> 0;
}

// ---------------------------------------------------------------------------
// EVertex / EEdge
// ---------------------------------------------------------------------------

std::string EVertex::to_string() const {
    std::string s = is_vertex() ? v.to_string() : w.str();
    return tilde ? s + "~" : s;
}

std::strong_ordering EVertex::operator<=>(const EVertex& other) const noexcept {
    if (auto c = tilde <=> other.tilde; c != 0) return c;
    if (auto c = static_cast<int>(kind) <=> static_cast<int>(other.kind); c != 0) return c;
    if (is_vertex()) return v <=> other.v;
    return w <=> other.w;
}

std::string EEdge::to_string() const {
    std::string s = is_bar() ? "bar(" + x.to_string() + ")"
                             : "eps(" + std::to_string(n.value) + "," + x.to_string() + ")";
    return tilde ? s + "~" : s;
}

std::strong_ordering EEdge::operator<=>(const EEdge& other) const noexcept {
    if (auto c = tilde <=> other.tilde; c != 0) return c;
    if (auto c = static_cast<int>(kind) <=> static_cast<int>(other.kind); c != 0) return c;
    if (auto c = n <=> other.n; c != 0) return c;
    return x <=> other.x;
}

// ---------------------------------------------------------------------------
// Ultragraph
// ---------------------------------------------------------------------------

struct Ultragraph::Impl {
    std::optional<dsl::UltragraphSpec> spec;
    std::optional<std::int64_t> vertex_count;
    std::vector<Edge> explicit_edges;

    mutable std::shared_mutex mutex;
    mutable std::map<std::int64_t, Edge> cache;
};

Ultragraph Ultragraph::finite(std::int64_t vertex_count, std::vector<Edge> edges) {
    if (vertex_count < 1) throw ValidationError("an ultragraph needs at least one vertex");
    const UPSet universe = UPSet::interval(1, vertex_count);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string name = "e" + std::to_string(i + 1);
        if (edges[i].source.value < 1 || edges[i].source.value > vertex_count) {
            throw ValidationError("source of " + name + " lies outside the vertex universe");
        }
        if (edges[i].range.is_empty()) throw EmptyRangeError("range of " + name + " is empty");
        if (!edges[i].range.is_subset_of(universe)) {
            throw ValidationError("range of " + name + " leaves the vertex universe");
        }
    }
    Ultragraph g;
    g.impl_ = std::make_shared<Impl>();
    g.impl_->vertex_count = vertex_count;
    g.impl_->explicit_edges = std::move(edges);
    return g;
}

Ultragraph Ultragraph::from_spec(dsl::UltragraphSpec spec) {
    Ultragraph g;
    g.impl_ = std::make_shared<Impl>();
    g.impl_->vertex_count = spec.finite_universe;
    g.impl_->spec = std::move(spec);
    return g;
}

std::optional<std::int64_t> Ultragraph::universe_size() const { return impl_->vertex_count; }

UPSet Ultragraph::universe() const {
    return impl_->vertex_count ? UPSet::interval(1, *impl_->vertex_count) : UPSet::all();
}

bool Ultragraph::in_universe(VertexId v) const {
    return v.value >= 1 && (!impl_->vertex_count || v.value <= *impl_->vertex_count);
}

std::optional<std::int64_t> Ultragraph::edge_count() const {
    if (impl_->spec) return impl_->spec->edge_count();
    return static_cast<std::int64_t>(impl_->explicit_edges.size());
}

bool Ultragraph::has_edge(EdgeId n) const {
    if (n.value < 1) return false;
    auto count = edge_count();
    return !count || n.value <= *count;
}

VertexId Ultragraph::source(EdgeId n) const {
    if (!impl_->spec) {
        if (!has_edge(n)) throw UncoveredIndex("no edge " + n.to_string());
        return impl_->explicit_edges[static_cast<std::size_t>(n.value - 1)].source;
    }
    range(n);
    std::shared_lock lock(impl_->mutex);
    return impl_->cache.at(n.value).source;
}

const UPSet& Ultragraph::range(EdgeId n) const {
    if (!impl_->spec) {
        if (!has_edge(n)) throw UncoveredIndex("no edge " + n.to_string());
        return impl_->explicit_edges[static_cast<std::size_t>(n.value - 1)].range;
    }
    {
        std::shared_lock lock(impl_->mutex);
        auto it = impl_->cache.find(n.value);
        if (it != impl_->cache.end()) return it->second.range;
    }
    auto [src, r] = dsl::instantiate_edge(*impl_->spec, n);
    std::unique_lock lock(impl_->mutex);
    auto [it, inserted] = impl_->cache.emplace(n.value, Edge{src, std::move(r)});
    (void)inserted;
    return it->second.range;
}

std::optional<std::int64_t> Ultragraph::out_degree(VertexId v) const {
    if (!in_universe(v)) throw ValidationError(v.to_string() + " lies outside the vertex universe");
    if (!impl_->spec) {
        return std::count_if(impl_->explicit_edges.begin(), impl_->explicit_edges.end(),
                             [&](const Edge& e) { return e.source == v; });
    }
    std::int64_t count = 0;
    for (const dsl::EdgeClause& c : impl_->spec->clauses) {
        if (const auto* ce = std::get_if<dsl::ConcreteEdge>(&c)) {
            if (ce->source == v) ++count;
        } else {
            const auto& fc = std::get<dsl::FamilyClause>(c);
            if (fc.source.a == 0) {
                if (fc.source.b == v.value) return std::nullopt;
            } else {
                std::int64_t diff = v.value - fc.source.b;
                if (diff % fc.source.a == 0 && diff / fc.source.a >= 1) ++count;
            }
        }
    }
    return count;
}

std::vector<EdgeId> Ultragraph::edges_from(VertexId v, std::int64_t max_index) const {
    std::vector<EdgeId> out;
    if (!impl_->spec) {
        for (std::size_t i = 0; i < impl_->explicit_edges.size() && static_cast<std::int64_t>(i) < max_index; ++i) {
            if (impl_->explicit_edges[i].source == v) out.emplace_back(static_cast<std::int64_t>(i + 1));
        }
        return out;
    }
    for (const dsl::EdgeClause& c : impl_->spec->clauses) {
        if (const auto* ce = std::get_if<dsl::ConcreteEdge>(&c)) {
            if (ce->source == v && ce->index.value <= max_index) out.push_back(ce->index);
        } else {
            const auto& fc = std::get<dsl::FamilyClause>(c);
            if (fc.source.a == 0) {
                if (fc.source.b != v.value) continue;
                for (std::int64_t k = 1; fc.edge_index.eval(k) <= max_index; ++k) out.emplace_back(fc.edge_index.eval(k));
            } else {
                std::int64_t diff = v.value - fc.source.b;
                if (diff % fc.source.a != 0 || diff / fc.source.a < 1) continue;
                std::int64_t n = fc.edge_index.eval(diff / fc.source.a);
                if (n <= max_index) out.emplace_back(n);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Ultragraph::is_regular(VertexId v) const {
    auto d = out_degree(v);
    return d && *d > 0;
}

std::optional<UPSet> Ultragraph::declared_w_infinity() const {
    if (!impl_->spec || !impl_->spec->winf) return std::nullopt;
    return impl_->spec->winf->elaborate() & universe();
}

const dsl::UltragraphSpec* Ultragraph::spec() const { return impl_->spec ? &*impl_->spec : nullptr; }

UPSet Ultragraph::r_lambda_mu(const std::set<EdgeId>& lambda, const std::set<EdgeId>& mu) const {
    if (lambda.empty()) throw InvalidIndexSets("lambda must be nonempty");
    for (EdgeId e : lambda) {
        if (mu.count(e)) throw InvalidIndexSets("lambda and mu share " + e.to_string());
    }
    UPSet out = universe();
    for (EdgeId e : lambda) out = out & range(e);
    for (EdgeId f : mu) out = out - range(f);
    return out;
}

UPSet Ultragraph::r_omega(const BinaryWord& w) const {
    if (w.is_empty() || w.is_all_zero()) throw AllZeroWord("r(" + w.str() + ") needs a word with at least one 1");
    std::set<EdgeId> lambda, mu;
    for (std::size_t i = 1; i <= w.length(); ++i) {
        (w.bit(i) ? lambda : mu).insert(EdgeId(static_cast<std::int64_t>(i)));
    }
    return r_lambda_mu(lambda, mu);
}

std::string Ultragraph::describe() const {
    std::ostringstream os;
    os << "vertices: " << (impl_->vertex_count ? std::to_string(*impl_->vertex_count) : "infinite");
    auto count = edge_count();
    os << ", edges: " << (count ? std::to_string(*count) : "infinite");
    return os.str();
}

std::vector<VertexId> regular_vertices(const Ultragraph& g, std::int64_t horizon) {
    std::vector<VertexId> out;
    for (std::int64_t m = 1; m <= horizon && g.in_universe(VertexId(m)); ++m) {
        if (g.is_regular(VertexId(m))) out.emplace_back(m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// BuiltGraph
// ---------------------------------------------------------------------------

void BuiltGraph::add_vertex(const EVertex& x, bool frontier) {
    if (!index_.count(x)) {
        index_.emplace(x, vertices_.size());
        vertices_.push_back(x);
    }
    if (frontier) frontier_.insert(x);
}

void BuiltGraph::mark_frontier(const EVertex& x) {
    if (!contains(x)) throw std::logic_error("frontier flag on absent vertex " + x.to_string());
    frontier_.insert(x);
}

void BuiltGraph::add_edge(BuiltEdge e) {
    if (!contains(e.source) || !contains(e.range)) {
        throw std::logic_error("edge " + e.label.to_string() + " has an endpoint outside the graph");
    }
    if (edge_index_.count(e.label)) return;
    std::size_t id = edges_.size();
    edge_index_.emplace(e.label, id);
    out_[e.source].push_back(id);
    in_[e.range].push_back(id);
    edges_.push_back(std::move(e));
}

bool BuiltGraph::is_frontier(const EVertex& x) const { return frontier_.count(x) != 0; }

std::vector<std::size_t> BuiltGraph::out_edges(const EVertex& x) const {
    auto it = out_.find(x);
    return it == out_.end() ? std::vector<std::size_t>{} : it->second;
}

std::vector<std::size_t> BuiltGraph::in_edges(const EVertex& x) const {
    auto it = in_.find(x);
    return it == in_.end() ? std::vector<std::size_t>{} : it->second;
}

std::optional<std::size_t> BuiltGraph::find_edge(const EEdge& label) const {
    auto it = edge_index_.find(label);
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

void BuiltGraph::normalize() {
    std::vector<EVertex> vs = vertices_;
    std::vector<BuiltEdge> es = edges_;
    std::sort(vs.begin(), vs.end());
    std::sort(es.begin(), es.end(), [](const BuiltEdge& a, const BuiltEdge& b) { return a.label < b.label; });
    std::set<EVertex> fr = frontier_;
    BuildParams p = params;
    *this = BuiltGraph{};
    params = p;
    for (const EVertex& x : vs) add_vertex(x, fr.count(x) != 0);
    for (BuiltEdge& e : es) add_edge(std::move(e));
}

namespace {

nlohmann::json vertex_json(const EVertex& x) {
    nlohmann::json j;
    if (x.is_vertex()) {
        j["kind"] = "v";
        j["m"] = x.v.value;
    } else {
        j["kind"] = "w";
        j["bits"] = x.w.str();
    }
    if (x.tilde) j["tilde"] = true;
    return j;
}

std::string dot_id(const EVertex& x) {
    std::string id = x.is_vertex() ? "v" + std::to_string(x.v.value) : "w" + x.w.str();
    return "\"" + id + (x.tilde ? "~" : "") + "\"";
}

}  // namespace

std::string BuiltGraph::to_json() const {
    nlohmann::json j;
    j["params"] = {{"word_depth", params.word_depth},
                   {"vertex_horizon", params.vertex_horizon},
                   {"edge_horizon", params.edge_horizon}};
    j["vertices"] = nlohmann::json::array();
    for (const EVertex& x : vertices_) {
        nlohmann::json v = vertex_json(x);
        v["frontier"] = is_frontier(x);
        j["vertices"].push_back(std::move(v));
    }
    j["edges"] = nlohmann::json::array();
    for (const BuiltEdge& e : edges_) {
        nlohmann::json ej;
        ej["kind"] = e.label.is_bar() ? "bar" : "eps";
        if (e.label.is_eps()) ej["n"] = e.label.n.value;
        ej["x"] = vertex_json(e.label.x);
        if (e.label.tilde) ej["tilde"] = true;
        ej["source"] = vertex_json(e.source);
        ej["range"] = vertex_json(e.range);
        j["edges"].push_back(std::move(ej));
    }
    return j.dump(2);
}

std::string BuiltGraph::to_dot() const {
    std::ostringstream os;
    os << "digraph E {\n  rankdir=LR;\n";
    for (const EVertex& x : vertices_) {
        os << "  " << dot_id(x) << " [label=\"" << (x.is_vertex() ? x.v.to_string() : x.w.str())
           << (x.tilde ? "~" : "") << "\", shape=" << (x.is_vertex() ? "circle" : "box");
        if (is_frontier(x)) os << ", style=dashed";
        os << "];\n";
    }
    for (const BuiltEdge& e : edges_) {
        os << "  " << dot_id(e.source) << " -> " << dot_id(e.range);
        if (e.label.is_bar()) {
            os << " [arrowhead=normalnormal, color=black]";
        } else {
            os << " [label=\"" << e.label.n.value << "\"]";
        }
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

bool operator==(const BuiltGraph& a, const BuiltGraph& b) {
    if (a.vertices_.size() != b.vertices_.size() || a.edges_.size() != b.edges_.size()) return false;
    for (const EVertex& x : a.vertices_) {
        if (!b.contains(x) || a.is_frontier(x) != b.is_frontier(x)) return false;
    }
    for (const BuiltEdge& e : a.edges_) {
        auto id = b.find_edge(e.label);
        if (!id) return false;
        const BuiltEdge& f = b.edges_[*id];
        if (!(f.source == e.source) || !(f.range == e.range)) return false;
    }
    return true;
}

}  // namespace ugraph
