#include "ugraph/dsl.hpp"

#include "ugraph/errors.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace ugraph::dsl {

// ---------------------------------------------------------------------------
// Polynomials and affine forms
// ---------------------------------------------------------------------------

namespace {

std::string render_terms(const std::vector<std::pair<std::int64_t, std::string>>& terms) {
    std::string out;
    for (const auto& [coef, mono] : terms) {
        if (coef == 0) continue;
        std::int64_t mag = coef < 0 ? -coef : coef;
        if (out.empty()) {
            if (coef < 0) out += "-";
        } else {
            out += coef < 0 ? " - " : " + ";
        }
        if (mono.empty()) {
            out += std::to_string(mag);
        } else {
            if (mag != 1) out += std::to_string(mag) + "*";
            out += mono;
        }
    }
    return out.empty() ? "0" : out;
}

}  // namespace

std::string Poly::to_string(std::string_view param) const {
    std::string p(param);
    return render_terms({{c2, p + "^2"}, {c1, p}, {c0, ""}});
}

std::string Affine::to_string(std::string_view param) const {
    return render_terms({{a, std::string(param)}, {b, ""}});
}

// ---------------------------------------------------------------------------
// Range expressions
// ---------------------------------------------------------------------------

namespace {

RangeExprPtr make(RangeExpr e) { return std::make_shared<const RangeExpr>(std::move(e)); }

std::int64_t eval_param(const Poly& p, std::optional<std::int64_t> k) {
    if (p.degree() > 0 && !k) throw ValidationError("expression mentions the family parameter outside a family");
    return p.eval(k.value_or(0));
}

std::int64_t divisor_at(const Poly& p, std::optional<std::int64_t> k) {
    std::int64_t d = eval_param(p, k);
    if (d < 1) {
        throw ValidationError("divisor " + p.to_string("k") + " evaluates to " + std::to_string(d) +
                              (k ? " at k=" + std::to_string(*k) : std::string()) + "; divisors must be positive");
    }
    return d;
}

int precedence(RangeExpr::Kind k) {
    switch (k) {
        case RangeExpr::Kind::Or: return 0;
        case RangeExpr::Kind::And: return 1;
        case RangeExpr::Kind::Not: return 2;
        default: return 3;
    }
}

}  // namespace

RangeExprPtr RangeExpr::divides(Poly d) {
    RangeExpr e;
    e.kind = Kind::Divides;
    e.value = d;
    return make(std::move(e));
}

RangeExprPtr RangeExpr::compare(Kind op, Poly bound) {
    RangeExpr e;
    e.kind = op;
    e.value = bound;
    return make(std::move(e));
}

RangeExprPtr RangeExpr::set_literal(std::vector<Poly> items) {
    RangeExpr e;
    e.kind = Kind::SetLiteral;
    e.items = std::move(items);
    return make(std::move(e));
}

RangeExprPtr RangeExpr::all() {
    RangeExpr e;
    e.kind = Kind::All;
    return make(std::move(e));
}

RangeExprPtr RangeExpr::none() {
    RangeExpr e;
    e.kind = Kind::None;
    return make(std::move(e));
}

RangeExprPtr RangeExpr::both(RangeExprPtr a, RangeExprPtr b) {
    RangeExpr e;
    e.kind = Kind::And;
    e.lhs = std::move(a);
    e.rhs = std::move(b);
    return make(std::move(e));
}

RangeExprPtr RangeExpr::either(RangeExprPtr a, RangeExprPtr b) {
    RangeExpr e;
    e.kind = Kind::Or;
    e.lhs = std::move(a);
    e.rhs = std::move(b);
    return make(std::move(e));
}

RangeExprPtr RangeExpr::negate(RangeExprPtr a) {
    RangeExpr e;
    e.kind = Kind::Not;
    e.lhs = std::move(a);
    return make(std::move(e));
}

UPSet RangeExpr::elaborate(std::optional<std::int64_t> k) const {
    switch (kind) {
        case Kind::Divides: return UPSet::multiples_of(divisor_at(value, k));
        case Kind::Le: return UPSet::interval(1, eval_param(value, k));
        case Kind::Lt: return UPSet::interval(1, eval_param(value, k) - 1);
        case Kind::Ge: return UPSet::at_least(eval_param(value, k));
        case Kind::Gt: return UPSet::at_least(eval_param(value, k) + 1);
        case Kind::Eq: {
            std::int64_t c = eval_param(value, k);
            return c >= 1 ? UPSet::singleton(c) : UPSet::empty();
        }
        case Kind::Ne: {
            std::int64_t c = eval_param(value, k);
            return c >= 1 ? UPSet::singleton(c).complement() : UPSet::all();
        }
        case Kind::SetLiteral: {
            std::vector<std::int64_t> members;
            for (const Poly& p : items) {
                std::int64_t v = eval_param(p, k);
                if (v >= 1) members.push_back(v);
            }
            return UPSet::from_members(members);
        }
        case Kind::All: return UPSet::all();
        case Kind::None: return UPSet::empty();
        case Kind::And: return lhs->elaborate(k) & rhs->elaborate(k);
        case Kind::Or: return lhs->elaborate(k) | rhs->elaborate(k);
        case Kind::Not: return lhs->elaborate(k).complement();
    }
    return UPSet::empty();
}

bool RangeExpr::holds(std::int64_t m, std::optional<std::int64_t> k) const {
    switch (kind) {
        case Kind::Divides: return m % divisor_at(value, k) == 0;
        case Kind::Le: return m <= eval_param(value, k);
        case Kind::Lt: return m < eval_param(value, k);
        case Kind::Ge: return m >= eval_param(value, k);
        case Kind::Gt: return m > eval_param(value, k);
        case Kind::Eq: return m == eval_param(value, k);
        case Kind::Ne: return m != eval_param(value, k);
        case Kind::SetLiteral:
            return std::any_of(items.begin(), items.end(), [&](const Poly& p) { return eval_param(p, k) == m; });
        case Kind::All: return true;
        case Kind::None: return false;
        case Kind::And: return lhs->holds(m, k) && rhs->holds(m, k);
        case Kind::Or: return lhs->holds(m, k) || rhs->holds(m, k);
        case Kind::Not: return !lhs->holds(m, k);
    }
    return false;
}

bool RangeExpr::mentions_parameter() const {
    switch (kind) {
        case Kind::SetLiteral:
            return std::any_of(items.begin(), items.end(), [](const Poly& p) { return p.degree() > 0; });
        case Kind::All:
        case Kind::None: return false;
        case Kind::And:
        case Kind::Or: return lhs->mentions_parameter() || rhs->mentions_parameter();
        case Kind::Not: return lhs->mentions_parameter();
        default: return value.degree() > 0;
    }
}

namespace {

/// Beyond the returned K, p is monotone and either constant or |p(k)| > m + 1,
/// so every atom built from p has a fixed truth value at m.
std::int64_t poly_stable_from(const Poly& p, std::int64_t m) {
    if (p.degree() == 0) return 1;
    std::int64_t k = 1;
    if (p.c2 != 0) k = std::max<std::int64_t>(1, std::abs(p.c1) / (2 * std::abs(p.c2)) + 2);
    while (std::abs(p.eval(k)) <= m + 1) ++k;
    return k;
}

}  // namespace

std::int64_t RangeExpr::stable_from(std::int64_t m) const {
    switch (kind) {
        case Kind::SetLiteral: {
            std::int64_t k = 1;
            for (const Poly& p : items) k = std::max(k, poly_stable_from(p, m));
            return k;
        }
        case Kind::All:
        case Kind::None: return 1;
        case Kind::And:
        case Kind::Or: return std::max(lhs->stable_from(m), rhs->stable_from(m));
        case Kind::Not: return lhs->stable_from(m);
        default: return poly_stable_from(value, m);
    }
}

std::string RangeExpr::to_string(std::string_view param) const {
    auto child = [&](const RangeExprPtr& c, int min_prec) {
        std::string s = c->to_string(param);
        return precedence(c->kind) < min_prec ? "(" + s + ")" : s;
    };
    auto bound = [&](const Poly& p) { return p.to_string(param); };
    switch (kind) {
        case Kind::Divides: {
            bool bare = value.degree() == 0 && value.c0 >= 0;
            return (bare ? bound(value) : "(" + bound(value) + ")") + " | m";
        }
        case Kind::Le: return "m <= " + bound(value);
        case Kind::Lt: return "m < " + bound(value);
        case Kind::Ge: return "m >= " + bound(value);
        case Kind::Gt: return "m > " + bound(value);
        case Kind::Eq: return "m == " + bound(value);
        case Kind::Ne: return "m != " + bound(value);
        case Kind::SetLiteral: {
            std::string out = "{";
            for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + bound(items[i]);
            return out + "}";
        }
        case Kind::All: return "all";
        case Kind::None: return "none";
        case Kind::And: return child(lhs, 1) + " and " + child(rhs, 2);
        case Kind::Or: return child(lhs, 0) + " or " + child(rhs, 1);
        case Kind::Not: return "not " + child(lhs, 2);
    }
    return "none";
}

bool equal(const RangeExpr& a, const RangeExpr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case RangeExpr::Kind::SetLiteral: return a.items == b.items;
        case RangeExpr::Kind::All:
        case RangeExpr::Kind::None: return true;
        case RangeExpr::Kind::And:
        case RangeExpr::Kind::Or: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
        case RangeExpr::Kind::Not: return equal(*a.lhs, *b.lhs);
        default: return a.value == b.value;
    }
}

// ---------------------------------------------------------------------------
// Spec helpers
// ---------------------------------------------------------------------------

bool UltragraphSpec::has_families() const {
    return std::any_of(clauses.begin(), clauses.end(),
                       [](const EdgeClause& c) { return std::holds_alternative<FamilyClause>(c); });
}

std::optional<std::int64_t> UltragraphSpec::edge_count() const {
    if (has_families()) return std::nullopt;
    return static_cast<std::int64_t>(clauses.size());
}

std::optional<std::pair<const EdgeClause*, std::int64_t>> UltragraphSpec::clause_for(EdgeId n) const {
    for (const EdgeClause& c : clauses) {
        if (const auto* ce = std::get_if<ConcreteEdge>(&c)) {
            if (ce->index == n) return std::make_pair(&c, std::int64_t{0});
        } else {
            const auto& fc = std::get<FamilyClause>(c);
            std::int64_t diff = n.value - fc.edge_index.b;
            if (diff % fc.edge_index.a == 0 && diff / fc.edge_index.a >= 1) {
                return std::make_pair(&c, diff / fc.edge_index.a);
            }
        }
    }
    return std::nullopt;
}

namespace {

bool clause_equal(const EdgeClause& a, const EdgeClause& b) {
    if (a.index() != b.index()) return false;
    if (const auto* ca = std::get_if<ConcreteEdge>(&a)) {
        const auto& cb = std::get<ConcreteEdge>(b);
        return ca->index == cb.index && ca->source == cb.source && equal(*ca->range, *cb.range);
    }
    const auto& fa = std::get<FamilyClause>(a);
    const auto& fb = std::get<FamilyClause>(b);
    return fa.param == fb.param && fa.edge_index == fb.edge_index && fa.source == fb.source &&
           equal(*fa.range, *fb.range);
}

}  // namespace

bool operator==(const UltragraphSpec& a, const UltragraphSpec& b) {
    if (a.name != b.name || a.finite_universe != b.finite_universe) return false;
    if (static_cast<bool>(a.winf) != static_cast<bool>(b.winf)) return false;
    if (a.winf && !equal(*a.winf, *b.winf)) return false;
    if (a.clauses.size() != b.clauses.size()) return false;
    for (std::size_t i = 0; i < a.clauses.size(); ++i) {
        if (!clause_equal(a.clauses[i], b.clauses[i])) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
    Tok type = Tok::End;
    std::string text;
    std::int64_t number = 0;
    SourcePos pos;
};

std::vector<Token> lex(std::string_view src) {
    static const char* const two_char[] = {"..", "||", "&&", "==", "!=", "<=", ">="};
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t j = 0; j < n; ++j, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token t;
        t.pos = {line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            t.type = Tok::Ident;
            t.text = std::string(src.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.type = Tok::Int;
            t.text = std::string(src.substr(i, j - i));
            if (t.text.size() > 15) throw SyntaxError("integer literal too large", line, col);
            t.number = std::stoll(t.text);
            advance(j - i);
        } else {
            t.type = Tok::Punct;
            std::string_view rest = src.substr(i);
            bool matched = false;
            for (const char* two : two_char) {
                if (rest.substr(0, 2) == two) {
                    t.text = two;
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                static const std::string singles = "{}[]():;,|&!<>=+-*^";
                if (singles.find(c) == std::string::npos) {
                    throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
                }
                t.text = std::string(1, c);
            }
            advance(t.text.size());
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.type = Tok::End;
    end.pos = {line, col};
    out.push_back(end);
    return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    UltragraphSpec parse_document() {
        if (peek().type == Tok::Ident && peek().text == "ultragraph") return parse_long();
        return parse_compact();
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    bool is_punct(std::string_view p, std::size_t ahead = 0) const {
        return peek(ahead).type == Tok::Punct && peek(ahead).text == p;
    }
    bool is_word(std::string_view w, std::size_t ahead = 0) const {
        return peek(ahead).type == Tok::Ident && peek(ahead).text == w;
    }
    bool accept_punct(std::string_view p) {
        if (!is_punct(p)) return false;
        ++pos_;
        return true;
    }
    bool accept_word(std::string_view w) {
        if (!is_word(w)) return false;
        ++pos_;
        return true;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string found = t.type == Tok::End ? "end of input" : "'" + t.text + "'";
        throw SyntaxError(msg + ", found " + found, t.pos.line, t.pos.column);
    }

    void expect_punct(std::string_view p) {
        if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
    }
    void expect_word(std::string_view w) {
        if (!accept_word(w)) fail("expected '" + std::string(w) + "'");
    }
    std::string expect_ident() {
        if (peek().type != Tok::Ident) fail("expected identifier");
        return next().text;
    }
    std::int64_t expect_int() {
        if (peek().type != Tok::Int) fail("expected integer");
        return next().number;
    }

    // -- long form ---------------------------------------------------------

    UltragraphSpec parse_long() {
        UltragraphSpec spec;
        expect_word("ultragraph");
        spec.name = expect_ident();
        expect_punct("{");
        bool saw_vertices = false;
        while (!is_punct("}")) {
            if (accept_word("vertices")) {
                expect_punct(":");
                if (accept_word("infinite")) {
                    spec.finite_universe.reset();
                } else {
                    expect_word("finite");
                    spec.finite_universe = expect_int();
                }
                saw_vertices = true;
                accept_punct(";");
            } else if (accept_word("winf")) {
                expect_punct(":");
                spec.winf = parse_range(std::nullopt);
                accept_punct(";");
            } else if (accept_word("edges")) {
                expect_punct(":");
                while (is_word("edge") || is_word("family")) spec.clauses.push_back(parse_clause());
            } else {
                fail("expected 'vertices', 'winf', 'edges' or '}'");
            }
        }
        expect_punct("}");
        if (peek().type != Tok::End) fail("trailing input after ultragraph block");
        if (!saw_vertices) throw SyntaxError("missing 'vertices:' declaration", 1, 1);
        return spec;
    }

    EdgeClause parse_clause() {
        SourcePos pos = peek().pos;
        if (accept_word("edge")) {
            ConcreteEdge ce;
            ce.pos = pos;
            expect_word("e");
            expect_punct("[");
            ce.index = EdgeId(expect_int());
            expect_punct("]");
            expect_punct("{");
            expect_word("s");
            expect_punct(":");
            expect_word("v");
            expect_punct("[");
            ce.source = VertexId(expect_int());
            expect_punct("]");
            accept_punct(",");
            expect_word("r");
            expect_punct(":");
            ce.range = parse_range(std::nullopt);
            expect_punct("}");
            accept_punct(";");
            return ce;
        }
        expect_word("family");
        FamilyClause fc;
        fc.pos = pos;
        fc.param = expect_ident();
        if (fc.param == "m") throw SyntaxError("'m' is reserved for the vertex index", pos.line, pos.column);
        expect_word("in");
        SourcePos start_pos = peek().pos;
        if (expect_int() != 1) throw SyntaxError("family domains must start at 1", start_pos.line, start_pos.column);
        expect_punct("..");
        expect_punct(":");
        expect_word("e");
        expect_punct("[");
        fc.edge_index = parse_affine(fc.param);
        expect_punct("]");
        expect_punct("{");
        expect_word("s");
        expect_punct(":");
        expect_word("v");
        expect_punct("[");
        fc.source = parse_affine(fc.param);
        expect_punct("]");
        accept_punct(",");
        expect_word("r");
        expect_punct(":");
        fc.range = parse_range(fc.param);
        expect_punct("}");
        accept_punct(";");
        return fc;
    }

    // -- compact form ------------------------------------------------------

    UltragraphSpec parse_compact() {
        UltragraphSpec spec;
        spec.name = "unnamed";
        bool saw_vertices = false;
        while (peek().type != Tok::End) {
            if (accept_punct(";")) continue;
            SourcePos pos = peek().pos;
            std::string head = expect_ident();
            expect_punct(":");
            if (head == "v" || head == "vertices") {
                if (accept_word("inf") || accept_word("infinite")) {
                    spec.finite_universe.reset();
                } else {
                    spec.finite_universe = expect_int();
                }
                saw_vertices = true;
            } else if (head == "winf") {
                spec.winf = parse_range(std::nullopt);
            } else if (head.size() > 1 && head[0] == 'e' &&
                       std::all_of(head.begin() + 1, head.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
                ConcreteEdge ce;
                ce.pos = pos;
                ce.index = EdgeId(std::stoll(head.substr(1)));
                expect_word("s");
                if (!accept_punct("=")) expect_punct(":");
                ce.source = VertexId(expect_int());
                expect_punct(",");
                expect_word("r");
                if (!accept_punct("=")) expect_punct(":");
                ce.range = parse_range(std::nullopt);
                spec.clauses.push_back(std::move(ce));
            } else {
                throw SyntaxError("unknown statement '" + head + "'", pos.line, pos.column);
            }
        }
        if (!saw_vertices) throw SyntaxError("missing vertex declaration 'v: <count>'", 1, 1);
        return spec;
    }

    // -- range expressions -------------------------------------------------

    RangeExprPtr parse_range(const std::optional<std::string>& param) {
        RangeExprPtr lhs = parse_and(param);
        while (accept_word("or") || accept_punct("||")) lhs = RangeExpr::either(lhs, parse_and(param));
        return lhs;
    }

    RangeExprPtr parse_and(const std::optional<std::string>& param) {
        RangeExprPtr lhs = parse_not(param);
        while (accept_word("and") || accept_punct("&&")) lhs = RangeExpr::both(lhs, parse_not(param));
        return lhs;
    }

    RangeExprPtr parse_not(const std::optional<std::string>& param) {
        if (accept_word("not") || accept_punct("!")) return RangeExpr::negate(parse_not(param));
        return parse_atom(param);
    }

    RangeExprPtr parse_atom(const std::optional<std::string>& param) {
        if (accept_word("all")) return RangeExpr::all();
        if (accept_word("none")) return RangeExpr::none();
        if (accept_punct("{")) {
            std::vector<Poly> items;
            if (!is_punct("}")) {
                do {
                    items.push_back(parse_poly(param));
                } while (accept_punct(","));
            }
            expect_punct("}");
            return RangeExpr::set_literal(std::move(items));
        }
        if (accept_word("m")) {
            using K = RangeExpr::Kind;
            static const std::map<std::string, K> ops = {{"<=", K::Le}, {"<", K::Lt}, {">=", K::Ge},
                                                         {">", K::Gt}, {"==", K::Eq}, {"!=", K::Ne}};
            if (peek().type != Tok::Punct || !ops.count(peek().text)) fail("expected comparison after 'm'");
            K op = ops.at(next().text);
            return RangeExpr::compare(op, parse_poly(param));
        }
        // Either `poly | m` or a parenthesised range expression.
        std::size_t save = pos_;
        if (is_punct("(")) {
            try {
                Poly d = parse_poly(param);
                if (accept_punct("|")) {
                    expect_word("m");
                    return RangeExpr::divides(d);
                }
            } catch (const SyntaxError&) {
            }
            pos_ = save;
            expect_punct("(");
            RangeExprPtr inner = parse_range(param);
            expect_punct(")");
            return inner;
        }
        Poly d = parse_poly(param);
        expect_punct("|");
        expect_word("m");
        return RangeExpr::divides(d);
    }

    // -- polynomials -------------------------------------------------------

    static Poly add(Poly a, Poly b) { return {a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2}; }
    static Poly neg(Poly a) { return {-a.c0, -a.c1, -a.c2}; }

    Poly mul(Poly a, Poly b, SourcePos pos) const {
        if (a.degree() + b.degree() > 2) {
            throw SyntaxError("polynomial bounds are limited to degree 2", pos.line, pos.column);
        }
        return {a.c0 * b.c0, a.c0 * b.c1 + a.c1 * b.c0, a.c0 * b.c2 + a.c1 * b.c1 + a.c2 * b.c0};
    }

    Poly parse_poly(const std::optional<std::string>& param) {
        Poly acc = parse_term(param);
        while (true) {
            if (accept_punct("+")) {
                acc = add(acc, parse_term(param));
            } else if (accept_punct("-")) {
                acc = add(acc, neg(parse_term(param)));
            } else {
                return acc;
            }
        }
    }

    Poly parse_term(const std::optional<std::string>& param) {
        Poly acc = parse_power(param);
        while (is_punct("*")) {
            SourcePos pos = peek().pos;
            ++pos_;
            acc = mul(acc, parse_power(param), pos);
        }
        return acc;
    }

    Poly parse_power(const std::optional<std::string>& param) {
        Poly base = parse_factor(param);
        if (is_punct("^")) {
            SourcePos pos = peek().pos;
            ++pos_;
            std::int64_t e = expect_int();
            Poly out = Poly::constant(1);
            for (std::int64_t i = 0; i < e; ++i) out = mul(out, base, pos);
            return out;
        }
        return base;
    }

    Poly parse_factor(const std::optional<std::string>& param) {
        if (accept_punct("-")) return neg(parse_factor(param));
        if (peek().type == Tok::Int) return Poly::constant(next().number);
        if (peek().type == Tok::Ident && !is_word("m")) {
            const Token& t = peek();
            if (!param || t.text != *param) {
                throw SyntaxError("unknown identifier '" + t.text + "' in arithmetic expression", t.pos.line,
                                  t.pos.column);
            }
            ++pos_;
            return Poly{0, 1, 0};
        }
        if (accept_punct("(")) {
            Poly p = parse_poly(param);
            expect_punct(")");
            return p;
        }
        fail("expected arithmetic expression");
    }

    Affine parse_affine(const std::string& param) {
        SourcePos pos = peek().pos;
        Poly p = parse_poly(param);
        if (p.degree() > 1) throw SyntaxError("index expressions must be affine in " + param, pos.line, pos.column);
        return Affine{p.c1, p.c0};
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

std::string at(const SourcePos& p) { return std::to_string(p.line) + ":" + std::to_string(p.column) + ": "; }

UPSet universe_of(const UltragraphSpec& spec) {
    return spec.finite_universe ? UPSet::interval(1, *spec.finite_universe) : UPSet::all();
}

void check_coverage(const UltragraphSpec& spec) {
    std::map<std::int64_t, int> concrete;
    std::int64_t horizon = 0, period = 1;
    for (const EdgeClause& c : spec.clauses) {
        if (const auto* ce = std::get_if<ConcreteEdge>(&c)) {
            if (ce->index.value < 1) throw CoverageError(at(ce->pos) + "edge indices start at 1");
            if (++concrete[ce->index.value] > 1) {
                throw CoverageError(at(ce->pos) + "edge index e" + std::to_string(ce->index.value) +
                                    " is claimed more than once");
            }
            horizon = std::max(horizon, ce->index.value);
        } else {
            const auto& fc = std::get<FamilyClause>(c);
            horizon = std::max(horizon, fc.edge_index.eval(1));
            period = std::lcm(period, fc.edge_index.a);
            if (period > (std::int64_t{1} << 20)) throw CoverageError(at(fc.pos) + "family strides are too large to check");
        }
    }
    if (!spec.has_families()) {
        for (std::int64_t n = 1; n <= static_cast<std::int64_t>(concrete.size()); ++n) {
            if (!concrete.count(n)) throw CoverageError("edge indices have a gap at e" + std::to_string(n));
        }
        return;
    }
    // Beyond `horizon` every family has started, so coverage is periodic with `period`.
    for (std::int64_t n = 1; n <= horizon + period; ++n) {
        int hits = concrete.count(n) ? 1 : 0;
        for (const EdgeClause& c : spec.clauses) {
            if (const auto* fc = std::get_if<FamilyClause>(&c)) {
                std::int64_t diff = n - fc->edge_index.b;
                if (diff % fc->edge_index.a == 0 && diff / fc->edge_index.a >= 1) ++hits;
            }
        }
        if (hits == 0) throw CoverageError("edge index e" + std::to_string(n) + " is not covered by any clause");
        if (hits > 1) throw CoverageError("edge index e" + std::to_string(n) + " is claimed more than once");
    }
}

void validate(const UltragraphSpec& spec) {
    if (spec.finite_universe && *spec.finite_universe < 1) throw ValidationError("the vertex universe must be nonempty");
    const UPSet universe = universe_of(spec);
    const std::int64_t top = spec.finite_universe.value_or(std::numeric_limits<std::int64_t>::max());
    if (spec.winf && spec.winf->mentions_parameter()) throw ValidationError("winf must not mention a family parameter");
    for (const EdgeClause& c : spec.clauses) {
        if (const auto* ce = std::get_if<ConcreteEdge>(&c)) {
            if (ce->source.value < 1 || ce->source.value > top) {
                throw ValidationError(at(ce->pos) + "source v" + std::to_string(ce->source.value) +
                                      " lies outside the vertex universe");
            }
            if (ce->range->mentions_parameter()) throw ValidationError(at(ce->pos) + "concrete edges cannot use a parameter");
            try {
                if ((ce->range->elaborate() & universe).is_empty()) {
                    throw EmptyRangeError(at(ce->pos) + "range of e" + std::to_string(ce->index.value) + " is empty");
                }
            } catch (const ValidationError& e) {
                throw ValidationError(at(ce->pos) + e.what());
            }
        } else {
            const auto& fc = std::get<FamilyClause>(c);
            if (fc.edge_index.a < 1 || fc.edge_index.eval(1) < 1) {
                throw ValidationError(at(fc.pos) + "edge index " + fc.edge_index.to_string(fc.param) +
                                      " must be increasing and positive for " + fc.param + " >= 1");
            }
            if (fc.source.a < 0 || fc.source.eval(1) < 1) {
                throw ValidationError(at(fc.pos) + "source index " + fc.source.to_string(fc.param) +
                                      " must be nondecreasing and positive for " + fc.param + " >= 1");
            }
            if (spec.finite_universe && (fc.source.a > 0 || fc.source.b > top)) {
                throw ValidationError(at(fc.pos) + "family sources leave the finite vertex universe");
            }
            for (std::int64_t k = 1; k <= kParseTimeRangeChecks; ++k) {
                UPSet r;
                try {
                    r = fc.range->elaborate(k) & universe;
                } catch (const ValidationError& e) {
                    throw ValidationError(at(fc.pos) + e.what());
                }
                if (r.is_empty()) {
                    throw EmptyRangeError(at(fc.pos) + "range of e" + std::to_string(fc.edge_index.eval(k)) +
                                          " (" + fc.param + "=" + std::to_string(k) + ") is empty");
                }
            }
        }
    }
    check_coverage(spec);
}

}  // namespace

UltragraphSpec parse(std::string_view text) {
    Parser p(lex(text));
    UltragraphSpec spec = p.parse_document();
    validate(spec);
    return spec;
}

std::string pretty_print(const UltragraphSpec& spec) {
    std::ostringstream os;
    os << "ultragraph " << spec.name << " {\n";
    os << "  vertices: ";
    if (spec.finite_universe) {
        os << "finite " << *spec.finite_universe << ";\n";
    } else {
        os << "infinite;\n";
    }
    if (spec.winf) os << "  winf: " << spec.winf->to_string() << ";\n";
    os << "  edges:\n";
    for (const EdgeClause& c : spec.clauses) {
        if (const auto* ce = std::get_if<ConcreteEdge>(&c)) {
            os << "    edge e[" << ce->index.value << "] { s: v[" << ce->source.value
               << "], r: " << ce->range->to_string() << " }\n";
        } else {
            const auto& fc = std::get<FamilyClause>(c);
            os << "    family " << fc.param << " in 1.. : e[" << fc.edge_index.to_string(fc.param) << "] { s: v["
               << fc.source.to_string(fc.param) << "], r: " << fc.range->to_string(fc.param) << " }\n";
        }
    }
    os << "}\n";
    return os.str();
}

std::int64_t containment_bound(const UltragraphSpec& spec, std::int64_t m) {
    std::int64_t bound = 0;
    for (const EdgeClause& c : spec.clauses) {
        if (const auto* ce = std::get_if<ConcreteEdge>(&c)) {
            bound = std::max(bound, ce->index.value);
        } else {
            const auto& fc = std::get<FamilyClause>(c);
            bound = std::max(bound, fc.edge_index.eval(fc.range->stable_from(m)));
        }
    }
    return bound;
}

std::pair<VertexId, UPSet> instantiate_edge(const UltragraphSpec& spec, EdgeId n) {
    if (n.value < 1) throw UncoveredIndex("edge indices start at 1");
    auto hit = spec.clause_for(n);
    if (!hit) throw UncoveredIndex("no clause defines e" + std::to_string(n.value));
    const UPSet universe = universe_of(spec);
    const auto& [clause, k] = *hit;
    if (const auto* ce = std::get_if<ConcreteEdge>(clause)) {
        return {ce->source, ce->range->elaborate() & universe};
    }
    const auto& fc = std::get<FamilyClause>(*clause);
    UPSet r = fc.range->elaborate(k) & universe;
    if (r.is_empty()) {
        throw EmptyRangeError("range of e" + std::to_string(n.value) + " (" + fc.param + "=" + std::to_string(k) +
                              ") is empty");
    }
    return {VertexId(fc.source.eval(k)), std::move(r)};
}

}  // namespace ugraph::dsl
