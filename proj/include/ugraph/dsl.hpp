#pragma once

// Parser and elaborator for the ultragraph description language.
//
//   ultragraph fig1 {
//     vertices: infinite;
//     winf: 4 | m;
//     edges:
//       family k in 1.. : e[2*k-1] { s: v[2*k-1], r: (k+2) | m }
//       family k in 1.. : e[2*k]   { s: v[2*k],   r: m <= k^2 and not 4 | m }
//   }
//
// A compact line form is accepted as well: `v: 2; e1: s=1, r={2}`.

#include "ugraph/ids.hpp"
#include "ugraph/upset.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace ugraph::dsl {

/// Integer polynomial of degree <= 2 in the family parameter.
struct Poly {
    std::int64_t c0 = 0, c1 = 0, c2 = 0;

    static Poly constant(std::int64_t c) { return Poly{c, 0, 0}; }
    int degree() const { return c2 != 0 ? 2 : (c1 != 0 ? 1 : 0); }
    std::int64_t eval(std::int64_t k) const { return c0 + c1 * k + c2 * k * k; }
    std::string to_string(std::string_view param) const;
    bool operator==(const Poly&) const = default;
};

/// a*k + b
struct Affine {
    std::int64_t a = 0, b = 0;

    std::int64_t eval(std::int64_t k) const { return a * k + b; }
    std::string to_string(std::string_view param) const;
    bool operator==(const Affine&) const = default;
};

struct RangeExpr;
using RangeExprPtr = std::shared_ptr<const RangeExpr>;

/// Predicate over the vertex index m, possibly mentioning the family parameter.
struct RangeExpr {
    enum class Kind { Divides, Le, Lt, Ge, Gt, Eq, Ne, SetLiteral, All, None, And, Or, Not };

    Kind kind = Kind::None;
    Poly value;               // divisor or comparison bound
    std::vector<Poly> items;  // set literal members
    RangeExprPtr lhs, rhs;    // operands of And/Or (both) and Not (lhs)

    static RangeExprPtr divides(Poly d);
    static RangeExprPtr compare(Kind op, Poly bound);
    static RangeExprPtr set_literal(std::vector<Poly> items);
    static RangeExprPtr all();
    static RangeExprPtr none();
    static RangeExprPtr both(RangeExprPtr a, RangeExprPtr b);
    static RangeExprPtr either(RangeExprPtr a, RangeExprPtr b);
    static RangeExprPtr negate(RangeExprPtr a);

    /// Elaborates to a subset of the positive integers; `k` is the family
    /// parameter value (nullopt for closed expressions).
    UPSet elaborate(std::optional<std::int64_t> k = std::nullopt) const;
    /// Direct evaluation of the predicate at m, independent of UPSet arithmetic.
    bool holds(std::int64_t m, std::optional<std::int64_t> k = std::nullopt) const;
    bool mentions_parameter() const;
    /// Some K >= 1 such that holds(m, k) takes the same value for all k >= K.
    std::int64_t stable_from(std::int64_t m) const;
    std::string to_string(std::string_view param = "k") const;
};

bool equal(const RangeExpr& a, const RangeExpr& b);

struct SourcePos {
    std::size_t line = 0, column = 0;
};

struct ConcreteEdge {
    EdgeId index;
    VertexId source;
    RangeExprPtr range;
    SourcePos pos;
};

/// `family k in 1.. : e[a*k+b] { s: v[c*k+d], r: <expr in k, m> }`
struct FamilyClause {
    std::string param;
    Affine edge_index;
    Affine source;
    RangeExprPtr range;
    SourcePos pos;
};

using EdgeClause = std::variant<ConcreteEdge, FamilyClause>;

struct UltragraphSpec {
    std::string name;
    /// nullopt for the infinite universe {v_1, v_2, ...}.
    std::optional<std::int64_t> finite_universe;
    std::vector<EdgeClause> clauses;
    RangeExprPtr winf;  // may be null

    bool has_families() const;
    /// Number of edges when the listing is finite.
    std::optional<std::int64_t> edge_count() const;

    /// Locates the clause covering e_n and the parameter value for families.
    std::optional<std::pair<const EdgeClause*, std::int64_t>> clause_for(EdgeId n) const;
};

bool operator==(const UltragraphSpec& a, const UltragraphSpec& b);

/// Parses and validates. Throws SyntaxError, CoverageError, EmptyRangeError
/// or ValidationError.
UltragraphSpec parse(std::string_view text);

/// Canonical long-form rendering; parse(pretty_print(s)) == s.
std::string pretty_print(const UltragraphSpec& spec);

/// Source and (universe-restricted) range of e_n. Throws UncoveredIndex or
/// EmptyRangeError.
std::pair<VertexId, UPSet> instantiate_edge(const UltragraphSpec& spec, EdgeId n);

/// If v_m lies in the range of any edge, it lies in the range of some e_n with
/// n <= the result.
std::int64_t containment_bound(const UltragraphSpec& spec, std::int64_t m);

/// Number of family parameter values checked for nonempty ranges at parse time.
inline constexpr std::int64_t kParseTimeRangeChecks = 64;

}  // namespace ugraph::dsl
