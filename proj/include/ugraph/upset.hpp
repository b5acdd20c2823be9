#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ugraph {

/// Size of a set of vertices: a finite count or infinity.
class Cardinality {
public:
    static Cardinality finite(std::uint64_t n) { return Cardinality(false, n); }
    static Cardinality infinite() { return Cardinality(true, 0); }

    bool is_infinite() const noexcept { return infinite_; }
    bool is_finite() const noexcept { return !infinite_; }
    /// Only meaningful when finite.
    std::uint64_t count() const noexcept { return count_; }

    bool operator==(const Cardinality&) const = default;

    std::string to_string() const;

private:
    Cardinality(bool inf, std::uint64_t n) : infinite_(inf), count_(n) {}
    bool infinite_;
    std::uint64_t count_;
};

/// An ultimately periodic subset of the positive integers {1, 2, 3, ...}.
///
/// Membership of m <= threshold() is explicit; membership of m > threshold()
/// is decided by (m mod period()) being a marked residue. Values are always
/// kept canonical: the period is the minimal period of the tail and the
/// threshold is the least one compatible with it, so two UPSets are equal as
/// sets iff they compare equal with operator==.
class UPSet {
public:
    using Value = std::int64_t;

    /// Largest period a binary operation may produce.
    static constexpr Value kMaxPeriod = Value{1} << 27;

    UPSet();  // the empty set

    static UPSet empty() { return UPSet(); }
    static UPSet all();
    static UPSet singleton(Value m);
    static UPSet from_members(std::span<const Value> members);
    /// {m : lo <= m <= hi}; empty when hi < max(lo, 1).
    static UPSet interval(Value lo, Value hi);
    /// {m : m >= lo}.
    static UPSet at_least(Value lo);
    /// {m : d divides m}, d >= 1.
    static UPSet multiples_of(Value d);
    /// Builds from raw (possibly non-canonical) data; throws std::invalid_argument
    /// on out-of-range members or residues.
    static UPSet from_parts(Value threshold, std::span<const Value> transient, Value period,
                            std::span<const Value> residues);

    Value threshold() const noexcept { return threshold_; }
    Value period() const noexcept { return period_; }
    std::vector<Value> transient_members() const;
    std::vector<Value> residues() const;

    bool contains(Value m) const;
    bool is_empty() const;
    bool is_finite() const { return residues_.none(); }
    Cardinality cardinality() const;
    std::optional<Value> min_element() const;
    /// Largest member of a finite set; nullopt for empty or infinite sets.
    std::optional<Value> max_element() const;
    /// All members <= limit, increasing.
    std::vector<Value> enumerate(Value limit) const;
    /// Every member of a finite set; throws std::logic_error when infinite.
    std::vector<Value> members() const;
    /// The first `count` members in increasing order (fewer if the set is smaller).
    std::vector<Value> first_members(std::size_t count) const;

    UPSet complement() const;
    bool is_subset_of(const UPSet& other) const;
    bool is_disjoint_from(const UPSet& other) const;

    /// `upset{T=<int>; transient=<csv>; p=<int>; residues=<csv>}`
    std::string serialize() const;
    static UPSet parse(std::string_view text);

    /// Human-oriented rendering, e.g. `{1,2,3}` or `{3,6,9,...}`.
    std::string describe(std::size_t preview = 8) const;

    std::size_t hash() const noexcept;

    bool operator==(const UPSet& other) const = default;

    friend UPSet set_union(const UPSet& a, const UPSet& b);
    friend UPSet set_intersection(const UPSet& a, const UPSet& b);
    friend UPSet set_difference(const UPSet& a, const UPSet& b);

private:
    using Bits = boost::dynamic_bitset<std::uint64_t>;

    UPSet(Value threshold, Bits transient, Value period, Bits residues);
    void canonicalize();

    template <class Op>
    static UPSet combine(const UPSet& a, const UPSet& b, Op op);

    // transient_[m] for 1 <= m <= threshold_; bit 0 is unused and always clear.
    Value threshold_ = 0;
    Bits transient_;
    Value period_ = 1;
    Bits residues_;
};

UPSet set_union(const UPSet& a, const UPSet& b);
UPSet set_intersection(const UPSet& a, const UPSet& b);
UPSet set_difference(const UPSet& a, const UPSet& b);

inline UPSet operator|(const UPSet& a, const UPSet& b) { return set_union(a, b); }
inline UPSet operator&(const UPSet& a, const UPSet& b) { return set_intersection(a, b); }
inline UPSet operator-(const UPSet& a, const UPSet& b) { return set_difference(a, b); }

struct UPSetHash {
    std::size_t operator()(const UPSet& s) const noexcept { return s.hash(); }
};

}  // namespace ugraph
