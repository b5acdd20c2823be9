#include "ugraph/upset.hpp"

#include "ugraph/errors.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ugraph {

std::string Cardinality::to_string() const {
    return infinite_ ? std::string("Infinite") : "Finite(" + std::to_string(count_) + ")";
}

namespace {

using Value = UPSet::Value;
using Bits = boost::dynamic_bitset<std::uint64_t>;

std::vector<Value> prime_factors(Value n) {
    std::vector<Value> out;
    for (Value q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// True when bits[i] == bits[(i + d) % size] for every i.
bool has_period(const Bits& bits, std::size_t d) {
    const std::size_t n = bits.size();
    if (d == n) return true;
    Bits rotated = (bits >> d) | (bits << (n - d));
    return rotated == bits;
}

// Repeats a residue pattern of length bits.size() up to new_size (a multiple).
Bits tile(const Bits& bits, std::size_t new_size) {
    Bits out(bits);
    out.resize(new_size);
    std::size_t filled = bits.size();
    while (filled < new_size) {
        out |= (out << filled);
        filled *= 2;
    }
    return out;
}

Value checked_lcm(Value a, Value b) {
    const Value g = std::gcd(a, b);
    const Value l = (a / g) * b;
    if (a / g > UPSet::kMaxPeriod / b || l > UPSet::kMaxPeriod) {
        throw PeriodOverflow("aligned period lcm(" + std::to_string(a) + ", " +
                             std::to_string(b) + ") exceeds the supported maximum");
    }
    return l;
}

std::vector<Value> parse_csv(std::string_view text) {
    std::vector<Value> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(pos, end - pos);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) {
            Value v = 0;
            auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
            if (ec != std::errc() || ptr != item.data() + item.size()) {
                throw std::invalid_argument("bad integer in upset literal: " + std::string(item));
            }
            out.push_back(v);
        }
        pos = end + 1;
    }
    return out;
}

std::string join_csv(const std::vector<Value>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

}  // namespace

UPSet::UPSet() : threshold_(0), transient_(1), period_(1), residues_(1) {}

UPSet::UPSet(Value threshold, Bits transient, Value period, Bits residues)
    : threshold_(threshold),
      transient_(std::move(transient)),
      period_(period),
      residues_(std::move(residues)) {
    canonicalize();
}

void UPSet::canonicalize() {
    transient_.resize(static_cast<std::size_t>(threshold_) + 1);
    transient_.reset(0);
    if (residues_.none()) {
        period_ = 1;
        residues_ = Bits(1);
    } else {
        for (Value q : prime_factors(period_)) {
            while (period_ % q == 0 && has_period(residues_, static_cast<std::size_t>(period_ / q))) {
                period_ /= q;
                residues_.resize(static_cast<std::size_t>(period_));
            }
        }
    }
    Value t = threshold_;
    while (t > 0 && transient_.test(static_cast<std::size_t>(t)) ==
                        residues_.test(static_cast<std::size_t>(t % period_))) {
        --t;
    }
    threshold_ = t;
    transient_.resize(static_cast<std::size_t>(t) + 1);
}

UPSet UPSet::all() {
    Bits res(1);
    res.set(0);
    return UPSet(0, Bits(1), 1, std::move(res));
}

UPSet UPSet::singleton(Value m) {
    const Value one[] = {m};
    return from_members(one);
}

UPSet UPSet::from_members(std::span<const Value> members) {
    Value top = 0;
    for (Value m : members) {
        if (m < 1) throw std::invalid_argument("UPSet members must be positive integers");
        top = std::max(top, m);
    }
    Bits tr(static_cast<std::size_t>(top) + 1);
    for (Value m : members) tr.set(static_cast<std::size_t>(m));
    return UPSet(top, std::move(tr), 1, Bits(1));
}

UPSet UPSet::interval(Value lo, Value hi) {
    lo = std::max<Value>(lo, 1);
    if (hi < lo) return UPSet();
    Bits tr(static_cast<std::size_t>(hi) + 1);
    for (Value m = lo; m <= hi; ++m) tr.set(static_cast<std::size_t>(m));
    return UPSet(hi, std::move(tr), 1, Bits(1));
}

UPSet UPSet::at_least(Value lo) {
    lo = std::max<Value>(lo, 1);
    Bits res(1);
    res.set(0);
    return UPSet(lo - 1, Bits(static_cast<std::size_t>(lo)), 1, std::move(res));
}

UPSet UPSet::multiples_of(Value d) {
    if (d < 1) throw std::invalid_argument("divisor must be positive");
    if (d > kMaxPeriod) throw PeriodOverflow("divisor " + std::to_string(d) + " exceeds the supported period");
    Bits res(static_cast<std::size_t>(d));
    res.set(0);
    return UPSet(0, Bits(1), d, std::move(res));
}

UPSet UPSet::from_parts(Value threshold, std::span<const Value> transient, Value period,
                        std::span<const Value> residues) {
    if (threshold < 0) throw std::invalid_argument("threshold must be nonnegative");
    if (period < 1 || period > kMaxPeriod) throw std::invalid_argument("period out of range");
    Bits tr(static_cast<std::size_t>(threshold) + 1);
    for (Value m : transient) {
        if (m < 1 || m > threshold) throw std::invalid_argument("transient member outside 1..T");
        tr.set(static_cast<std::size_t>(m));
    }
    Bits res(static_cast<std::size_t>(period));
    for (Value r : residues) {
        if (r < 0 || r >= period) throw std::invalid_argument("residue outside 0..p-1");
        res.set(static_cast<std::size_t>(r));
    }
    return UPSet(threshold, std::move(tr), period, std::move(res));
}

std::vector<Value> UPSet::transient_members() const {
    std::vector<Value> out;
    for (auto i = transient_.find_first(); i != Bits::npos; i = transient_.find_next(i)) {
        out.push_back(static_cast<Value>(i));
    }
    return out;
}

std::vector<Value> UPSet::residues() const {
    std::vector<Value> out;
    for (auto i = residues_.find_first(); i != Bits::npos; i = residues_.find_next(i)) {
        out.push_back(static_cast<Value>(i));
    }
    return out;
}

bool UPSet::contains(Value m) const {
    if (m < 1) return false;
    if (m <= threshold_) return transient_.test(static_cast<std::size_t>(m));
    return residues_.test(static_cast<std::size_t>(m % period_));
}

bool UPSet::is_empty() const { return residues_.none() && transient_.none(); }

Cardinality UPSet::cardinality() const {
    if (!is_finite()) return Cardinality::infinite();
    return Cardinality::finite(transient_.count());
}

std::optional<Value> UPSet::min_element() const {
    auto i = transient_.find_first();
    if (i != Bits::npos) return static_cast<Value>(i);
    if (residues_.none()) return std::nullopt;
    for (Value m = threshold_ + 1; m <= threshold_ + period_; ++m) {
        if (contains(m)) return m;
    }
    return std::nullopt;
}

std::optional<Value> UPSet::max_element() const {
    if (!is_finite() || transient_.none()) return std::nullopt;
    // canonical finite sets have their largest member exactly at the threshold
    return threshold_;
}

std::vector<Value> UPSet::enumerate(Value limit) const {
    std::vector<Value> out;
    for (Value m = 1; m <= limit; ++m) {
        if (contains(m)) out.push_back(m);
    }
    return out;
}

std::vector<Value> UPSet::members() const {
    if (!is_finite()) throw std::logic_error("members() called on an infinite UPSet");
    return transient_members();
}

std::vector<Value> UPSet::first_members(std::size_t count) const {
    std::vector<Value> out;
    if (count == 0) return out;
    for (Value m = 1; m <= threshold_ && out.size() < count; ++m) {
        if (transient_.test(static_cast<std::size_t>(m))) out.push_back(m);
    }
    if (residues_.none()) return out;
    for (Value m = threshold_ + 1; out.size() < count; ++m) {
        if (residues_.test(static_cast<std::size_t>(m % period_))) out.push_back(m);
    }
    return out;
}

UPSet UPSet::complement() const { return set_difference(UPSet::all(), *this); }

bool UPSet::is_subset_of(const UPSet& other) const { return set_difference(*this, other).is_empty(); }

bool UPSet::is_disjoint_from(const UPSet& other) const {
    return set_intersection(*this, other).is_empty();
}

std::string UPSet::serialize() const {
    return "upset{T=" + std::to_string(threshold_) + "; transient=" + join_csv(transient_members()) +
           "; p=" + std::to_string(period_) + "; residues=" + join_csv(residues()) + "}";
}

UPSet UPSet::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    constexpr std::string_view head = "upset{";
    if (text.substr(0, head.size()) != head || text.empty() || text.back() != '}') {
        throw std::invalid_argument("not an upset literal: " + std::string(text));
    }
    std::string_view body = text.substr(head.size(), text.size() - head.size() - 1);
    std::optional<Value> t, p;
    std::vector<Value> transient, residues;
    bool saw_transient = false, saw_residues = false;
    while (!body.empty()) {
        std::size_t semi = body.find(';');
        std::string_view field = trim(body.substr(0, semi));
        body = semi == std::string_view::npos ? std::string_view{} : body.substr(semi + 1);
        if (field.empty()) continue;
        std::size_t eq = field.find('=');
        if (eq == std::string_view::npos) throw std::invalid_argument("missing '=' in upset field");
        std::string_view key = trim(field.substr(0, eq));
        std::string_view val = trim(field.substr(eq + 1));
        if (key == "T") {
            auto v = parse_csv(val);
            if (v.size() != 1) throw std::invalid_argument("T needs one integer");
            t = v[0];
        } else if (key == "p") {
            auto v = parse_csv(val);
            if (v.size() != 1) throw std::invalid_argument("p needs one integer");
            p = v[0];
        } else if (key == "transient") {
            transient = parse_csv(val);
            saw_transient = true;
        } else if (key == "residues") {
            residues = parse_csv(val);
            saw_residues = true;
        } else {
            throw std::invalid_argument("unknown upset field: " + std::string(key));
        }
    }
    if (!t || !p || !saw_transient || !saw_residues) {
        throw std::invalid_argument("upset literal needs T, transient, p and residues");
    }
    return from_parts(*t, transient, *p, residues);
}

std::string UPSet::describe(std::size_t preview) const {
    std::ostringstream os;
    os << '{';
    if (is_finite()) {
        auto ms = members();
        for (std::size_t i = 0; i < ms.size(); ++i) os << (i ? "," : "") << ms[i];
    } else {
        auto ms = first_members(preview);
        for (std::size_t i = 0; i < ms.size(); ++i) os << (i ? "," : "") << ms[i];
        os << ",...";
    }
    os << '}';
    return os.str();
}

std::size_t UPSet::hash() const noexcept {
    std::size_t h = std::hash<Value>{}(threshold_) * 31 + std::hash<Value>{}(period_);
    std::vector<std::uint64_t> blocks;
    boost::to_block_range(transient_, std::back_inserter(blocks));
    boost::to_block_range(residues_, std::back_inserter(blocks));
    for (auto b : blocks) h = h * 1099511628211ULL ^ std::hash<std::uint64_t>{}(b);
    return h;
}

namespace {

UPSet filter_finite(const UPSet& finite, const std::function<bool(Value)>& keep) {
    std::vector<Value> out;
    for (Value m : finite.members()) {
        if (keep(m)) out.push_back(m);
    }
    return UPSet::from_members(out);
}

struct OrOp {
    bool operator()(bool x, bool y) const { return x || y; }
    Bits operator()(const Bits& x, const Bits& y) const { return x | y; }
};
struct AndOp {
    bool operator()(bool x, bool y) const { return x && y; }
    Bits operator()(const Bits& x, const Bits& y) const { return x & y; }
};
struct MinusOp {
    bool operator()(bool x, bool y) const { return x && !y; }
    Bits operator()(const Bits& x, const Bits& y) const { return x - y; }
};

}  // namespace

template <class Op>
UPSet UPSet::combine(const UPSet& a, const UPSet& b, Op op) {
    const Value t = std::max(a.threshold_, b.threshold_);
    const Value p = checked_lcm(a.period_, b.period_);
    Bits transient(static_cast<std::size_t>(t) + 1);
    for (Value m = 1; m <= t; ++m) {
        if (op(a.contains(m), b.contains(m))) transient.set(static_cast<std::size_t>(m));
    }
    // A member m > t with m = r (mod p) has m = r (mod p_a) and m = r (mod p_b),
    // so tiling each residue pattern to length p aligns them.
    Bits residues = op(tile(a.residues_, static_cast<std::size_t>(p)),
                       tile(b.residues_, static_cast<std::size_t>(p)));
    return UPSet(t, std::move(transient), p, std::move(residues));
}

UPSet set_union(const UPSet& a, const UPSet& b) { return UPSet::combine(a, b, OrOp{}); }

UPSet set_intersection(const UPSet& a, const UPSet& b) {
    if (a.is_finite()) return filter_finite(a, [&](Value m) { return b.contains(m); });
    if (b.is_finite()) return filter_finite(b, [&](Value m) { return a.contains(m); });
    return UPSet::combine(a, b, AndOp{});
}

UPSet set_difference(const UPSet& a, const UPSet& b) {
    if (a.is_finite()) return filter_finite(a, [&](Value m) { return !b.contains(m); });
    return UPSet::combine(a, b, MinusOp{});
}

}  // namespace ugraph
