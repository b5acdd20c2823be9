#pragma once

// Closed-form description of the bundled example, used as an oracle:
//   s(e_n) = v_n, r(e_{2k-1}) = {m : (k+2) | m}, r(e_{2k}) = {m <= k^2 : 4 does not divide m}.

#include <cstdint>
#include <numeric>
#include <string>

namespace fig1 {

inline bool in_range(std::int64_t n, std::int64_t m) {
    if (n % 2 == 1) return m % ((n + 1) / 2 + 2) == 0;
    std::int64_t k = n / 2;
    return m <= k * k && m % 4 != 0;
}

/// ω ∈ Δ iff ω is nonzero, every even coordinate is 0, and (k+2) does not divide
/// lcm{l+2 : ω_{2l-1} = 1} whenever ω_{2k-1} = 0.
inline bool in_delta(const std::string& w) {
    if (w.find('1') == std::string::npos) return false;
    std::int64_t l = 1;
    for (std::size_t i = 1; i <= w.size(); ++i) {
        if (i % 2 == 0 && w[i - 1] == '1') return false;
        if (i % 2 == 1 && w[i - 1] == '1') l = std::lcm(l, static_cast<std::int64_t>((i + 1) / 2 + 2));
    }
    for (std::size_t i = 1; i <= w.size(); i += 2) {
        if (w[i - 1] == '0' && l % static_cast<std::int64_t>((i + 1) / 2 + 2) == 0) return false;
    }
    return true;
}

inline std::string chain(std::int64_t m, std::int64_t n) {
    std::string w;
    for (std::int64_t i = 1; i <= n; ++i) w += in_range(i, m) ? '1' : '0';
    return w;
}

/// σ(v_m) under W∞ = multiples of 4, ranked by index.
inline std::string sigma(std::int64_t m) {
    std::int64_t n0 = 1;
    while (!in_range(n0, m)) ++n0;
    if (!in_delta(chain(m, n0))) return "";
    if (m % 4 == 0) return chain(m, std::max(m / 4, n0));
    std::int64_t n = n0;
    while (in_delta(chain(m, n + 1))) ++n;
    return chain(m, n);
}

}  // namespace fig1
