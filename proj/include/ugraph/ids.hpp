#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace ugraph {

/// Index m of the vertex v_m, m >= 1.
struct VertexId {
    std::int64_t value = 0;

    constexpr VertexId() = default;
    constexpr explicit VertexId(std::int64_t v) : value(v) {}
    auto operator<=>(const VertexId&) const = default;
    std::string to_string() const { return "v" + std::to_string(value); }
};

/// Index n of the ultraedge e_n in the fixed listing e_1, e_2, ...
struct EdgeId {
    std::int64_t value = 0;

    constexpr EdgeId() = default;
    constexpr explicit EdgeId(std::int64_t v) : value(v) {}
    auto operator<=>(const EdgeId&) const = default;
    std::string to_string() const { return "e" + std::to_string(value); }
};

}  // namespace ugraph

template <>
struct std::hash<ugraph::VertexId> {
    std::size_t operator()(const ugraph::VertexId& v) const noexcept { return std::hash<std::int64_t>{}(v.value); }
};

template <>
struct std::hash<ugraph::EdgeId> {
    std::size_t operator()(const ugraph::EdgeId& e) const noexcept { return std::hash<std::int64_t>{}(e.value); }
};
