#include "ugraph/generate.hpp"

namespace ugraph {

Ultragraph random_finite(std::mt19937_64& rng, int max_vertices, int max_edges) {
    const int nv = std::uniform_int_distribution<int>(1, max_vertices)(rng);
    const int ne = std::uniform_int_distribution<int>(1, max_edges)(rng);
    std::vector<Ultragraph::Edge> edges;
    for (int i = 0; i < ne; ++i) {
        const auto mask = std::uniform_int_distribution<std::uint32_t>(1, (1u << nv) - 1)(rng);
        std::vector<std::int64_t> ms;
        for (int m = 1; m <= nv; ++m) {
            if ((mask >> (m - 1)) & 1) ms.push_back(m);
        }
        const VertexId s(std::uniform_int_distribution<int>(1, nv)(rng));
        edges.push_back({s, UPSet::from_members(ms)});
    }
    return Ultragraph::finite(nv, std::move(edges));
}

}  // namespace ugraph
