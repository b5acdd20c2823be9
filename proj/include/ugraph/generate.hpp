#pragma once

// Random finite ultragraphs for property tests and fuzzing.

#include "ugraph/model.hpp"

#include <random>

namespace ugraph {

/// 1..max_vertices vertices, 1..max_edges edges, sources uniform, ranges
/// uniform among nonempty subsets.
Ultragraph random_finite(std::mt19937_64& rng, int max_vertices, int max_edges);

}  // namespace ugraph
