#pragma once

// Command-line driver and the verification bundles it runs.

#include "ugraph/builder.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ugraph::cli {

/// Runs the `ugraph` tool; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Directory holding the bundled example and its golden tables.
std::string data_dir();

/// The displayed quantities of the bundled example, keyed by golden file stem.
std::map<std::string, std::string> example_tables(Builder& b);

/// Compact DSL text of a finite ultragraph.
std::string to_compact_dsl(const Ultragraph& g);

/// Every check that is exact on a finite instance: set identities, regular
/// vertices, degeneracy, F-structure, path bijection for all vertex pairs,
/// Condition (K) on both sides and the ideal correspondence.
Report verify_finite_instance(const Ultragraph& g, std::size_t max_eps = 3);

/// Window checks for an arbitrary instance.
Report verify_window(Builder& b, const BuildParams& params, std::int64_t pointwise_bound, std::size_t max_eps = 2);

struct FuzzOptions {
    std::uint64_t seed = 42;
    std::size_t count = 200;
    int max_vertices = 5;
    int max_edges = 4;
    std::size_t max_eps = 3;
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct FuzzCase {
    std::size_t index = 0;
    std::string instance;
    Report report;
};

/// The random instance used for case `index` of a run with `seed`.
Ultragraph fuzz_instance(std::uint64_t seed, std::size_t index, int max_vertices, int max_edges);

/// Runs verify_finite_instance on random instances, in parallel; results are
/// ordered by case index.
std::vector<FuzzCase> fuzz(const FuzzOptions& opts);

}  // namespace ugraph::cli
