#pragma once

#include <cstdint>
#include <vector>

#include "hyperbayes/hypergraph.hpp"

namespace hyperbayes {

/// One (size, count) bucket of a planted-hypergraph recipe.
struct SizeCount {
    std::uint32_t size = 2;
    std::uint32_t count = 0;
};

/// Builds a planted hypergraph whose clique projection has the planted edges
/// as exactly its maximal cliques: any two edges share at most one vertex and
/// no pair of a new edge may close a triangle with outside vertices. Larger
/// sizes are placed first; placement is rejection sampling, deterministic
/// under the seed. Throws LimitError when a bucket cannot be placed.
Hypergraph make_planted_hypergraph(std::uint32_t num_vertices,
                                   const std::vector<SizeCount>& recipe,
                                   std::uint64_t seed);

/// G(n, p) conditioned on connectivity (resampled until connected).
PairwiseGraph make_connected_gnp(std::uint32_t num_vertices, double edge_prob,
                                 std::uint64_t seed);

}  // namespace hyperbayes
