#pragma once

#include <utility>
#include <vector>

#include "hyperbayes/model.hpp"

namespace hyperbayes {

/// Limits for exhaustive enumeration. The candidate edges are all cliques of
/// the observed graph with size in [2, max_edge_size]; the state space is
/// (max_multiplicity + 1)^candidates and the operations refuse when it
/// exceeds max_states.
struct EnumerationBounds {
    std::uint32_t max_vertices = 6;
    std::uint32_t max_multiplicity = 2;
    double max_states = 1e8;
};

/// All cliques of g with size in [2, max_size], lexicographic order.
std::vector<Hyperedge> all_cliques(const PairwiseGraph& g, std::uint32_t max_size);

/// Every hypergraph over the candidate cliques (multiplicities up to the
/// bound) whose projection equals g exactly. Throws LimitError when the
/// search space exceeds the bounds.
std::vector<Hypergraph> enumerate_valid(const PairwiseGraph& g, const ModelParams& params,
                                        const EnumerationBounds& bounds);

/// Exact MAP over the enumerated space; ties broken lexicographically by
/// serialized form. Branch-and-bound, but identical to the argmax over
/// enumerate_valid.
std::pair<Hypergraph, double> exact_map(const PairwiseGraph& g, const ModelParams& params,
                                        const EnumerationBounds& bounds);

/// Normalized posterior over the enumerated space; probabilities sum to 1.
std::vector<std::pair<Hypergraph, double>> exact_posterior_table(
    const PairwiseGraph& g, const ModelParams& params, const EnumerationBounds& bounds);

}  // namespace hyperbayes
