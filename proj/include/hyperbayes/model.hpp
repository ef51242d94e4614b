#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "hyperbayes/hypergraph.hpp"

namespace hyperbayes {

/// Log-domain weight; kLogZero encodes probability zero.
using LogWeight = double;
inline constexpr LogWeight kLogZero = -std::numeric_limits<double>::infinity();
inline bool is_log_zero(LogWeight w) { return w == kLogZero; }

/// Model parameters: per-hyperedge pairwise emission probability p, sparsity
/// weight beta, multiplicity-penalty weight gamma, maximum hyperedge size, and
/// an optional observed-vertex subset (absent means full observation).
struct ModelParams {
    double p = 0.99;
    double beta = 1.0;
    double gamma = 5.0;
    std::uint32_t max_edge_size = 6;
    std::optional<std::vector<VertexId>> observed_vertices;

    void validate() const;
};

/// log(1 - exp(x)) for x < 0, stable over the full range.
double log1mexp(double x);

/// Noisy-OR edge probability: 1 - (1-p)^{cover}, where cover is the
/// multiplicity-weighted number of hyperedges containing both endpoints.
double edge_prob(const Hypergraph& h, VertexId i, VertexId j, const ModelParams& params);

/// Full-graph log likelihood: present pairs contribute
/// log[1 - (1-p)^{c_ij}], covered absent pairs contribute c_ij * log(1-p).
/// Returns kLogZero iff some present pair is uncovered. Cost is proportional
/// to the covered-pair count, not to the square of the vertex count.
LogWeight log_likelihood_full(const PairwiseGraph& g, const Hypergraph& h,
                              const ModelParams& params);

/// Bernoulli likelihood over the pairs covered by at least one hyperedge:
/// A_ij log p + (1 - A_ij) log(1-p). Diagnostic only; the sampler never uses it.
LogWeight log_likelihood_bernoulli(const PairwiseGraph& g, const Hypergraph& h,
                                   const ModelParams& params);

/// Partial-observation likelihood: the full-likelihood sum restricted to
/// unordered pairs with both endpoints in params.observed_vertices.
/// Throws std::invalid_argument when g_obs has an edge outside that subset.
LogWeight log_likelihood_partial(const PairwiseGraph& g_obs, const Hypergraph& h,
                                 const ModelParams& params);

/// Structural prior: -beta * |E| - gamma * sum_e(delta(e) - 1) with
/// |E| the multiplicity-weighted edge count; kLogZero when any edge exceeds
/// max_edge_size. Unnormalized.
LogWeight log_prior(const Hypergraph& h, const ModelParams& params);

/// Unnormalized log posterior: log_likelihood_full + log_prior.
LogWeight log_posterior(const PairwiseGraph& g, const Hypergraph& h,
                        const ModelParams& params);

}  // namespace hyperbayes
