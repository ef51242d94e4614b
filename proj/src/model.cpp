#include "hyperbayes/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace hyperbayes {

void ModelParams::validate() const {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must be in (0, 1)");
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
    if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
    if (max_edge_size < 2) throw std::invalid_argument("max_edge_size must be >= 2");
}

double log1mexp(double x) {
    // x <= 0; log(1 - e^x) with the usual two-branch split at -ln 2.
    if (x >= 0.0) return kLogZero;
    if (x > -0.6931471805599453) return std::log(-std::expm1(x));
    return std::log1p(-std::exp(x));
}

namespace {

// Multiplicity-weighted cover counts for every pair inside some hyperedge.
std::map<PairKey, std::uint64_t> cover_counts(const Hypergraph& h) {
    std::map<PairKey, std::uint64_t> cover;
    for (const auto& [edge, mult] : h.edges()) {
        const auto& vs = edge.vertices();
        for (std::size_t a = 0; a + 1 < vs.size(); ++a) {
            for (std::size_t b = a + 1; b < vs.size(); ++b) {
                cover[pair_key(vs[a], vs[b])] += mult;
            }
        }
    }
    return cover;
}

// log(1 - (1-p)^c) for c >= 1.
double present_term(std::uint64_t c, double log_q) {
    return log1mexp(static_cast<double>(c) * log_q);
}

}  // namespace

double edge_prob(const Hypergraph& h, VertexId i, VertexId j, const ModelParams& params) {
    params.validate();
    std::uint64_t c = edge_cover_count(h, i, j);
    if (c == 0) return 0.0;
    return -std::expm1(static_cast<double>(c) * std::log1p(-params.p));
}

LogWeight log_likelihood_full(const PairwiseGraph& g, const Hypergraph& h,
                              const ModelParams& params) {
    params.validate();
    if (g.num_vertices() != h.num_vertices()) {
        throw std::invalid_argument("vertex-count mismatch");
    }
    const double log_q = std::log1p(-params.p);
    auto cover = cover_counts(h);
    double sum = 0.0;
    for (PairKey k : g.pairs()) {
        auto it = cover.find(k);
        if (it == cover.end()) return kLogZero;
        sum += present_term(it->second, log_q);
    }
    for (const auto& [k, c] : cover) {
        if (!g.pairs().count(k)) sum += static_cast<double>(c) * log_q;
    }
    return sum;
}

LogWeight log_likelihood_bernoulli(const PairwiseGraph& g, const Hypergraph& h,
                                   const ModelParams& params) {
    params.validate();
    if (g.num_vertices() != h.num_vertices()) {
        throw std::invalid_argument("vertex-count mismatch");
    }
    const double log_p = std::log(params.p);
    const double log_q = std::log1p(-params.p);
    double sum = 0.0;
    for (const auto& [k, c] : cover_counts(h)) {
        sum += g.pairs().count(k) ? log_p : log_q;
    }
    return sum;
}

LogWeight log_likelihood_partial(const PairwiseGraph& g_obs, const Hypergraph& h,
                                 const ModelParams& params) {
    params.validate();
    if (g_obs.num_vertices() != h.num_vertices()) {
        throw std::invalid_argument("vertex-count mismatch");
    }
    if (!params.observed_vertices.has_value()) {
        return log_likelihood_full(g_obs, h, params);
    }
    std::vector<bool> in_omega(h.num_vertices(), false);
    for (VertexId v : *params.observed_vertices) {
        if (v >= h.num_vertices()) throw std::invalid_argument("observed vertex out of range");
        in_omega[v] = true;
    }
    for (PairKey k : g_obs.pairs()) {
        if (!in_omega[pair_first(k)] || !in_omega[pair_second(k)]) {
            throw std::invalid_argument("observed edge outside the observed vertex set");
        }
    }
    const double log_q = std::log1p(-params.p);
    auto cover = cover_counts(h);
    double sum = 0.0;
    for (PairKey k : g_obs.pairs()) {
        auto it = cover.find(k);
        if (it == cover.end()) return kLogZero;
        sum += present_term(it->second, log_q);
    }
    for (const auto& [k, c] : cover) {
        if (!in_omega[pair_first(k)] || !in_omega[pair_second(k)]) continue;
        if (!g_obs.pairs().count(k)) sum += static_cast<double>(c) * log_q;
    }
    return sum;
}

LogWeight log_prior(const Hypergraph& h, const ModelParams& params) {
    params.validate();
    for (const auto& [edge, mult] : h.edges()) {
        if (edge.size() > params.max_edge_size) return kLogZero;
    }
    const double total = static_cast<double>(h.total_edge_count());
    const double duplicates = total - static_cast<double>(h.distinct_edge_count());
    return -params.beta * total - params.gamma * duplicates;
}

LogWeight log_posterior(const PairwiseGraph& g, const Hypergraph& h,
                        const ModelParams& params) {
    LogWeight lik = log_likelihood_full(g, h, params);
    if (is_log_zero(lik)) return kLogZero;
    LogWeight prior = log_prior(h, params);
    if (is_log_zero(prior)) return kLogZero;
    return lik + prior;
}

}  // namespace hyperbayes
