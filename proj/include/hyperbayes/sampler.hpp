#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hyperbayes/model.hpp"
#include "hyperbayes/rng.hpp"

namespace hyperbayes {

/// Binary entropy of a Bernoulli(alpha) decision, in bits; 0*log0 := 0.
double binary_entropy(double alpha);

/// One proposed chain move: add or remove one copy of a sub-hyperedge `sub`
/// of the selected target edge (sub is a subset of target, 2 <= |sub|).
struct ProposalMove {
    enum class Kind { AddSub, RemoveSub, Null };
    Kind kind = Kind::Null;
    Hyperedge target;
    Hyperedge sub;
    double log_q_ratio = 0.0;  // log Q(old|new) - log Q(new|old)
};

struct SamplerConfig {
    std::uint64_t iterations = 50000;
    std::uint64_t seed = 0;
    /// Sentinel UINT64_MAX means iterations / 10.
    std::uint64_t burn_in = UINT64_MAX;
    ModelParams params;
    bool record_trace = true;
    bool record_timing = false;
    /// Hard constraint: accept only candidates whose projection equals the
    /// observed graph. The proposal never creates phantom pairs, so disabling
    /// this leaves rejection to the likelihood alone.
    bool enforce_projection = true;
    /// Debug: re-project the state from scratch after every accepted move and
    /// count mismatches against the observed graph.
    bool verify_projection = false;
    std::size_t clique_cap = 1000000;
    /// Called after every iteration with the current state; materializes a
    /// Hypergraph per call, so leave unset for throughput runs.
    std::function<void(std::uint64_t t, const Hypergraph& state)> observer;

    std::uint64_t effective_burn_in() const {
        return burn_in == UINT64_MAX ? iterations / 10 : burn_in;
    }
    void validate() const;
};

struct TraceRow {
    std::uint64_t t = 0;
    double alpha = 0.0;
    double entropy = 0.0;
    bool accepted = false;
    std::uint64_t num_hyperedges = 0;
    double log_posterior = 0.0;
};

struct SamplerTrace {
    std::vector<TraceRow> rows;           // empty when record_trace is off
    std::vector<std::uint64_t> elapsed_ns;  // parallel to rows when timing is on

    Hypergraph map_hypergraph;
    double map_log_posterior = kLogZero;
    std::uint64_t map_iteration = 0;      // 0 denotes the initial state

    Hypergraph final_hypergraph;
    double final_log_posterior = kLogZero;

    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
    std::uint64_t projection_violations = 0;  // populated by verify_projection

    double initial_log_posterior = kLogZero;
    std::uint64_t initial_num_hyperedges = 0;
};

/// Starting state: the maximal cliques of g, with any clique larger than
/// max_edge_size replaced by a deterministic greedy cover of its pairs by
/// subsets of exactly that size. The result projects back to g exactly.
Hypergraph initial_hypergraph(const PairwiseGraph& g, std::uint32_t max_edge_size,
                              std::size_t clique_cap = 1000000);

/// Metropolis-Hastings acceptance probability
/// min[1, exp(logpost(h_new) - logpost(h_old) + log_q_ratio)].
double acceptance_probability(const PairwiseGraph& g, const Hypergraph& h_old,
                              const Hypergraph& h_new, double log_q_ratio,
                              const ModelParams& params);

/// Runs the chain. Identical (g, config) gives a byte-identical trace.
SamplerTrace run_sampler(const PairwiseGraph& g, const SamplerConfig& config);

/// The highest-log-posterior state seen (ties to the earliest iteration).
const Hypergraph& map_estimate(const SamplerTrace& trace);

/// CSV export: columns t,alpha,entropy,accepted,num_hyperedges,log_posterior.
/// A non-empty comment becomes a leading '#' line.
void write_trace_csv(const SamplerTrace& trace, const std::string& path,
                     std::uint64_t stride = 1, const std::string& comment = "");

/// Downsampled (t, elapsed_ms, num_hyperedges) series; requires record_timing.
struct ConvergencePoint {
    std::uint64_t t = 0;
    double elapsed_ms = 0.0;
    std::uint64_t num_hyperedges = 0;
};
std::vector<ConvergencePoint> convergence_curve(const SamplerTrace& trace,
                                                std::size_t max_points = 1000);

class ChainState;

/// A live chain over a fixed observed graph. run_sampler drives one of these;
/// it is public so the proposal mechanics can be used and tested directly.
class Chain {
public:
    /// `initial` must project to g exactly.
    Chain(const PairwiseGraph& g, const Hypergraph& initial, const ModelParams& params);
    ~Chain();
    Chain(const Chain&) = delete;
    Chain& operator=(const Chain&) = delete;

    struct Proposal {
        ProposalMove move;
        double delta_log_posterior = 0.0;  // kLogZero when an observed pair loses its last cover
        double alpha = 1.0;
        bool breaks_projection = false;
    };

    /// Draws one move and evaluates it; the state is not changed.
    Proposal propose(Rng& rng);
    /// Applies a proposed move (caller decides acceptance).
    void apply(const Proposal& proposal);

    Hypergraph current() const;
    double running_log_posterior() const;
    std::uint64_t total_edges() const;
    std::size_t distinct_edges() const;

private:
    friend SamplerTrace run_sampler(const PairwiseGraph& g, const SamplerConfig& config);
    ChainState* state_;
};

}  // namespace hyperbayes
