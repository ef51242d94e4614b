#include "hyperbayes/sampler.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include "hyperbayes/io.hpp"

namespace hyperbayes {

double binary_entropy(double alpha) {
    if (alpha <= 0.0 || alpha >= 1.0) return 0.0;
    return -(alpha * std::log2(alpha) + (1.0 - alpha) * std::log2(1.0 - alpha));
}

void SamplerConfig::validate() const {
    params.validate();
    if (iterations == 0) throw std::invalid_argument("iterations must be positive");
    if (effective_burn_in() >= iterations) {
        throw std::invalid_argument("burn_in must be smaller than iterations");
    }
    if (params.max_edge_size > 20) {
        throw std::invalid_argument("sampler supports max_edge_size <= 20");
    }
}

Hypergraph initial_hypergraph(const PairwiseGraph& g, std::uint32_t max_edge_size,
                              std::size_t clique_cap) {
    Hypergraph h(g.num_vertices());
    for (const Hyperedge& clique : maximal_cliques(g, clique_cap)) {
        const auto& vs = clique.vertices();
        const std::size_t k = vs.size();
        if (k <= max_edge_size) {
            h.add_edge(clique);
            continue;
        }
        // Greedy pair cover by subsets of exactly max_edge_size vertices:
        // walk the clique's pairs in lexicographic order and, for each still
        // uncovered one, emit {a, b} plus the cyclically following vertices.
        std::set<PairKey> covered;
        for (std::size_t i = 0; i + 1 < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                if (covered.count(pair_key(vs[i], vs[j]))) continue;
                std::vector<VertexId> sub = {vs[i], vs[j]};
                for (std::size_t step = 1; sub.size() < max_edge_size; ++step) {
                    std::size_t pos = (j + step) % k;
                    if (pos == i || pos == j) continue;
                    sub.push_back(vs[pos]);
                }
                Hyperedge edge(std::move(sub));
                const auto& evs = edge.vertices();
                for (std::size_t a = 0; a + 1 < evs.size(); ++a) {
                    for (std::size_t b = a + 1; b < evs.size(); ++b) {
                        covered.insert(pair_key(evs[a], evs[b]));
                    }
                }
                if (h.multiplicity(edge) == 0) h.add_edge(std::move(edge));
            }
        }
    }
    return h;
}

double acceptance_probability(const PairwiseGraph& g, const Hypergraph& h_old,
                              const Hypergraph& h_new, double log_q_ratio,
                              const ModelParams& params) {
    LogWeight lp_old = log_posterior(g, h_old, params);
    if (is_log_zero(lp_old)) {
        throw std::invalid_argument("current state has log posterior -inf");
    }
    LogWeight lp_new = log_posterior(g, h_new, params);
    if (is_log_zero(lp_new)) return 0.0;
    double a = lp_new - lp_old + log_q_ratio;
    return a >= 0.0 ? 1.0 : std::exp(a);
}

namespace {

constexpr double kLog2 = 0.6931471805599453;

struct VertexVecHash {
    std::size_t operator()(const std::vector<VertexId>& v) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (VertexId x : v) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

const double* binom_log_table() {
    static const std::vector<double> table = [] {
        std::vector<double> c(21 * 21, 0.0);
        for (int n = 0; n <= 20; ++n) {
            c[n * 21 + 0] = 1.0;
            for (int k = 1; k <= n; ++k) {
                c[n * 21 + k] = c[(n - 1) * 21 + (k - 1)] + (k <= n - 1 ? c[(n - 1) * 21 + k] : 0.0);
            }
        }
        for (double& v : c) v = v > 0.0 ? std::log(v) : 0.0;
        return c;
    }();
    return table.data();
}

inline double log_binom(std::size_t n, std::size_t k) { return binom_log_table()[n * 21 + k]; }

}  // namespace

struct InternalProposal {
    bool null_move = false;
    bool is_add = false;
    std::size_t target_idx = 0;
    std::vector<VertexId> sub;
    bool sub_exists = false;  // before the move
    bool erases = false;      // remove drops the last copy
    double log_q_ratio = 0.0;
    double delta_lp = 0.0;
    double alpha = 1.0;
    bool uncovers = false;  // remove would leave an observed pair uncovered
};

class ChainState {
public:
    ChainState(const PairwiseGraph& g, const Hypergraph& initial, const ModelParams& params)
        : g_(&g), params_(params), log_q_(std::log1p(-params.p)) {
        params_.validate();
        for (PairKey k : g.pairs()) observed_.insert(k);
        for (const auto& [edge, mult] : initial.edges()) {
            if (edge.size() > params_.max_edge_size) {
                throw std::invalid_argument("initial state violates the size limit");
            }
            index_[edge.vertices()] = edges_.size();
            edges_.push_back(edge.vertices());
            mult_.push_back(mult);
            total_mult_ += mult;
            for (std::size_t a = 0; a + 1 < edge.size(); ++a) {
                for (std::size_t b = a + 1; b < edge.size(); ++b) {
                    cover_[pair_key(edge.vertices()[a], edge.vertices()[b])] += mult;
                }
            }
        }
        for (const auto& [k, c] : cover_) {
            if (!observed_.count(k)) {
                throw std::invalid_argument("initial state projects a pair outside the graph");
            }
        }
        for (PairKey k : observed_) {
            if (!cover_.count(k)) {
                throw std::invalid_argument("initial state leaves an observed pair uncovered");
            }
        }
        log_lik_ = log_likelihood_full(g, initial, params_);
        log_prior_ = log_prior(initial, params_);
    }

    InternalProposal propose(Rng& rng) {
        InternalProposal p;
        const std::size_t m = edges_.size();
        if (m == 0) {
            p.null_move = true;
            return p;
        }
        p.target_idx = static_cast<std::size_t>(rng.uniform_below(m));
        const auto& target = edges_[p.target_idx];
        const std::size_t k = target.size();
        const std::size_t kcap = std::min<std::size_t>(k, params_.max_edge_size);
        p.is_add = rng.uniform_below(2) == 0;
        if (p.is_add) {
            const std::size_t s = 2 + static_cast<std::size_t>(rng.uniform_below(kcap - 1));
            sample_subset(target, s, rng, p.sub);
            p.sub_exists = index_.count(p.sub) != 0;
            const std::size_t m_new = m + (p.sub_exists ? 0 : 1);
            const std::size_t s_new = present_subsets(target) + (p.sub_exists ? 0 : 1);
            const double log_fwd =
                -std::log(double(m)) - kLog2 - std::log(double(kcap - 1)) - log_binom(k, s);
            const double log_rev = -std::log(double(m_new)) - kLog2 - std::log(double(s_new));
            p.log_q_ratio = log_rev - log_fwd;
            p.delta_lp = add_delta(p.sub, p.sub_exists);
        } else {
            present_subsets(target, &subset_masks_);
            const std::size_t s_cur = subset_masks_.size();
            const std::uint32_t mask =
                subset_masks_[static_cast<std::size_t>(rng.uniform_below(s_cur))];
            p.sub.clear();
            for (std::size_t bit = 0; bit < k; ++bit) {
                if (mask & (1u << bit)) p.sub.push_back(target[bit]);
            }
            p.sub_exists = true;
            const std::size_t sub_idx = index_.at(p.sub);
            p.erases = mult_[sub_idx] == 1;
            if (p.erases && p.sub == target) {
                // Removing the target itself: no present superset remains to
                // re-propose it, so the reverse move has probability zero.
                p.log_q_ratio = kLogZero;
                p.delta_lp = remove_delta(p.sub, p.erases, &p.uncovers);
                p.alpha = 0.0;
                return p;
            }
            const std::size_t m_new = m - (p.erases ? 1 : 0);
            const double log_fwd = -std::log(double(m)) - kLog2 - std::log(double(s_cur));
            const double log_rev = -std::log(double(m_new)) - kLog2 -
                                   std::log(double(kcap - 1)) - log_binom(k, p.sub.size());
            p.log_q_ratio = log_rev - log_fwd;
            p.delta_lp = remove_delta(p.sub, p.erases, &p.uncovers);
        }
        if (is_log_zero(p.delta_lp)) {
            p.alpha = 0.0;
        } else {
            const double a = p.delta_lp + p.log_q_ratio;
            p.alpha = a >= 0.0 ? 1.0 : std::exp(a);
        }
        return p;
    }

    void apply(const InternalProposal& p) {
        if (p.null_move) return;
        if (p.is_add) {
            for_pairs(p.sub, [&](PairKey key) {
                std::uint32_t& c = cover_[key];
                log_lik_ += term(c + 1) - term(c);
                ++c;
            });
            auto it = index_.find(p.sub);
            if (it != index_.end()) {
                ++mult_[it->second];
                log_prior_ -= params_.beta + params_.gamma;
            } else {
                index_[p.sub] = edges_.size();
                edges_.push_back(p.sub);
                mult_.push_back(1);
                log_prior_ -= params_.beta;
            }
            ++total_mult_;
        } else {
            for_pairs(p.sub, [&](PairKey key) {
                auto it = cover_.find(key);
                std::uint32_t& c = it->second;
                log_lik_ += term(c - 1) - term(c);
                if (--c == 0) cover_.erase(it);
            });
            auto it = index_.find(p.sub);
            const std::size_t idx = it->second;
            if (mult_[idx] > 1) {
                --mult_[idx];
                log_prior_ += params_.beta + params_.gamma;
            } else {
                const std::size_t last = edges_.size() - 1;
                index_.erase(it);
                if (idx != last) {
                    edges_[idx] = std::move(edges_[last]);
                    mult_[idx] = mult_[last];
                    index_[edges_[idx]] = idx;
                }
                edges_.pop_back();
                mult_.pop_back();
                log_prior_ += params_.beta;
            }
            --total_mult_;
        }
    }

    Hypergraph materialize() const {
        Hypergraph h(g_->num_vertices());
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            h.add_edge(Hyperedge(edges_[i]), mult_[i]);
        }
        return h;
    }

    bool projection_matches() const {
        if (cover_.size() != observed_.size()) return false;
        for (const auto& [k, c] : cover_) {
            if (c == 0 || !observed_.count(k)) return false;
        }
        return true;
    }

    double running_log_posterior() const { return log_lik_ + log_prior_; }
    std::uint64_t total_mult() const { return total_mult_; }
    std::size_t distinct() const { return edges_.size(); }
    const std::vector<VertexId>& edge_at(std::size_t idx) const { return edges_[idx]; }
    const PairwiseGraph& graph() const { return *g_; }
    const ModelParams& params() const { return params_; }

private:
    template <typename Fn>
    static void for_pairs(const std::vector<VertexId>& vs, Fn&& fn) {
        for (std::size_t a = 0; a + 1 < vs.size(); ++a) {
            for (std::size_t b = a + 1; b < vs.size(); ++b) {
                fn(pair_key(vs[a], vs[b]));
            }
        }
    }

    // log(1 - (1-p)^c); cached per cover count.
    double term(std::uint64_t c) {
        if (c >= term_cache_.size()) {
            std::size_t old = term_cache_.size();
            term_cache_.resize(c + 1);
            for (std::size_t i = old; i <= c; ++i) {
                term_cache_[i] = i == 0 ? kLogZero : log1mexp(double(i) * log_q_);
            }
        }
        return term_cache_[c];
    }

    double add_delta(const std::vector<VertexId>& sub, bool exists) {
        // Additions are subsets of a present edge, so every touched pair is
        // observed and already covered (c >= 1).
        double delta = -params_.beta - (exists ? params_.gamma : 0.0);
        for_pairs(sub, [&](PairKey key) {
            const std::uint32_t c = cover_.at(key);
            delta += term(c + 1) - term(c);
        });
        return delta;
    }

    double remove_delta(const std::vector<VertexId>& sub, bool erases, bool* uncovers) {
        double delta = params_.beta + (erases ? 0.0 : params_.gamma);
        bool dead = false;
        for_pairs(sub, [&](PairKey key) {
            const std::uint32_t c = cover_.at(key);
            if (c == 1) {
                dead = true;
                return;
            }
            delta += term(c - 1) - term(c);
        });
        *uncovers = dead;
        return dead ? kLogZero : delta;
    }

    // Count (or collect) the present sub-hyperedges of a target edge,
    // including the edge itself. Deterministic mask order.
    std::size_t present_subsets(const std::vector<VertexId>& target,
                                std::vector<std::uint32_t>* masks = nullptr) {
        const std::size_t k = target.size();
        if (masks) masks->clear();
        std::size_t count = 0;
        scratch_.clear();
        const std::uint32_t full = (k == 32) ? 0xffffffffu : ((1u << k) - 1);
        for (std::uint32_t mask = 1; mask <= full; ++mask) {
            if (std::popcount(mask) < 2) continue;
            scratch_.clear();
            for (std::size_t bit = 0; bit < k; ++bit) {
                if (mask & (1u << bit)) scratch_.push_back(target[bit]);
            }
            if (index_.count(scratch_)) {
                ++count;
                if (masks) masks->push_back(mask);
            }
        }
        return count;
    }

    void sample_subset(const std::vector<VertexId>& target, std::size_t s, Rng& rng,
                       std::vector<VertexId>& out) {
        scratch_ = target;
        for (std::size_t i = 0; i < s; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(scratch_.size() - i));
            std::swap(scratch_[i], scratch_[j]);
        }
        out.assign(scratch_.begin(), scratch_.begin() + s);
        std::sort(out.begin(), out.end());
    }

    const PairwiseGraph* g_;
    ModelParams params_;
    double log_q_;
    std::unordered_set<PairKey> observed_;
    std::vector<std::vector<VertexId>> edges_;
    std::vector<std::uint32_t> mult_;
    std::unordered_map<std::vector<VertexId>, std::size_t, VertexVecHash> index_;
    std::unordered_map<PairKey, std::uint32_t> cover_;
    std::uint64_t total_mult_ = 0;
    double log_lik_ = 0.0;
    double log_prior_ = 0.0;
    std::vector<double> term_cache_;
    std::vector<VertexId> scratch_;
    std::vector<std::uint32_t> subset_masks_;
};

Chain::Chain(const PairwiseGraph& g, const Hypergraph& initial, const ModelParams& params)
    : state_(new ChainState(g, initial, params)) {}

Chain::~Chain() { delete state_; }

Chain::Proposal Chain::propose(Rng& rng) {
    InternalProposal ip = state_->propose(rng);
    Proposal p;
    p.delta_log_posterior = ip.delta_lp;
    p.alpha = ip.null_move ? 1.0 : ip.alpha;
    p.breaks_projection = ip.uncovers;
    if (ip.null_move) {
        p.move.kind = ProposalMove::Kind::Null;
    } else {
        p.move.kind = ip.is_add ? ProposalMove::Kind::AddSub : ProposalMove::Kind::RemoveSub;
        p.move.target = Hyperedge(state_->edge_at(ip.target_idx));
        p.move.sub = Hyperedge(ip.sub);
        p.move.log_q_ratio = ip.log_q_ratio;
    }
    return p;
}

void Chain::apply(const Proposal& proposal) {
    if (proposal.move.kind == ProposalMove::Kind::Null) return;
    if (proposal.breaks_projection || is_log_zero(proposal.delta_log_posterior)) {
        throw std::invalid_argument("cannot apply a projection-breaking move");
    }
    InternalProposal ip;
    ip.is_add = proposal.move.kind == ProposalMove::Kind::AddSub;
    ip.sub = proposal.move.sub.vertices();
    state_->apply(ip);
}

Hypergraph Chain::current() const { return state_->materialize(); }
double Chain::running_log_posterior() const { return state_->running_log_posterior(); }
std::uint64_t Chain::total_edges() const { return state_->total_mult(); }
std::size_t Chain::distinct_edges() const { return state_->distinct(); }

SamplerTrace run_sampler(const PairwiseGraph& g, const SamplerConfig& config) {
    config.validate();
    SamplerTrace trace;
    Hypergraph h0 = initial_hypergraph(g, config.params.max_edge_size, config.clique_cap);
    ChainState state(g, h0, config.params);
    Rng rng(config.seed);

    trace.initial_log_posterior = state.running_log_posterior();
    trace.initial_num_hyperedges = state.total_mult();
    trace.map_hypergraph = h0;
    trace.map_log_posterior = log_posterior(g, h0, config.params);
    trace.map_iteration = 0;

    const auto start = std::chrono::steady_clock::now();
    if (config.record_trace) trace.rows.reserve(config.iterations);
    if (config.record_trace && config.record_timing) trace.elapsed_ns.reserve(config.iterations);

    for (std::uint64_t t = 1; t <= config.iterations; ++t) {
        InternalProposal p = state.propose(rng);
        const double u = rng.uniform01();
        ++trace.proposals;
        double alpha = 1.0;
        bool accepted = true;
        if (!p.null_move) {
            alpha = p.alpha;
            accepted = u < alpha;
            if (accepted && config.enforce_projection && p.uncovers) accepted = false;
            if (accepted) state.apply(p);
        }
        if (accepted) ++trace.accepted;

        if (accepted && config.verify_projection) {
            if (!state.projection_matches() ||
                !(project(state.materialize()) == g)) {
                ++trace.projection_violations;
            }
        }

        const double running = state.running_log_posterior();
        if (accepted && !p.null_move && running > trace.map_log_posterior + 1e-12) {
            Hypergraph snapshot = state.materialize();
            const double exact = log_posterior(g, snapshot, config.params);
            if (exact > trace.map_log_posterior) {
                trace.map_hypergraph = std::move(snapshot);
                trace.map_log_posterior = exact;
                trace.map_iteration = t;
            }
        }

        if (config.record_trace) {
            trace.rows.push_back(TraceRow{t, alpha, binary_entropy(alpha), accepted,
                                          state.total_mult(), running});
            if (config.record_timing) {
                trace.elapsed_ns.push_back(static_cast<std::uint64_t>(
                    std::chrono::duration_cast<std::chrono::nanoseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count()));
            }
        }
        if (config.observer) config.observer(t, state.materialize());
    }

    trace.final_hypergraph = state.materialize();
    trace.final_log_posterior = state.running_log_posterior();
    return trace;
}

const Hypergraph& map_estimate(const SamplerTrace& trace) { return trace.map_hypergraph; }

void write_trace_csv(const SamplerTrace& trace, const std::string& path, std::uint64_t stride,
                     const std::string& comment) {
    if (stride == 0) stride = 1;
    std::string out;
    if (!comment.empty()) out += "# " + comment + "\n";
    out += "t,alpha,entropy,accepted,num_hyperedges,log_posterior\n";
    char buf[160];
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        const TraceRow& r = trace.rows[i];
        if (r.t % stride != 0 && i + 1 != trace.rows.size()) continue;
        std::snprintf(buf, sizeof(buf), "%llu,%.17g,%.17g,%d,%llu,%.17g\n",
                      static_cast<unsigned long long>(r.t), r.alpha, r.entropy,
                      r.accepted ? 1 : 0, static_cast<unsigned long long>(r.num_hyperedges),
                      r.log_posterior);
        out += buf;
    }
    write_file(path, out);
}

std::vector<ConvergencePoint> convergence_curve(const SamplerTrace& trace,
                                                std::size_t max_points) {
    std::vector<ConvergencePoint> out;
    if (trace.rows.empty() || trace.elapsed_ns.size() != trace.rows.size()) return out;
    const std::size_t stride = std::max<std::size_t>(1, trace.rows.size() / max_points);
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        if (i % stride != 0 && i + 1 != trace.rows.size()) continue;
        out.push_back(ConvergencePoint{trace.rows[i].t,
                                       static_cast<double>(trace.elapsed_ns[i]) / 1e6,
                                       trace.rows[i].num_hyperedges});
    }
    return out;
}

}  // namespace hyperbayes
