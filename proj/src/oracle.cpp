#include "hyperbayes/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "hyperbayes/io.hpp"

namespace hyperbayes {

namespace {

struct AdjMatrix {
    std::uint32_t n;
    std::vector<bool> bits;
    explicit AdjMatrix(const PairwiseGraph& g) : n(g.num_vertices()), bits(std::size_t(n) * n) {
        for (PairKey k : g.pairs()) {
            VertexId i = pair_first(k), j = pair_second(k);
            bits[std::size_t(i) * n + j] = bits[std::size_t(j) * n + i] = true;
        }
    }
    bool at(VertexId i, VertexId j) const { return bits[std::size_t(i) * n + j]; }
};

void grow_cliques(const AdjMatrix& adj, std::uint32_t max_size, std::vector<VertexId>& cur,
                  VertexId next, std::vector<Hyperedge>& out, std::size_t cap) {
    for (VertexId v = next; v < adj.n; ++v) {
        bool ok = true;
        for (VertexId u : cur) {
            if (!adj.at(u, v)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        cur.push_back(v);
        if (cur.size() >= 2) {
            if (out.size() >= cap) throw LimitError("clique enumeration cap exceeded");
            out.emplace_back(cur);
        }
        if (cur.size() < max_size) grow_cliques(adj, max_size, cur, v + 1, out, cap);
        cur.pop_back();
    }
}

// Shared enumeration context: candidate cliques with their pair-id lists.
struct EnumContext {
    const PairwiseGraph* g;
    ModelParams params;
    EnumerationBounds bounds;
    std::vector<Hyperedge> candidates;
    std::vector<std::vector<std::uint32_t>> cand_pairs;  // indices into pair_ids
    std::vector<PairKey> pair_ids;                       // the observed pairs, sorted
    std::vector<std::uint32_t> last_cover;               // last candidate covering each pair
    double log_q;

    EnumContext(const PairwiseGraph& graph, const ModelParams& p, const EnumerationBounds& b)
        : g(&graph), params(p), bounds(b), log_q(std::log1p(-p.p)) {
        params.validate();
        if (graph.num_vertices() > bounds.max_vertices) {
            throw LimitError("graph exceeds the enumeration vertex bound");
        }
        candidates = all_cliques(graph, params.max_edge_size);
        const double states =
            static_cast<double>(candidates.size()) * std::log(double(bounds.max_multiplicity) + 1.0);
        if (states > std::log(bounds.max_states)) {
            throw LimitError("enumeration space exceeds the state bound");
        }
        pair_ids.assign(graph.pairs().begin(), graph.pairs().end());
        last_cover.assign(pair_ids.size(), 0xffffffffu);
        cand_pairs.resize(candidates.size());
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const auto& vs = candidates[c].vertices();
            for (std::size_t a = 0; a + 1 < vs.size(); ++a) {
                for (std::size_t b = a + 1; b < vs.size(); ++b) {
                    PairKey key = pair_key(vs[a], vs[b]);
                    auto it = std::lower_bound(pair_ids.begin(), pair_ids.end(), key);
                    std::uint32_t idx = static_cast<std::uint32_t>(it - pair_ids.begin());
                    cand_pairs[c].push_back(idx);
                    last_cover[idx] = static_cast<std::uint32_t>(c);
                }
            }
        }
    }

    // Any pair that no remaining candidate can cover makes the subtree dead.
    bool tail_feasible(const std::vector<std::uint32_t>& cover, std::size_t next_cand) const {
        for (std::size_t pidx = 0; pidx < cover.size(); ++pidx) {
            if (cover[pidx] == 0 &&
                (last_cover[pidx] == 0xffffffffu || last_cover[pidx] < next_cand)) {
                return false;
            }
        }
        return true;
    }

    // Grouped by cover count so that symmetric states sum identically.
    double leaf_log_likelihood(const std::vector<std::uint32_t>& cover) const {
        std::map<std::uint32_t, std::uint32_t> histogram;
        for (std::uint32_t c : cover) ++histogram[c];
        double sum = 0.0;
        for (const auto& [c, count] : histogram) {
            sum += double(count) * log1mexp(double(c) * log_q);
        }
        return sum;
    }

    Hypergraph materialize(const std::vector<std::uint32_t>& mults) const {
        Hypergraph h(g->num_vertices());
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (mults[c] > 0) h.add_edge(candidates[c], mults[c]);
        }
        return h;
    }
};

}  // namespace

std::vector<Hyperedge> all_cliques(const PairwiseGraph& g, std::uint32_t max_size) {
    AdjMatrix adj(g);
    std::vector<Hyperedge> out;
    std::vector<VertexId> cur;
    grow_cliques(adj, max_size, cur, 0, out, 1000000);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Hypergraph> enumerate_valid(const PairwiseGraph& g, const ModelParams& params,
                                        const EnumerationBounds& bounds) {
    EnumContext ctx(g, params, bounds);
    std::vector<Hypergraph> out;
    std::vector<std::uint32_t> mults(ctx.candidates.size(), 0);
    std::vector<std::uint32_t> cover(ctx.pair_ids.size(), 0);

    auto recurse = [&](auto&& self, std::size_t idx) -> void {
        if (!ctx.tail_feasible(cover, idx)) return;
        if (idx == ctx.candidates.size()) {
            out.push_back(ctx.materialize(mults));
            return;
        }
        for (std::uint32_t m = 0; m <= bounds.max_multiplicity; ++m) {
            mults[idx] = m;
            if (m > 0) {
                for (std::uint32_t pidx : ctx.cand_pairs[idx]) ++cover[pidx];
            }
            self(self, idx + 1);
        }
        for (std::uint32_t pidx : ctx.cand_pairs[idx]) cover[pidx] -= bounds.max_multiplicity;
        mults[idx] = 0;
    };
    recurse(recurse, 0);
    return out;
}

std::pair<Hypergraph, double> exact_map(const PairwiseGraph& g, const ModelParams& params,
                                        const EnumerationBounds& bounds) {
    EnumContext ctx(g, params, bounds);
    std::vector<std::uint32_t> mults(ctx.candidates.size(), 0);
    std::vector<std::uint32_t> cover(ctx.pair_ids.size(), 0);

    bool found = false;
    double best_lp = kLogZero;
    std::string best_serial;
    Hypergraph best_h(g.num_vertices());

    auto recurse = [&](auto&& self, std::size_t idx, double prior_so_far) -> void {
        // The likelihood is never positive and remaining candidates only make
        // the prior worse, so prior_so_far bounds every leaf below this node.
        if (found && prior_so_far < best_lp) return;
        if (!ctx.tail_feasible(cover, idx)) return;
        if (idx == ctx.candidates.size()) {
            const double lp = prior_so_far + ctx.leaf_log_likelihood(cover);
            if (!found || lp > best_lp) {
                best_h = ctx.materialize(mults);
                best_serial = to_hg_string(best_h);
                best_lp = lp;
                found = true;
            } else if (lp == best_lp) {
                Hypergraph h = ctx.materialize(mults);
                std::string serial = to_hg_string(h);
                if (serial < best_serial) {
                    best_h = std::move(h);
                    best_serial = std::move(serial);
                }
            }
            return;
        }
        for (std::uint32_t m = 0; m <= bounds.max_multiplicity; ++m) {
            mults[idx] = m;
            if (m > 0) {
                for (std::uint32_t pidx : ctx.cand_pairs[idx]) ++cover[pidx];
            }
            const double prior_delta =
                m == 0 ? 0.0 : -params.beta * double(m) - params.gamma * double(m - 1);
            self(self, idx + 1, prior_so_far + prior_delta);
        }
        for (std::uint32_t pidx : ctx.cand_pairs[idx]) cover[pidx] -= bounds.max_multiplicity;
        mults[idx] = 0;
    };
    recurse(recurse, 0, 0.0);

    if (!found) throw std::runtime_error("no valid hypergraph covers the graph");
    // Report the winner through the same scorer the rest of the code uses.
    return {best_h, log_posterior(g, best_h, ctx.params)};
}

std::vector<std::pair<Hypergraph, double>> exact_posterior_table(
    const PairwiseGraph& g, const ModelParams& params, const EnumerationBounds& bounds) {
    std::vector<Hypergraph> states = enumerate_valid(g, params, bounds);
    std::vector<std::pair<Hypergraph, double>> table;
    table.reserve(states.size());
    double max_lp = kLogZero;
    std::vector<double> lps(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        lps[i] = log_posterior(g, states[i], params);
        max_lp = std::max(max_lp, lps[i]);
    }
    double z = 0.0;
    for (double lp : lps) z += std::exp(lp - max_lp);
    for (std::size_t i = 0; i < states.size(); ++i) {
        table.emplace_back(std::move(states[i]), std::exp(lps[i] - max_lp) / z);
    }
    return table;
}

}  // namespace hyperbayes
