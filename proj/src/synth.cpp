#include "hyperbayes/synth.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "hyperbayes/rng.hpp"

namespace hyperbayes {

namespace {

class AdjBits {
public:
    explicit AdjBits(std::uint32_t n) : n_(n), words_((n + 63) / 64), rows_(std::size_t(n) * words_) {}

    void set(VertexId i, VertexId j) {
        rows_[std::size_t(i) * words_ + (j >> 6)] |= 1ull << (j & 63);
        rows_[std::size_t(j) * words_ + (i >> 6)] |= 1ull << (i & 63);
    }
    bool test(VertexId i, VertexId j) const {
        return (rows_[std::size_t(i) * words_ + (j >> 6)] >> (j & 63)) & 1;
    }
    /// True when u and v have a common neighbour outside `exclude`.
    bool common_neighbor_outside(VertexId u, VertexId v,
                                 const std::vector<VertexId>& exclude) const {
        const std::uint64_t* ru = &rows_[std::size_t(u) * words_];
        const std::uint64_t* rv = &rows_[std::size_t(v) * words_];
        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t both = ru[w] & rv[w];
            if (!both) continue;
            while (both) {
                VertexId c = static_cast<VertexId>(w * 64 + std::countr_zero(both));
                both &= both - 1;
                if (std::find(exclude.begin(), exclude.end(), c) == exclude.end()) return true;
            }
        }
        return false;
    }

private:
    std::uint32_t n_;
    std::size_t words_;
    std::vector<std::uint64_t> rows_;
};

}  // namespace

Hypergraph make_planted_hypergraph(std::uint32_t num_vertices,
                                   const std::vector<SizeCount>& recipe,
                                   std::uint64_t seed) {
    Hypergraph h(num_vertices);
    AdjBits adj(num_vertices);
    Rng rng(seed);

    std::vector<SizeCount> order = recipe;
    std::sort(order.begin(), order.end(),
              [](const SizeCount& a, const SizeCount& b) { return a.size > b.size; });

    std::vector<VertexId> pick;
    for (const SizeCount& bucket : order) {
        if (bucket.size < 2 || bucket.size > num_vertices) {
            throw std::invalid_argument("invalid planted edge size");
        }
        for (std::uint32_t c = 0; c < bucket.count; ++c) {
            bool placed = false;
            for (std::uint32_t attempt = 0; attempt < 200000 && !placed; ++attempt) {
                pick.clear();
                while (pick.size() < bucket.size) {
                    VertexId v = static_cast<VertexId>(rng.uniform_below(num_vertices));
                    if (std::find(pick.begin(), pick.end(), v) == pick.end()) pick.push_back(v);
                }
                // Reject when two picked vertices are already adjacent (their
                // pair belongs to another edge: overlap of two) or when a new
                // pair would close a triangle with an outside vertex. Both
                // would merge cliques in the projection.
                bool ok = true;
                for (std::size_t a = 0; a + 1 < pick.size() && ok; ++a) {
                    for (std::size_t b = a + 1; b < pick.size() && ok; ++b) {
                        if (adj.test(pick[a], pick[b]) ||
                            adj.common_neighbor_outside(pick[a], pick[b], pick)) {
                            ok = false;
                        }
                    }
                }
                if (!ok) continue;
                for (std::size_t a = 0; a + 1 < pick.size(); ++a) {
                    for (std::size_t b = a + 1; b < pick.size(); ++b) {
                        adj.set(pick[a], pick[b]);
                    }
                }
                h.add_edge(Hyperedge(pick));
                placed = true;
            }
            if (!placed) {
                throw LimitError("could not place a planted edge; graph too dense");
            }
        }
    }
    return h;
}

PairwiseGraph make_connected_gnp(std::uint32_t num_vertices, double edge_prob,
                                 std::uint64_t seed) {
    if (num_vertices == 0) throw std::invalid_argument("need at least one vertex");
    Rng rng(seed);
    for (;;) {
        PairwiseGraph g(num_vertices);
        for (VertexId i = 0; i + 1 < num_vertices; ++i) {
            for (VertexId j = i + 1; j < num_vertices; ++j) {
                if (rng.uniform01() < edge_prob) g.add_edge(i, j);
            }
        }
        // Connectivity via union-find over the sampled pairs.
        std::vector<VertexId> parent(num_vertices);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](VertexId v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        for (PairKey k : g.pairs()) {
            parent[find(pair_first(k))] = find(pair_second(k));
        }
        bool connected = true;
        for (VertexId v = 0; v < num_vertices; ++v) {
            if (find(v) != find(0)) {
                connected = false;
                break;
            }
        }
        if (connected) return g;
    }
}

}  // namespace hyperbayes
