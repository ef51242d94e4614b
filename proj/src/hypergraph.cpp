#include "hyperbayes/hypergraph.hpp"

#include <algorithm>
#include <bit>

namespace hyperbayes {

Hyperedge::Hyperedge(std::vector<VertexId> vertices) : vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
        throw std::invalid_argument("hyperedge contains a duplicate vertex");
    }
    if (vertices_.size() < 2) {
        throw std::invalid_argument("hyperedge needs at least 2 vertices");
    }
}

bool Hyperedge::contains(VertexId v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool Hyperedge::contains_all(const Hyperedge& other) const {
    return std::includes(vertices_.begin(), vertices_.end(), other.vertices_.begin(),
                         other.vertices_.end());
}

void PairwiseGraph::add_edge(VertexId i, VertexId j) {
    if (i == j) throw std::invalid_argument("self loop");
    if (i >= num_vertices_ || j >= num_vertices_) {
        throw std::invalid_argument("vertex id out of range");
    }
    pairs_.insert(pair_key(i, j));
}

bool PairwiseGraph::has_edge(VertexId i, VertexId j) const {
    return pairs_.count(pair_key(i, j)) != 0;
}

void Hypergraph::add_edge(Hyperedge edge, std::uint32_t multiplicity) {
    if (multiplicity == 0) throw std::invalid_argument("multiplicity must be >= 1");
    if (edge.vertices().back() >= num_vertices_) {
        throw std::invalid_argument("vertex id out of range");
    }
    edges_[std::move(edge)] += multiplicity;
    total_ += multiplicity;
}

std::uint32_t Hypergraph::multiplicity(const Hyperedge& edge) const {
    auto it = edges_.find(edge);
    return it == edges_.end() ? 0 : it->second;
}

PairwiseGraph project(const Hypergraph& h) {
    PairwiseGraph g(h.num_vertices());
    for (const auto& [edge, mult] : h.edges()) {
        const auto& vs = edge.vertices();
        for (std::size_t a = 0; a + 1 < vs.size(); ++a) {
            for (std::size_t b = a + 1; b < vs.size(); ++b) {
                g.add_edge(vs[a], vs[b]);
            }
        }
    }
    return g;
}

std::uint64_t edge_cover_count(const Hypergraph& h, VertexId i, VertexId j) {
    if (i == j) throw std::invalid_argument("cover count needs two distinct vertices");
    if (i >= h.num_vertices() || j >= h.num_vertices()) {
        throw std::invalid_argument("vertex id out of range");
    }
    std::uint64_t count = 0;
    for (const auto& [edge, mult] : h.edges()) {
        if (edge.contains(i) && edge.contains(j)) count += mult;
    }
    return count;
}

namespace {

// Fixed-width bitset rows for the Bron-Kerbosch recursion.
class BitRows {
public:
    BitRows(std::size_t n) : words_((n + 63) / 64), bits_(n) {}

    std::vector<std::uint64_t> make_row() const { return std::vector<std::uint64_t>(words_); }

    static void set(std::vector<std::uint64_t>& row, std::size_t i) {
        row[i >> 6] |= 1ull << (i & 63);
    }
    static bool test(const std::vector<std::uint64_t>& row, std::size_t i) {
        return (row[i >> 6] >> (i & 63)) & 1;
    }
    static void clear(std::vector<std::uint64_t>& row, std::size_t i) {
        row[i >> 6] &= ~(1ull << (i & 63));
    }
    static bool empty(const std::vector<std::uint64_t>& row) {
        for (auto w : row)
            if (w) return false;
        return true;
    }
    static std::size_t count_and(const std::vector<std::uint64_t>& a,
                                 const std::vector<std::uint64_t>& b) {
        std::size_t c = 0;
        for (std::size_t k = 0; k < a.size(); ++k) c += std::popcount(a[k] & b[k]);
        return c;
    }

    std::size_t bits() const { return bits_; }

private:
    std::size_t words_;
    std::size_t bits_;
};

struct CliqueEnumerator {
    const std::vector<std::vector<std::uint64_t>>& adj;
    BitRows rows;
    std::size_t cap;
    std::vector<VertexId> current;
    std::vector<Hyperedge> out;

    // Visit the set bits of a row without touching empty words.
    template <typename Fn>
    static void for_set_bits(const std::vector<std::uint64_t>& row, Fn&& fn) {
        for (std::size_t w = 0; w < row.size(); ++w) {
            std::uint64_t bits = row[w];
            while (bits) {
                fn(w * 64 + std::countr_zero(bits));
                bits &= bits - 1;
            }
        }
    }

    void expand(std::vector<std::uint64_t>& p, std::vector<std::uint64_t>& x) {
        if (BitRows::empty(p)) {
            if (BitRows::empty(x) && current.size() >= 2) {
                if (out.size() >= cap) {
                    throw LimitError("maximal clique cap exceeded (" + std::to_string(cap) + ")");
                }
                out.emplace_back(current);
            }
            return;
        }
        // Pivot: vertex of P|X with the most neighbours in P.
        std::size_t pivot = 0, best = 0;
        bool found = false;
        for (std::size_t w = 0; w < p.size(); ++w) {
            std::uint64_t bits = p[w] | x[w];
            while (bits) {
                const std::size_t v = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                std::size_t deg = BitRows::count_and(p, adj[v]);
                if (!found || deg > best) {
                    best = deg;
                    pivot = v;
                    found = true;
                }
            }
        }
        // Snapshot of P \ N(pivot): the branching candidates.
        auto cand = rows.make_row();
        for (std::size_t w = 0; w < cand.size(); ++w) cand[w] = p[w] & ~adj[pivot][w];
        auto np = rows.make_row();
        auto nx = rows.make_row();
        for_set_bits(cand, [&](std::size_t v) {
            for (std::size_t k = 0; k < np.size(); ++k) {
                np[k] = p[k] & adj[v][k];
                nx[k] = x[k] & adj[v][k];
            }
            current.push_back(static_cast<VertexId>(v));
            expand(np, nx);
            current.pop_back();
            BitRows::clear(p, v);
            BitRows::set(x, v);
        });
    }
};

}  // namespace

std::vector<Hyperedge> maximal_cliques(const PairwiseGraph& g, std::size_t cap) {
    const std::size_t n = g.num_vertices();
    std::vector<std::vector<std::uint64_t>> adj(n, std::vector<std::uint64_t>((n + 63) / 64));
    std::vector<bool> touched(n, false);
    for (PairKey k : g.pairs()) {
        VertexId i = pair_first(k), j = pair_second(k);
        BitRows::set(adj[i], j);
        BitRows::set(adj[j], i);
        touched[i] = touched[j] = true;
    }

    CliqueEnumerator en{adj, BitRows(n), cap, {}, {}};
    auto p = en.rows.make_row();
    auto x = en.rows.make_row();
    for (std::size_t v = 0; v < n; ++v) {
        if (touched[v]) BitRows::set(p, v);  // isolated vertices cannot join a clique
    }
    en.expand(p, x);
    std::sort(en.out.begin(), en.out.end());
    return en.out;
}

}  // namespace hyperbayes
