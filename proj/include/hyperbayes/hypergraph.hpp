#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperbayes {

using VertexId = std::uint32_t;
using PairKey = std::uint64_t;

/// Encodes an unordered vertex pair (i, j), i != j, as a single key with i < j.
inline PairKey pair_key(VertexId i, VertexId j) {
    if (i > j) std::swap(i, j);
    return (static_cast<PairKey>(i) << 32) | j;
}

inline VertexId pair_first(PairKey k) { return static_cast<VertexId>(k >> 32); }
inline VertexId pair_second(PairKey k) { return static_cast<VertexId>(k & 0xffffffffu); }

/// A hyperedge: a sorted, duplicate-free set of at least two vertices.
class Hyperedge {
public:
    Hyperedge() = default;
    explicit Hyperedge(std::vector<VertexId> vertices);
    Hyperedge(std::initializer_list<VertexId> vertices)
        : Hyperedge(std::vector<VertexId>(vertices)) {}

    const std::vector<VertexId>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    bool contains(VertexId v) const;
    bool contains_all(const Hyperedge& other) const;

    auto operator<=>(const Hyperedge&) const = default;

private:
    std::vector<VertexId> vertices_;
};

/// Undirected simple graph over dense vertex ids; no self loops, each pair
/// stored once.
class PairwiseGraph {
public:
    PairwiseGraph() = default;
    explicit PairwiseGraph(std::uint32_t num_vertices) : num_vertices_(num_vertices) {}

    std::uint32_t num_vertices() const { return num_vertices_; }
    std::size_t num_edges() const { return pairs_.size(); }
    const std::set<PairKey>& pairs() const { return pairs_; }

    void add_edge(VertexId i, VertexId j);
    bool has_edge(VertexId i, VertexId j) const;

    bool operator==(const PairwiseGraph&) const = default;

private:
    std::uint32_t num_vertices_ = 0;
    std::set<PairKey> pairs_;
};

/// Multiset of hyperedges over dense vertex ids. Each distinct edge carries a
/// multiplicity >= 1; the total edge count is the multiplicity sum.
class Hypergraph {
public:
    Hypergraph() = default;
    explicit Hypergraph(std::uint32_t num_vertices) : num_vertices_(num_vertices) {}

    std::uint32_t num_vertices() const { return num_vertices_; }
    const std::map<Hyperedge, std::uint32_t>& edges() const { return edges_; }

    std::size_t distinct_edge_count() const { return edges_.size(); }
    std::uint64_t total_edge_count() const { return total_; }

    /// Adds (or accumulates) a hyperedge with the given multiplicity.
    void add_edge(Hyperedge edge, std::uint32_t multiplicity = 1);
    std::uint32_t multiplicity(const Hyperedge& edge) const;

    bool operator==(const Hypergraph&) const = default;

private:
    std::uint32_t num_vertices_ = 0;
    std::map<Hyperedge, std::uint32_t> edges_;
    std::uint64_t total_ = 0;
};

/// Clique expansion: the pair (i, j) is present iff some hyperedge contains
/// both i and j. Vertex count is preserved.
PairwiseGraph project(const Hypergraph& h);

/// Multiplicity-weighted number of hyperedges containing both i and j.
/// Throws std::invalid_argument on i == j or an out-of-range id.
std::uint64_t edge_cover_count(const Hypergraph& h, VertexId i, VertexId j);

/// Thrown when an enumeration exceeds its configured cap.
class LimitError : public std::runtime_error {
public:
    explicit LimitError(const std::string& what) : std::runtime_error(what) {}
};

/// All maximal cliques of size >= 2, in lexicographic order (Bron-Kerbosch
/// with pivoting). Throws LimitError when more than `cap` cliques appear.
std::vector<Hyperedge> maximal_cliques(const PairwiseGraph& g, std::size_t cap = 1000000);

}  // namespace hyperbayes
