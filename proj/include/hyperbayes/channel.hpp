#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hyperbayes/hypergraph.hpp"

namespace hyperbayes {

/// AWGN channel configuration. snr_db is the per-symbol SNR for unit-energy
/// antipodal symbols: snr_db = 10*log10(1/sigma^2). An absent snr_db means a
/// noiseless channel.
struct ChannelConfig {
    std::optional<double> snr_db;
    std::uint64_t seed = 0;

    double noise_sigma() const;
    bool noiseless() const { return !snr_db.has_value(); }
};

/// Dense upper-triangular symbol frame: symbol k corresponds to the k-th
/// unordered pair (i, j), i < j, in row-major order. Clean symbols are +-1.
struct SymbolFrame {
    std::uint32_t num_vertices = 0;
    std::vector<double> symbols;
};

std::size_t pair_index(std::uint32_t num_vertices, VertexId i, VertexId j);
std::pair<VertexId, VertexId> index_pair(std::uint32_t num_vertices, std::size_t index);

/// +1 for each present pair, -1 for each absent pair. Throws LimitError when
/// num_vertices exceeds the cap (the frame has C(n,2) symbols).
SymbolFrame modulate(const PairwiseGraph& g, std::uint32_t vertex_cap = 2000);

/// Adds i.i.d. zero-mean Gaussian noise with sigma = 10^(-snr_db/20);
/// identity for a noiseless config. Deterministic under the seed.
SymbolFrame transmit(const SymbolFrame& frame, const ChannelConfig& cfg);

/// Threshold decoding: pair present iff its symbol is > 0.
PairwiseGraph demodulate(const SymbolFrame& frame);

struct ChannelResult {
    PairwiseGraph graph;
    std::uint64_t symbols = 0;
    std::uint64_t flipped = 0;
    double flip_rate = 0.0;
};

/// modulate -> transmit -> demodulate, with flip accounting.
ChannelResult run_channel(const PairwiseGraph& g, const ChannelConfig& cfg,
                          std::uint32_t vertex_cap = 2000);

}  // namespace hyperbayes
