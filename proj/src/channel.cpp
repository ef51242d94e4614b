#include "hyperbayes/channel.hpp"

#include <cmath>

#include "hyperbayes/rng.hpp"

namespace hyperbayes {

double ChannelConfig::noise_sigma() const {
    if (noiseless()) return 0.0;
    return std::pow(10.0, -(*snr_db) / 20.0);
}

std::size_t pair_index(std::uint32_t n, VertexId i, VertexId j) {
    if (i > j) std::swap(i, j);
    const std::size_t row = i;
    return row * n - row * (row + 1) / 2 + (j - i - 1);
}

std::pair<VertexId, VertexId> index_pair(std::uint32_t n, std::size_t index) {
    std::size_t i = 0;
    std::size_t row_len = n - 1;
    while (index >= row_len) {
        index -= row_len;
        ++i;
        --row_len;
    }
    return {static_cast<VertexId>(i), static_cast<VertexId>(i + 1 + index)};
}

SymbolFrame modulate(const PairwiseGraph& g, std::uint32_t vertex_cap) {
    if (g.num_vertices() > vertex_cap) {
        throw LimitError("graph exceeds the modulation vertex cap");
    }
    const std::uint32_t n = g.num_vertices();
    SymbolFrame frame;
    frame.num_vertices = n;
    frame.symbols.assign(std::size_t(n) * (n - 1) / 2, -1.0);
    for (PairKey k : g.pairs()) {
        frame.symbols[pair_index(n, pair_first(k), pair_second(k))] = 1.0;
    }
    return frame;
}

SymbolFrame transmit(const SymbolFrame& frame, const ChannelConfig& cfg) {
    if (cfg.noiseless()) return frame;
    const double sigma = cfg.noise_sigma();
    SymbolFrame out = frame;
    Rng rng(cfg.seed);
    for (double& s : out.symbols) s += sigma * rng.gaussian();
    return out;
}

PairwiseGraph demodulate(const SymbolFrame& frame) {
    PairwiseGraph g(frame.num_vertices);
    VertexId i = 0, j = 1;
    for (std::size_t idx = 0; idx < frame.symbols.size(); ++idx) {
        if (frame.symbols[idx] > 0.0) g.add_edge(i, j);
        if (++j == frame.num_vertices) {
            ++i;
            j = i + 1;
        }
    }
    return g;
}

ChannelResult run_channel(const PairwiseGraph& g, const ChannelConfig& cfg,
                          std::uint32_t vertex_cap) {
    SymbolFrame clean = modulate(g, vertex_cap);
    SymbolFrame noisy = transmit(clean, cfg);
    ChannelResult result;
    result.graph = demodulate(noisy);
    result.symbols = clean.symbols.size();
    for (std::size_t idx = 0; idx < clean.symbols.size(); ++idx) {
        const bool sent = clean.symbols[idx] > 0.0;
        const bool got = noisy.symbols[idx] > 0.0;
        if (sent != got) ++result.flipped;
    }
    result.flip_rate =
        result.symbols == 0 ? 0.0 : double(result.flipped) / double(result.symbols);
    return result;
}

}  // namespace hyperbayes
