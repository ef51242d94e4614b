#include <doctest.h>

#include <cmath>

#include "hyperbayes/channel.hpp"
#include "test_util.hpp"

using namespace hyperbayes;
using namespace hbtest;

namespace {

// Gaussian tail oracle: P(N(0,1) < x).
double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("pair indexing is a bijection over the upper triangle") {
    const std::uint32_t n = 9;
    std::size_t idx = 0;
    for (VertexId i = 0; i + 1 < n; ++i) {
        for (VertexId j = i + 1; j < n; ++j, ++idx) {
            CHECK(pair_index(n, i, j) == idx);
            auto [a, b] = index_pair(n, idx);
            CHECK(a == i);
            CHECK(b == j);
        }
    }
}

TEST_CASE("modulation layout") {
    SymbolFrame k3 = modulate(complete_graph(3));
    CHECK(k3.symbols == std::vector<double>{1.0, 1.0, 1.0});

    SymbolFrame empty = modulate(PairwiseGraph(3));
    CHECK(empty.symbols == std::vector<double>{-1.0, -1.0, -1.0});

    // Path 0-1-2 in pair order (01, 02, 12).
    SymbolFrame path = modulate(graph_from_pairs(3, {{0, 1}, {1, 2}}));
    CHECK(path.symbols == std::vector<double>{1.0, -1.0, 1.0});

    CHECK_THROWS_AS(modulate(PairwiseGraph(3), 2), LimitError);
}

TEST_CASE("noiseless transmission is the identity") {
    ChannelConfig cfg;  // no snr set
    SymbolFrame frame = modulate(complete_graph(4));
    CHECK(transmit(frame, cfg).symbols == frame.symbols);
}

TEST_CASE("transmission is deterministic under a seed") {
    ChannelConfig cfg;
    cfg.snr_db = 3.0;
    cfg.seed = 42;
    SymbolFrame frame = modulate(complete_graph(5));
    CHECK(transmit(frame, cfg).symbols == transmit(frame, cfg).symbols);
    ChannelConfig other = cfg;
    other.seed = 43;
    CHECK(transmit(frame, cfg).symbols != transmit(frame, other).symbols);
}

TEST_CASE("threshold decoding inverts clean modulation") {
    Rng rng(9);
    for (int round = 0; round < 20; ++round) {
        PairwiseGraph g = random_graph(8, 0.4, rng);
        CHECK(demodulate(modulate(g)) == g);
    }
}

TEST_CASE("decoding thresholds strictly at zero") {
    SymbolFrame frame;
    frame.num_vertices = 3;
    frame.symbols = {0.2, -3.1, 1e-300};
    PairwiseGraph g = demodulate(frame);
    CHECK(g.has_edge(0, 1));
    CHECK(!g.has_edge(0, 2));
    CHECK(g.has_edge(1, 2));
}

TEST_CASE("flip rate at 0 dB matches the Gaussian tail") {
    // sigma = 1; a unit symbol flips when the noise pushes it past zero.
    const std::uint32_t n = 1415;  // ~1e6 symbols
    ChannelConfig cfg;
    cfg.snr_db = 0.0;
    cfg.seed = 7;
    ChannelResult result = run_channel(complete_graph(n), cfg);
    CHECK(result.symbols == std::size_t(n) * (n - 1) / 2);
    CHECK(result.flip_rate == doctest::Approx(phi(-1.0)).epsilon(0.01));
    CHECK(std::abs(result.flip_rate - 0.1587) < 0.002);
}

TEST_CASE("no flips at 30 dB on a ten-thousand-symbol frame") {
    const std::uint32_t n = 142;  // 10011 symbols
    ChannelConfig cfg;
    cfg.snr_db = 30.0;
    cfg.seed = 21;
    ChannelResult result = run_channel(complete_graph(n), cfg);
    CHECK(result.flipped == 0);
    CHECK(result.graph == complete_graph(n));
}

TEST_CASE("noise sigma follows the per-symbol SNR definition") {
    ChannelConfig cfg;
    cfg.snr_db = 0.0;
    CHECK(cfg.noise_sigma() == doctest::Approx(1.0).epsilon(1e-12));
    cfg.snr_db = 20.0;
    CHECK(cfg.noise_sigma() == doctest::Approx(0.1).epsilon(1e-12));
    cfg.snr_db = -10.0;
    CHECK(cfg.noise_sigma() == doctest::Approx(std::pow(10.0, 0.5)).epsilon(1e-12));
}
