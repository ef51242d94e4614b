#include <doctest.h>

#include <cmath>

#include "hyperbayes/io.hpp"
#include "hyperbayes/metrics.hpp"
#include "test_util.hpp"

#include <json.hpp>

using namespace hyperbayes;
using namespace hbtest;

TEST_CASE("recovery of an identical hypergraph scores ones") {
    Rng rng(71);
    for (int round = 0; round < 10; ++round) {
        Hypergraph h = random_hypergraph(8, 5, 4, 2, rng);
        RecoveryScore s = recovery_score(h, h);
        CHECK(s.precision == 1.0);
        CHECK(s.recall == 1.0);
        CHECK(s.f1 == 1.0);
        CHECK(s.jaccard_mean == 1.0);
        CHECK(s.multiplicity_agreement == 1.0);
    }
}

TEST_CASE("empty recovery of a non-empty truth scores zero") {
    Hypergraph truth(3);
    truth.add_edge(Hyperedge({0, 1, 2}));
    RecoveryScore s = recovery_score(truth, Hypergraph(3));
    CHECK(s.precision == 0.0);
    CHECK(s.recall == 0.0);
    CHECK(s.f1 == 0.0);
    CHECK(s.jaccard_mean == 0.0);
}

TEST_CASE("half-matched recovery, hand-evaluated") {
    // truth = {012, 34}, recovered = {012, 345}: one exact match each way,
    // and the pair {3,4} best-matches {3,4,5} at Jaccard 2/3.
    Hypergraph truth(6);
    truth.add_edge(Hyperedge({0, 1, 2}));
    truth.add_edge(Hyperedge({3, 4}));
    Hypergraph rec(6);
    rec.add_edge(Hyperedge({0, 1, 2}));
    rec.add_edge(Hyperedge({3, 4, 5}));
    RecoveryScore s = recovery_score(truth, rec);
    CHECK(s.precision == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.recall == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.f1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.jaccard_mean == doctest::Approx((1.0 + 2.0 / 3.0) / 2.0).epsilon(1e-12));
    CHECK(s.per_size.at(3).recovered_count == 2);
    CHECK(s.per_size.at(3).matched == 1);
    CHECK(s.per_size.at(2).truth_count == 1);
}

TEST_CASE("precision and recall swap under argument exchange") {
    Rng rng(73);
    for (int round = 0; round < 15; ++round) {
        Hypergraph a = random_hypergraph(7, 4, 4, 2, rng);
        Hypergraph b = random_hypergraph(7, 5, 4, 2, rng);
        RecoveryScore ab = recovery_score(a, b);
        RecoveryScore ba = recovery_score(b, a);
        CHECK(ab.precision == doctest::Approx(ba.recall).epsilon(1e-12));
        CHECK(ab.recall == doctest::Approx(ba.precision).epsilon(1e-12));
    }
}

TEST_CASE("multiplicities do not affect matching but are reported") {
    Hypergraph truth(3);
    truth.add_edge(Hyperedge({0, 1}), 3);
    Hypergraph rec(3);
    rec.add_edge(Hyperedge({0, 1}), 1);
    RecoveryScore s = recovery_score(truth, rec);
    CHECK(s.f1 == 1.0);
    CHECK(s.multiplicity_agreement == 0.0);
}

TEST_CASE("size histogram splits distinct and weighted counts") {
    Hypergraph h(4);
    h.add_edge(Hyperedge({0, 1, 2}), 2);
    h.add_edge(Hyperedge({0, 1}));
    SizeHistogram hist = size_histogram(h);
    CHECK(hist.distinct == std::map<std::uint32_t, std::uint64_t>{{2, 1}, {3, 1}});
    CHECK(hist.weighted == std::map<std::uint32_t, std::uint64_t>{{2, 1}, {3, 2}});
    std::uint64_t weighted_total = 0;
    for (auto& [size, count] : hist.weighted) weighted_total += count;
    CHECK(weighted_total == h.total_edge_count());
    CHECK(size_histogram(Hypergraph(3)).distinct.empty());
}

TEST_CASE("compression rate is exactly 1 on pairwise-only hypergraphs") {
    Hypergraph h(5);
    h.add_edge(Hyperedge({0, 1}));
    h.add_edge(Hyperedge({2, 4}));
    CHECK(compression_rate(h, 2) == 1.0);
    CHECK(compression_rate(h, 6) == 1.0);
    CHECK_THROWS_AS(compression_rate(h, 1), std::invalid_argument);
}

TEST_CASE("single large edge: byte counting at both ends of the limit") {
    Hypergraph h(6);
    h.add_edge(Hyperedge({0, 1, 2, 3, 4, 5}));
    // Limit 2: the edge rides verbatim, so payload bytes equal the original.
    CHECK(compression_rate(h, 2) == 1.0);
    // Limit 6: the payload is the 15-pair projection; count the bytes directly.
    const double full_bytes = double(to_hg_string(h).size());
    const double payload_bytes = double(to_pg_string(project(h)).size());
    CHECK(compression_rate(h, 6) == doctest::Approx(full_bytes / payload_bytes).epsilon(1e-12));
    CHECK(compression_rate(h, 6) < 1.0);
}

TEST_CASE("compression rate grows with the limit on overlap-rich hypergraphs") {
    // Every 3-subset and 4-subset of a 5-clique: the projection de-duplicates
    // the shared pairs, so raising the limit shrinks the payload.
    Hypergraph h(5);
    for (VertexId a = 0; a < 5; ++a)
        for (VertexId b = a + 1; b < 5; ++b)
            for (VertexId c = b + 1; c < 5; ++c) h.add_edge(Hyperedge({a, b, c}));
    for (VertexId a = 0; a < 5; ++a)
        for (VertexId b = a + 1; b < 5; ++b)
            for (VertexId c = b + 1; c < 5; ++c)
                for (VertexId d = c + 1; d < 5; ++d) h.add_edge(Hyperedge({a, b, c, d}));

    auto report = compression_report(h, {2, 3, 4, 5});
    CHECK(report.at(2) <= report.at(3));
    CHECK(report.at(3) <= report.at(4));
    CHECK(report.at(4) <= report.at(5));
    CHECK(report.at(5) > 1.0);
}

TEST_CASE("entropy histogram buckets the trace entropies") {
    SamplerTrace trace;
    trace.rows.push_back(TraceRow{1, 0.5, binary_entropy(0.5), true, 1, 0.0});
    trace.rows.push_back(TraceRow{2, 1.0, binary_entropy(1.0), true, 1, 0.0});
    trace.rows.push_back(TraceRow{3, 0.9, binary_entropy(0.9), false, 1, 0.0});
    auto bins = entropy_histogram(trace);
    CHECK(bins[49] == 1);  // entropy 1.0 lands in the top bin
    CHECK(bins[0] == 1);   // entropy 0.0
    CHECK(bins[static_cast<std::size_t>(binary_entropy(0.9) * 50.0)] == 1);
}

TEST_CASE("linear fit recovers exact lines and flags scatter") {
    std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y = {3, 5, 7, 9, 11};
    LinearFit fit = linear_fit(x, y);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> noisy = {3, 9, 4, 12, 5};
    CHECK(linear_fit(x, noisy).r_squared < 0.7);
    CHECK_THROWS_AS(linear_fit({1}, {2}), std::invalid_argument);
    CHECK_THROWS_AS(linear_fit({1, 1}, {2, 3}), std::invalid_argument);
}

TEST_CASE("convergence curve downsamples timing rows") {
    PairwiseGraph g = complete_graph(4);
    SamplerConfig cfg;
    cfg.iterations = 500;
    cfg.record_timing = true;
    SamplerTrace trace = run_sampler(g, cfg);
    auto points = convergence_curve(trace, 100);
    REQUIRE(!points.empty());
    CHECK(points.size() <= 101);
    CHECK(points.back().t == 500);
    CHECK(points.back().num_hyperedges == trace.rows.back().num_hyperedges);
    for (std::size_t i = 1; i < points.size(); ++i) {
        CHECK(points[i].elapsed_ms >= points[i - 1].elapsed_ms);
    }
    // Without timing there is nothing to plot.
    SamplerConfig no_timing;
    no_timing.iterations = 50;
    CHECK(convergence_curve(run_sampler(g, no_timing), 10).empty());
}

TEST_CASE("recovery score serializes to json") {
    Hypergraph truth(3);
    truth.add_edge(Hyperedge({0, 1, 2}));
    auto j = nlohmann::json::parse(recovery_score(truth, truth).to_json());
    CHECK(j["f1"] == 1.0);
    CHECK(j["per_size"]["3"]["matched"] == 1);
}
