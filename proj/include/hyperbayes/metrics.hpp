#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "hyperbayes/sampler.hpp"

namespace hyperbayes {

/// Exact-match precision/recall/F1 over distinct hyperedges plus the mean
/// best-match Jaccard over ground-truth edges. Multiplicities are ignored for
/// matching; their agreement on matched edges is reported separately.
struct RecoveryScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double jaccard_mean = 0.0;
    double multiplicity_agreement = 0.0;

    struct SizeBucket {
        std::uint64_t truth_count = 0;
        std::uint64_t recovered_count = 0;
        std::uint64_t matched = 0;
        double precision = 0.0;
        double recall = 0.0;
    };
    std::map<std::uint32_t, SizeBucket> per_size;

    std::string to_json() const;
};

RecoveryScore recovery_score(const Hypergraph& truth, const Hypergraph& recovered);

struct SizeHistogram {
    std::map<std::uint32_t, std::uint64_t> distinct;
    std::map<std::uint32_t, std::uint64_t> weighted;  // multiplicity-weighted
};
SizeHistogram size_histogram(const Hypergraph& h);

/// Compression rate at hyperedge-size limit L: bytes of the full canonical hg
/// serialization divided by the bytes of the transmitted payload. The payload
/// is the pg serialization of the projection of the size-<=L edges,
/// concatenated with verbatim hg lines for every edge larger than L.
double compression_rate(const Hypergraph& h, std::uint32_t limit);
std::map<std::uint32_t, double> compression_report(const Hypergraph& h,
                                                   const std::vector<std::uint32_t>& limits);

/// 50 uniform bins over [0, 1] of the per-iteration acceptance entropies.
std::array<std::uint64_t, 50> entropy_histogram(const SamplerTrace& trace);

/// Least-squares fit y = a + b*x; returns (a, b, r_squared). A degenerate
/// y-variance yields r_squared = 1.
struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 1.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hyperbayes
