#include "hyperbayes/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "hyperbayes/io.hpp"

#include <json.hpp>

namespace hyperbayes {

namespace {

double jaccard(const Hyperedge& a, const Hyperedge& b) {
    const auto& va = a.vertices();
    const auto& vb = b.vertices();
    std::size_t inter = 0, ia = 0, ib = 0;
    while (ia < va.size() && ib < vb.size()) {
        if (va[ia] == vb[ib]) {
            ++inter;
            ++ia;
            ++ib;
        } else if (va[ia] < vb[ib]) {
            ++ia;
        } else {
            ++ib;
        }
    }
    return double(inter) / double(va.size() + vb.size() - inter);
}

}  // namespace

RecoveryScore recovery_score(const Hypergraph& truth, const Hypergraph& recovered) {
    RecoveryScore score;
    const auto& te = truth.edges();
    const auto& re = recovered.edges();

    std::uint64_t matched = 0;
    std::uint64_t mult_agree = 0;
    for (const auto& [edge, mult] : te) {
        auto it = re.find(edge);
        auto& bucket = score.per_size[static_cast<std::uint32_t>(edge.size())];
        ++bucket.truth_count;
        if (it != re.end()) {
            ++matched;
            ++bucket.matched;
            if (it->second == mult) ++mult_agree;
        }
    }
    for (const auto& [edge, mult] : re) {
        ++score.per_size[static_cast<std::uint32_t>(edge.size())].recovered_count;
    }

    if (te.empty() && re.empty()) {
        score.precision = score.recall = score.f1 = 1.0;
        score.jaccard_mean = 1.0;
        score.multiplicity_agreement = 1.0;
        return score;
    }
    score.precision = re.empty() ? 0.0 : double(matched) / double(re.size());
    score.recall = te.empty() ? 1.0 : double(matched) / double(te.size());
    score.f1 = (score.precision + score.recall) > 0.0
                   ? 2.0 * score.precision * score.recall / (score.precision + score.recall)
                   : 0.0;
    score.multiplicity_agreement = matched == 0 ? 1.0 : double(mult_agree) / double(matched);

    for (auto& [size, bucket] : score.per_size) {
        bucket.precision =
            bucket.recovered_count == 0 ? 0.0 : double(bucket.matched) / double(bucket.recovered_count);
        bucket.recall =
            bucket.truth_count == 0 ? 1.0 : double(bucket.matched) / double(bucket.truth_count);
    }

    if (te.empty()) {
        score.jaccard_mean = 1.0;
        return score;
    }
    if (re.empty()) {
        score.jaccard_mean = 0.0;
        return score;
    }
    // Best-match Jaccard via a vertex -> recovered-edge index so that large
    // recovered sets stay tractable.
    std::vector<std::vector<const Hyperedge*>> by_vertex(recovered.num_vertices());
    for (const auto& [edge, mult] : re) {
        for (VertexId v : edge.vertices()) {
            if (v < by_vertex.size()) by_vertex[v].push_back(&edge);
        }
    }
    double jaccard_sum = 0.0;
    for (const auto& [edge, mult] : te) {
        // Candidates sharing several vertices are revisited, which only
        // recomputes the same maximum.
        double best = 0.0;
        for (VertexId v : edge.vertices()) {
            if (v >= by_vertex.size()) continue;
            for (const Hyperedge* cand : by_vertex[v]) {
                best = std::max(best, jaccard(edge, *cand));
            }
        }
        jaccard_sum += best;
    }
    score.jaccard_mean = jaccard_sum / double(te.size());
    return score;
}

std::string RecoveryScore::to_json() const {
    nlohmann::json j;
    j["precision"] = precision;
    j["recall"] = recall;
    j["f1"] = f1;
    j["jaccard_mean"] = jaccard_mean;
    j["multiplicity_agreement"] = multiplicity_agreement;
    nlohmann::json per = nlohmann::json::object();
    for (const auto& [size, bucket] : per_size) {
        nlohmann::json b;
        b["truth_count"] = bucket.truth_count;
        b["recovered_count"] = bucket.recovered_count;
        b["matched"] = bucket.matched;
        b["precision"] = bucket.precision;
        b["recall"] = bucket.recall;
        per[std::to_string(size)] = b;
    }
    j["per_size"] = per;
    return j.dump(2);
}

SizeHistogram size_histogram(const Hypergraph& h) {
    SizeHistogram hist;
    for (const auto& [edge, mult] : h.edges()) {
        const auto size = static_cast<std::uint32_t>(edge.size());
        hist.distinct[size] += 1;
        hist.weighted[size] += mult;
    }
    return hist;
}

double compression_rate(const Hypergraph& h, std::uint32_t limit) {
    if (limit < 2) throw std::invalid_argument("limit must be >= 2");
    const std::size_t full_bytes = to_hg_string(h).size();

    Hypergraph within(h.num_vertices());
    std::string verbatim;
    for (const auto& [edge, mult] : h.edges()) {
        if (edge.size() <= limit) {
            within.add_edge(edge, mult);
        } else {
            // These the receiver cannot reconstruct under the limit; they ride
            // along as literal hypergraph lines.
            const auto& vs = edge.vertices();
            for (std::size_t k = 0; k < vs.size(); ++k) {
                if (k) verbatim += ' ';
                verbatim += std::to_string(vs[k]);
            }
            if (mult > 1) {
                verbatim += '*';
                verbatim += std::to_string(mult);
            }
            verbatim += '\n';
        }
    }
    const std::size_t payload_bytes = to_pg_string(project(within)).size() + verbatim.size();
    return double(full_bytes) / double(payload_bytes);
}

std::map<std::uint32_t, double> compression_report(const Hypergraph& h,
                                                   const std::vector<std::uint32_t>& limits) {
    std::map<std::uint32_t, double> out;
    for (std::uint32_t limit : limits) out[limit] = compression_rate(h, limit);
    return out;
}

std::array<std::uint64_t, 50> entropy_histogram(const SamplerTrace& trace) {
    std::array<std::uint64_t, 50> bins{};
    for (const TraceRow& row : trace.rows) {
        auto bin = static_cast<std::size_t>(row.entropy * 50.0);
        if (bin >= 50) bin = 49;
        ++bins[bin];
    }
    return bins;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    LinearFit fit;
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("linear fit needs matching series of length >= 2");
    }
    const double n = double(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("degenerate x values in linear fit");
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;

    double ss_res = 0.0, ss_tot = 0.0;
    const double mean_y = sy / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pred = fit.intercept + fit.slope * x[i];
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
    }
    fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return fit;
}

}  // namespace hyperbayes
