#include "hyperbayes.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "hyperbayes/channel.hpp"
#include "hyperbayes/dataset.hpp"
#include "hyperbayes/io.hpp"
#include "hyperbayes/metrics.hpp"
#include "hyperbayes/oracle.hpp"
#include "hyperbayes/sampler.hpp"
#include "hyperbayes/synth.hpp"
#include "hyperbayes/version.hpp"

using namespace hyperbayes;

struct hb_hypergraph {
    Hypergraph value;
};
struct hb_graph {
    PairwiseGraph value;
};
struct hb_trace {
    SamplerTrace value;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <typename Fn>
hb_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        set_error(e.what());
        return HB_ERR_PARSE;
    } catch (const IoError& e) {
        set_error(e.what());
        return HB_ERR_IO;
    } catch (const LimitError& e) {
        set_error(e.what());
        return HB_ERR_LIMIT;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return HB_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return HB_ERR_INTERNAL;
    }
}

hb_status require(bool ok, const char* message) {
    if (!ok) {
        set_error(message);
        return HB_ERR_INVALID_ARGUMENT;
    }
    return HB_OK;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

ModelParams to_params(const hb_params& p) {
    ModelParams out;
    out.p = p.p;
    out.beta = p.beta;
    out.gamma = p.gamma;
    out.max_edge_size = p.max_edge_size;
    return out;
}

}  // namespace

extern "C" {

const char* hb_version(void) { return kVersion; }
const char* hb_last_error(void) { return g_last_error.c_str(); }

void hb_string_free(char* s) { delete[] s; }
void hb_hypergraph_free(hb_hypergraph* h) { delete h; }
void hb_graph_free(hb_graph* g) { delete g; }
void hb_trace_free(hb_trace* t) { delete t; }

hb_status hb_hypergraph_create(uint32_t num_vertices, hb_hypergraph** out) {
    if (hb_status s = require(out != nullptr, "null output"); s != HB_OK) return s;
    return guarded([&] {
        *out = new hb_hypergraph{Hypergraph(num_vertices)};
        return HB_OK;
    });
}

hb_status hb_hypergraph_add_edge(hb_hypergraph* h, const uint32_t* vertices, size_t count,
                                 uint32_t multiplicity) {
    if (hb_status s = require(h && vertices, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        h->value.add_edge(Hyperedge(std::vector<VertexId>(vertices, vertices + count)),
                          multiplicity);
        return HB_OK;
    });
}

hb_status hb_hypergraph_num_vertices(const hb_hypergraph* h, uint32_t* out) {
    if (hb_status s = require(h && out, "null argument"); s != HB_OK) return s;
    *out = h->value.num_vertices();
    return HB_OK;
}

hb_status hb_hypergraph_distinct_edges(const hb_hypergraph* h, uint64_t* out) {
    if (hb_status s = require(h && out, "null argument"); s != HB_OK) return s;
    *out = h->value.distinct_edge_count();
    return HB_OK;
}

hb_status hb_hypergraph_total_edges(const hb_hypergraph* h, uint64_t* out) {
    if (hb_status s = require(h && out, "null argument"); s != HB_OK) return s;
    *out = h->value.total_edge_count();
    return HB_OK;
}

hb_status hb_hypergraph_load(const char* path, hb_hypergraph** out) {
    if (hb_status s = require(path && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        *out = new hb_hypergraph{load_hg(path)};
        return HB_OK;
    });
}

hb_status hb_hypergraph_save(const hb_hypergraph* h, const char* path, const char* comment) {
    if (hb_status s = require(h && path, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        save_hg(h->value, path, comment ? comment : "");
        return HB_OK;
    });
}

hb_status hb_hypergraph_serialize(const hb_hypergraph* h, char** out) {
    if (hb_status s = require(h && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        *out = dup_string(to_hg_string(h->value));
        return HB_OK;
    });
}

hb_status hb_graph_load(const char* path, hb_graph** out) {
    if (hb_status s = require(path && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        *out = new hb_graph{load_pg(path)};
        return HB_OK;
    });
}

hb_status hb_graph_save(const hb_graph* g, const char* path, const char* comment) {
    if (hb_status s = require(g && path, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        save_pg(g->value, path, comment ? comment : "");
        return HB_OK;
    });
}

hb_status hb_graph_serialize(const hb_graph* g, char** out) {
    if (hb_status s = require(g && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        *out = dup_string(to_pg_string(g->value));
        return HB_OK;
    });
}

hb_status hb_graph_num_vertices(const hb_graph* g, uint32_t* out) {
    if (hb_status s = require(g && out, "null argument"); s != HB_OK) return s;
    *out = g->value.num_vertices();
    return HB_OK;
}

hb_status hb_graph_num_edges(const hb_graph* g, uint64_t* out) {
    if (hb_status s = require(g && out, "null argument"); s != HB_OK) return s;
    *out = g->value.num_edges();
    return HB_OK;
}

hb_status hb_project(const hb_hypergraph* h, hb_graph** out) {
    if (hb_status s = require(h && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        *out = new hb_graph{project(h->value)};
        return HB_OK;
    });
}

hb_params hb_params_default(void) {
    ModelParams d;
    return hb_params{d.p, d.beta, d.gamma, d.max_edge_size};
}

hb_status hb_log_posterior(const hb_graph* g, const hb_hypergraph* h, const hb_params* params,
                           double* out) {
    if (hb_status s = require(g && h && params && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        *out = log_posterior(g->value, h->value, to_params(*params));
        return HB_OK;
    });
}

hb_sampler_config hb_sampler_config_default(void) {
    hb_sampler_config c;
    c.iterations = 50000;
    c.seed = 0;
    c.burn_in = UINT64_MAX;
    c.params = hb_params_default();
    c.record_trace = 1;
    c.record_timing = 0;
    c.enforce_projection = 1;
    c.verify_projection = 0;
    c.clique_cap = 1000000;
    return c;
}

hb_status hb_sampler_run(const hb_graph* g, const hb_sampler_config* config, hb_trace** out) {
    if (hb_status s = require(g && config && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        SamplerConfig cfg;
        cfg.iterations = config->iterations;
        cfg.seed = config->seed;
        cfg.burn_in = config->burn_in;
        cfg.params = to_params(config->params);
        cfg.record_trace = config->record_trace != 0;
        cfg.record_timing = config->record_timing != 0;
        cfg.enforce_projection = config->enforce_projection != 0;
        cfg.verify_projection = config->verify_projection != 0;
        cfg.clique_cap = config->clique_cap;
        *out = new hb_trace{run_sampler(g->value, cfg)};
        return HB_OK;
    });
}

hb_status hb_trace_get_stats(const hb_trace* t, hb_trace_stats* out) {
    if (hb_status s = require(t && out, "null argument"); s != HB_OK) return s;
    const SamplerTrace& tr = t->value;
    out->map_log_posterior = tr.map_log_posterior;
    out->map_iteration = tr.map_iteration;
    out->final_log_posterior = tr.final_log_posterior;
    out->initial_log_posterior = tr.initial_log_posterior;
    out->initial_num_hyperedges = tr.initial_num_hyperedges;
    out->final_num_hyperedges = tr.final_hypergraph.total_edge_count();
    out->proposals = tr.proposals;
    out->accepted = tr.accepted;
    out->projection_violations = tr.projection_violations;
    out->rows = tr.rows.size();
    return HB_OK;
}

hb_status hb_trace_map(const hb_trace* t, hb_hypergraph** out) {
    if (hb_status s = require(t && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        *out = new hb_hypergraph{t->value.map_hypergraph};
        return HB_OK;
    });
}

hb_status hb_trace_write_csv(const hb_trace* t, const char* path, uint64_t stride,
                             const char* comment) {
    if (hb_status s = require(t && path, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        write_trace_csv(t->value, path, stride, comment ? comment : "");
        return HB_OK;
    });
}

hb_status hb_trace_entropy_histogram(const hb_trace* t, uint64_t out_bins[50]) {
    if (hb_status s = require(t && out_bins, "null argument"); s != HB_OK) return s;
    auto bins = entropy_histogram(t->value);
    for (std::size_t i = 0; i < bins.size(); ++i) out_bins[i] = bins[i];
    return HB_OK;
}

hb_status hb_trace_convergence_csv(const hb_trace* t, const char* path, size_t max_points,
                                   const char* comment) {
    if (hb_status s = require(t && path, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        auto points = convergence_curve(t->value, max_points);
        std::string out;
        if (comment && *comment) out += std::string("# ") + comment + "\n";
        out += "t,elapsed_ms,num_hyperedges\n";
        char buf[96];
        for (const auto& p : points) {
            std::snprintf(buf, sizeof(buf), "%llu,%.6f,%llu\n",
                          static_cast<unsigned long long>(p.t), p.elapsed_ms,
                          static_cast<unsigned long long>(p.num_hyperedges));
            out += buf;
        }
        write_file(path, out);
        return HB_OK;
    });
}

hb_status hb_channel_run(const hb_graph* g, int noiseless, double snr_db, uint64_t seed,
                         uint32_t vertex_cap, hb_graph** out, uint64_t* symbols,
                         uint64_t* flipped) {
    if (hb_status s = require(g && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        ChannelConfig cfg;
        if (!noiseless) cfg.snr_db = snr_db;
        cfg.seed = seed;
        ChannelResult r = run_channel(g->value, cfg, vertex_cap);
        *out = new hb_graph{std::move(r.graph)};
        if (symbols) *symbols = r.symbols;
        if (flipped) *flipped = r.flipped;
        return HB_OK;
    });
}

hb_oracle_bounds hb_oracle_bounds_default(void) {
    EnumerationBounds d;
    return hb_oracle_bounds{d.max_vertices, d.max_multiplicity, d.max_states};
}

hb_status hb_oracle_exact_map(const hb_graph* g, const hb_params* params,
                              const hb_oracle_bounds* bounds, hb_hypergraph** map_out,
                              double* log_posterior_out) {
    if (hb_status s = require(g && params && bounds, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        EnumerationBounds b{bounds->max_vertices, bounds->max_multiplicity, bounds->max_states};
        auto [h, lp] = exact_map(g->value, to_params(*params), b);
        if (map_out) *map_out = new hb_hypergraph{std::move(h)};
        if (log_posterior_out) *log_posterior_out = lp;
        return HB_OK;
    });
}

hb_status hb_synth_planted(uint32_t num_vertices, const uint32_t* sizes, const uint32_t* counts,
                           size_t buckets, uint64_t seed, hb_hypergraph** out) {
    if (hb_status s = require(sizes && counts && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        std::vector<SizeCount> recipe;
        for (size_t i = 0; i < buckets; ++i) recipe.push_back(SizeCount{sizes[i], counts[i]});
        *out = new hb_hypergraph{make_planted_hypergraph(num_vertices, recipe, seed)};
        return HB_OK;
    });
}

hb_status hb_synth_connected_gnp(uint32_t num_vertices, double edge_prob, uint64_t seed,
                                 hb_graph** out) {
    if (hb_status s = require(out != nullptr, "null output"); s != HB_OK) return s;
    return guarded([&] {
        *out = new hb_graph{make_connected_gnp(num_vertices, edge_prob, seed)};
        return HB_OK;
    });
}

hb_status hb_ingest(const char* path, hb_format format, hb_hypergraph** out, char** report_json,
                    char** entities_tsv) {
    if (hb_status s = require(path && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        DatasetFormat fmt;
        switch (format) {
            case HB_FORMAT_NARY_TSV: fmt = DatasetFormat::NaryTsv; break;
            case HB_FORMAT_SIMPLEX: fmt = DatasetFormat::SimplexList; break;
            case HB_FORMAT_HG: fmt = DatasetFormat::Hg; break;
            default:
                set_error("unknown dataset format");
                return HB_ERR_INVALID_ARGUMENT;
        }
        IngestResult r = ingest(path, fmt);
        *out = new hb_hypergraph{std::move(r.hypergraph)};
        if (report_json) *report_json = dup_string(r.report.to_json());
        if (entities_tsv) {
            std::string tsv;
            for (std::size_t id = 0; id < r.dictionary.size(); ++id) {
                tsv += std::to_string(id);
                tsv += '\t';
                tsv += r.dictionary.name(static_cast<VertexId>(id));
                tsv += '\n';
            }
            *entities_tsv = dup_string(tsv);
        }
        return HB_OK;
    });
}

hb_status hb_subsample(const hb_hypergraph* h, uint64_t max_edges, uint64_t seed,
                       hb_hypergraph** out) {
    if (hb_status s = require(h && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        *out = new hb_hypergraph{subsample(h->value, max_edges, seed)};
        return HB_OK;
    });
}

hb_status hb_score(const hb_hypergraph* truth, const hb_hypergraph* recovered,
                   hb_recovery_score* out) {
    if (hb_status s = require(truth && recovered && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        RecoveryScore score = recovery_score(truth->value, recovered->value);
        out->precision = score.precision;
        out->recall = score.recall;
        out->f1 = score.f1;
        out->jaccard_mean = score.jaccard_mean;
        out->multiplicity_agreement = score.multiplicity_agreement;
        return HB_OK;
    });
}

hb_status hb_score_json(const hb_hypergraph* truth, const hb_hypergraph* recovered, char** out) {
    if (hb_status s = require(truth && recovered && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        *out = dup_string(recovery_score(truth->value, recovered->value).to_json());
        return HB_OK;
    });
}

hb_status hb_size_histogram_json(const hb_hypergraph* h, char** out) {
    if (hb_status s = require(h && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        SizeHistogram hist = size_histogram(h->value);
        nlohmann::json j;
        nlohmann::json d = nlohmann::json::object(), w = nlohmann::json::object();
        for (const auto& [size, count] : hist.distinct) d[std::to_string(size)] = count;
        for (const auto& [size, count] : hist.weighted) w[std::to_string(size)] = count;
        j["distinct"] = d;
        j["weighted"] = w;
        *out = dup_string(j.dump(2));
        return HB_OK;
    });
}

hb_status hb_compression_rate(const hb_hypergraph* h, uint32_t limit, double* out) {
    if (hb_status s = require(h && out, "null argument"); s != HB_OK) return s;
    return guarded([&] {
        *out = compression_rate(h->value, limit);
        return HB_OK;
    });
}

}  // extern "C"
