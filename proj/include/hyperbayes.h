/* hyperbayes C API: opaque handles over the hypergraph reconstruction core.
 *
 * Every function returns hb_status; outputs are written through pointers on
 * HB_OK only. Handles are created by the library and released with the
 * matching _free call. Distinct handles may be used from distinct threads;
 * a single handle is not internally synchronized. hb_last_error() returns a
 * thread-local message for the most recent failure on the calling thread.
 */
#ifndef HYPERBAYES_H
#define HYPERBAYES_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hb_status {
    HB_OK = 0,
    HB_ERR_INVALID_ARGUMENT = 1,
    HB_ERR_PARSE = 2,
    HB_ERR_IO = 3,
    HB_ERR_LIMIT = 4,
    HB_ERR_INTERNAL = 5
} hb_status;

typedef struct hb_hypergraph hb_hypergraph; /* hyperedge multiset */
typedef struct hb_graph hb_graph;           /* pairwise graph */
typedef struct hb_trace hb_trace;           /* sampler output */

const char* hb_version(void);
const char* hb_last_error(void);

void hb_string_free(char* s);
void hb_hypergraph_free(hb_hypergraph* h);
void hb_graph_free(hb_graph* g);
void hb_trace_free(hb_trace* t);

/* ---- structures ---- */

hb_status hb_hypergraph_create(uint32_t num_vertices, hb_hypergraph** out);
hb_status hb_hypergraph_add_edge(hb_hypergraph* h, const uint32_t* vertices, size_t count,
                                 uint32_t multiplicity);
hb_status hb_hypergraph_num_vertices(const hb_hypergraph* h, uint32_t* out);
hb_status hb_hypergraph_distinct_edges(const hb_hypergraph* h, uint64_t* out);
hb_status hb_hypergraph_total_edges(const hb_hypergraph* h, uint64_t* out);

hb_status hb_hypergraph_load(const char* path, hb_hypergraph** out);
hb_status hb_hypergraph_save(const hb_hypergraph* h, const char* path, const char* comment);
hb_status hb_hypergraph_serialize(const hb_hypergraph* h, char** out);

hb_status hb_graph_load(const char* path, hb_graph** out);
hb_status hb_graph_save(const hb_graph* g, const char* path, const char* comment);
hb_status hb_graph_serialize(const hb_graph* g, char** out);
hb_status hb_graph_num_vertices(const hb_graph* g, uint32_t* out);
hb_status hb_graph_num_edges(const hb_graph* g, uint64_t* out);

hb_status hb_project(const hb_hypergraph* h, hb_graph** out);

/* ---- model and sampler ---- */

typedef struct hb_params {
    double p;               /* pairwise emission probability, in (0,1) */
    double beta;            /* sparsity weight, >= 0 */
    double gamma;           /* multiplicity-penalty weight, >= 0 */
    uint32_t max_edge_size; /* hyperedge size limit, >= 2 */
} hb_params;

hb_params hb_params_default(void);

hb_status hb_log_posterior(const hb_graph* g, const hb_hypergraph* h, const hb_params* params,
                           double* out);

typedef struct hb_sampler_config {
    uint64_t iterations;
    uint64_t seed;
    uint64_t burn_in; /* UINT64_MAX selects iterations / 10 */
    hb_params params;
    int record_trace;
    int record_timing;
    int enforce_projection;
    int verify_projection;
    uint64_t clique_cap;
} hb_sampler_config;

hb_sampler_config hb_sampler_config_default(void);

hb_status hb_sampler_run(const hb_graph* g, const hb_sampler_config* config, hb_trace** out);

typedef struct hb_trace_stats {
    double map_log_posterior;
    uint64_t map_iteration;
    double final_log_posterior;
    double initial_log_posterior;
    uint64_t initial_num_hyperedges;
    uint64_t final_num_hyperedges;
    uint64_t proposals;
    uint64_t accepted;
    uint64_t projection_violations;
    uint64_t rows;
} hb_trace_stats;

hb_status hb_trace_get_stats(const hb_trace* t, hb_trace_stats* out);
hb_status hb_trace_map(const hb_trace* t, hb_hypergraph** out);
hb_status hb_trace_write_csv(const hb_trace* t, const char* path, uint64_t stride,
                             const char* comment);
hb_status hb_trace_entropy_histogram(const hb_trace* t, uint64_t out_bins[50]);
hb_status hb_trace_convergence_csv(const hb_trace* t, const char* path, size_t max_points,
                                   const char* comment);

/* ---- channel ---- */

hb_status hb_channel_run(const hb_graph* g, int noiseless, double snr_db, uint64_t seed,
                         uint32_t vertex_cap, hb_graph** out, uint64_t* symbols,
                         uint64_t* flipped);

/* ---- oracle ---- */

typedef struct hb_oracle_bounds {
    uint32_t max_vertices;
    uint32_t max_multiplicity;
    double max_states;
} hb_oracle_bounds;

hb_oracle_bounds hb_oracle_bounds_default(void);

hb_status hb_oracle_exact_map(const hb_graph* g, const hb_params* params,
                              const hb_oracle_bounds* bounds, hb_hypergraph** map_out,
                              double* log_posterior_out);

/* ---- synthetic instances ---- */

hb_status hb_synth_planted(uint32_t num_vertices, const uint32_t* sizes, const uint32_t* counts,
                           size_t buckets, uint64_t seed, hb_hypergraph** out);
hb_status hb_synth_connected_gnp(uint32_t num_vertices, double edge_prob, uint64_t seed,
                                 hb_graph** out);

/* ---- datasets ---- */

typedef enum hb_format {
    HB_FORMAT_NARY_TSV = 0,
    HB_FORMAT_SIMPLEX = 1,
    HB_FORMAT_HG = 2
} hb_format;

/* report_json and entities_tsv (id<TAB>name lines) are optional outputs. */
hb_status hb_ingest(const char* path, hb_format format, hb_hypergraph** out, char** report_json,
                    char** entities_tsv);
hb_status hb_subsample(const hb_hypergraph* h, uint64_t max_edges, uint64_t seed,
                       hb_hypergraph** out);

/* ---- metrics ---- */

typedef struct hb_recovery_score {
    double precision;
    double recall;
    double f1;
    double jaccard_mean;
    double multiplicity_agreement;
} hb_recovery_score;

hb_status hb_score(const hb_hypergraph* truth, const hb_hypergraph* recovered,
                   hb_recovery_score* out);
hb_status hb_score_json(const hb_hypergraph* truth, const hb_hypergraph* recovered, char** out);
hb_status hb_size_histogram_json(const hb_hypergraph* h, char** out);
hb_status hb_compression_rate(const hb_hypergraph* h, uint32_t limit, double* out);

#ifdef __cplusplus
}
#endif

#endif /* HYPERBAYES_H */
