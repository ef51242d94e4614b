// hyperbayes command-line tool: ingest, reconstruct, sweeps, oracle checks
// and benchmarks over the hyperbayes shared library (C API).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperbayes.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

[[noreturn]] void die(int code, const std::string& message) {
    std::cerr << "error: " << message << "\n";
    std::exit(code);
}

int status_exit_code(hb_status s) {
    switch (s) {
        case HB_OK: return 0;
        case HB_ERR_INVALID_ARGUMENT: return kExitUsage;
        case HB_ERR_PARSE: return kExitData;
        case HB_ERR_IO: return kExitData;
        case HB_ERR_LIMIT: return kExitData;
        default: return kExitInternal;
    }
}

void check(hb_status s, const std::string& context) {
    if (s == HB_OK) return;
    die(status_exit_code(s), context + ": " + hb_last_error());
}

// RAII wrappers over the C handles.
struct HgPtr {
    hb_hypergraph* ptr = nullptr;
    ~HgPtr() { hb_hypergraph_free(ptr); }
    hb_hypergraph** out() { return &ptr; }
    operator hb_hypergraph*() const { return ptr; }
};
struct GraphPtr {
    hb_graph* ptr = nullptr;
    ~GraphPtr() { hb_graph_free(ptr); }
    hb_graph** out() { return &ptr; }
    operator hb_graph*() const { return ptr; }
};
struct TracePtr {
    hb_trace* ptr = nullptr;
    ~TracePtr() { hb_trace_free(ptr); }
    hb_trace** out() { return &ptr; }
    operator hb_trace*() const { return ptr; }
};
struct CStr {
    char* ptr = nullptr;
    ~CStr() { hb_string_free(ptr); }
    char** out() { return &ptr; }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t s = base ^ (0x9e3779b97f4a7c15ull * (stream + 1));
    return splitmix64(s);
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) die(kExitData, "cannot write " + path);
    out << content;
}

// The manifest hash covers the reproducible inputs only; timestamps live in
// the manifest file, never in the hash or the data files.
struct Manifest {
    std::string command;
    json arguments = json::object();
    std::vector<std::string> outputs;

    std::string hash() const {
        json core;
        core["tool"] = "hyperbayes";
        core["version"] = hb_version();
        core["command"] = command;
        // Output locations do not shape the data; dropping them keeps reruns
        // into fresh directories byte-identical.
        json args = arguments;
        args.erase("out");
        args.erase("detail_dir");
        core["arguments"] = args;
        return fnv1a_hex(core.dump());
    }

    void write(const std::string& path) const {
        json j;
        j["tool"] = "hyperbayes";
        j["version"] = hb_version();
        j["command"] = command;
        j["arguments"] = arguments;
        j["outputs"] = outputs;
        j["manifest_hash"] = hash();
        j["created_at"] = utc_now();
        write_text(path, j.dump(2) + "\n");
    }
};

struct ParamFlags {
    double p = 0.99;
    double beta = 1.0;
    double gamma = 5.0;
    std::uint32_t max_edge_size = 6;

    void attach(CLI::App* cmd) {
        cmd->add_option("--params-p", p, "pairwise emission probability (0,1)");
        cmd->add_option("--beta", beta, "sparsity weight");
        cmd->add_option("--gamma", gamma, "multiplicity penalty weight");
        cmd->add_option("--max-edge-size", max_edge_size, "hyperedge size limit");
    }
    hb_params to_params() const { return hb_params{p, beta, gamma, max_edge_size}; }
    json to_json() const {
        return json{{"p", p}, {"beta", beta}, {"gamma", gamma}, {"max_edge_size", max_edge_size}};
    }
};

struct SamplerFlags {
    std::uint64_t iterations = 50000;
    std::uint64_t burn_in = UINT64_MAX;
    std::uint64_t seed = 0;
    std::uint64_t trace_stride = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--iterations", iterations, "chain length");
        cmd->add_option("--burn-in", burn_in, "burn-in iterations (default iterations/10)");
        cmd->add_option("--seed", seed, "sampler seed");
        cmd->add_option("--trace-stride", trace_stride, "trace CSV row stride");
    }
    json to_json() const {
        json j{{"iterations", iterations}, {"seed", seed}, {"trace_stride", trace_stride}};
        j["burn_in"] = burn_in == UINT64_MAX ? json("iterations/10") : json(burn_in);
        return j;
    }
};

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

unsigned worker_count(std::size_t points) {
    unsigned n = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("HYPERBAYES_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) n = static_cast<unsigned>(v);
    }
    if (n == 0) n = 1;
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(points, 1)));
}

// Worker-side failure carrier: C API status plus message.
struct WorkerError : std::runtime_error {
    explicit WorkerError(const std::string& what) : std::runtime_error(what) {}
};

void worker_check(hb_status s, const std::string& context) {
    if (s != HB_OK) throw WorkerError(context + ": " + hb_last_error());
}

template <typename Fn>
void parallel_for(std::size_t points, Fn&& fn) {
    const unsigned workers = worker_count(points);
    if (workers <= 1) {
        for (std::size_t i = 0; i < points; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::mutex fail_mutex;
    std::string failure;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < points; i += workers) fn(i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (failure.empty()) failure = e.what();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (!failure.empty()) die(kExitInternal, failure);
}

void require_file(const std::string& path) {
    if (!fs::exists(path)) die(kExitUsage, "input file not found: " + path);
}

hb_format parse_format(const std::string& name) {
    if (name == "nary-tsv") return HB_FORMAT_NARY_TSV;
    if (name == "simplex-list") return HB_FORMAT_SIMPLEX;
    if (name == "hg") return HB_FORMAT_HG;
    die(kExitUsage, "unknown format '" + name + "' (expected nary-tsv, simplex-list or hg)");
}

std::string format_double(double v, const char* fmt = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

json entropy_json(const hb_trace* trace) {
    std::uint64_t bins[50];
    check(hb_trace_entropy_histogram(trace, bins), "entropy histogram");
    json arr = json::array();
    for (std::uint64_t b : bins) arr.push_back(b);
    return arr;
}

std::string entropy_csv(const std::uint64_t bins[50], const std::string& comment) {
    std::string out;
    if (!comment.empty()) out += "# " + comment + "\n";
    out += "bin_low,bin_high,count\n";
    for (int i = 0; i < 50; ++i) {
        out += format_double(i / 50.0, "%.2f") + "," + format_double((i + 1) / 50.0, "%.2f") +
               "," + std::to_string(bins[i]) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------- ingest --

int cmd_ingest(const std::string& in, const std::string& format, const std::string& out,
               std::uint64_t subsample_edges, std::uint64_t subsample_seed) {
    require_file(in);
    hb_format fmt = parse_format(format);

    Manifest manifest;
    manifest.command = "ingest";
    manifest.arguments = {{"input", in}, {"format", format}, {"out", out}};
    if (subsample_edges > 0) {
        manifest.arguments["subsample_edges"] = subsample_edges;
        manifest.arguments["subsample_seed"] = subsample_seed;
    }
    const std::string hash = manifest.hash();

    HgPtr h;
    CStr report, entities;
    check(hb_ingest(in.c_str(), fmt, h.out(), report.out(), entities.out()), "ingest " + in);

    HgPtr sampled;
    hb_hypergraph* to_save = h;
    if (subsample_edges > 0) {
        check(hb_subsample(h, subsample_edges, subsample_seed, sampled.out()), "subsample");
        to_save = sampled;
    }
    check(hb_hypergraph_save(to_save, out.c_str(), ("manifest " + hash).c_str()), "save " + out);

    json rep = json::parse(report.str());
    rep["manifest_hash"] = hash;
    if (subsample_edges > 0) rep["subsampled_to"] = subsample_edges;
    write_text(out + ".report.json", rep.dump(2) + "\n");
    write_text(out + ".entities.tsv", entities.str());
    manifest.outputs = {out, out + ".report.json", out + ".entities.tsv"};
    manifest.write(out + ".manifest.json");

    std::uint64_t distinct = 0, total = 0;
    hb_hypergraph_distinct_edges(to_save, &distinct);
    hb_hypergraph_total_edges(to_save, &total);
    std::cout << "ingested " << in << ": " << distinct << " distinct hyperedges (" << total
              << " total) -> " << out << "\n";
    return 0;
}

// ----------------------------------------------------------- reconstruct --

struct LoadedInput {
    HgPtr truth;  // null when reconstructing from a pairwise graph
    GraphPtr graph;
    bool has_truth = false;
};

void load_reconstruction_input(const std::string& in, LoadedInput& loaded) {
    require_file(in);
    if (in.size() >= 3 && in.substr(in.size() - 3) == ".pg") {
        check(hb_graph_load(in.c_str(), loaded.graph.out()), "load " + in);
        return;
    }
    check(hb_hypergraph_load(in.c_str(), loaded.truth.out()), "load " + in);
    check(hb_project(loaded.truth, loaded.graph.out()), "project " + in);
    loaded.has_truth = true;
}

int cmd_reconstruct(const std::string& in, const ParamFlags& params, const SamplerFlags& sampler,
                    const std::string& out_dir, const std::string& convergence_out) {
    LoadedInput input;
    load_reconstruction_input(in, input);
    fs::create_directories(out_dir);

    Manifest manifest;
    manifest.command = "reconstruct";
    manifest.arguments = {{"input", in},
                          {"out", out_dir},
                          {"params", params.to_json()},
                          {"sampler", sampler.to_json()}};
    const std::string hash = manifest.hash();

    hb_sampler_config cfg = hb_sampler_config_default();
    cfg.iterations = sampler.iterations;
    cfg.burn_in = sampler.burn_in;
    cfg.seed = sampler.seed;
    cfg.params = params.to_params();
    cfg.record_timing = convergence_out.empty() ? 0 : 1;

    TracePtr trace;
    check(hb_sampler_run(input.graph, &cfg, trace.out()), "sampler");

    HgPtr map;
    check(hb_trace_map(trace, map.out()), "map");
    const std::string map_path = (fs::path(out_dir) / "map.hg").string();
    const std::string trace_path = (fs::path(out_dir) / "trace.csv").string();
    check(hb_hypergraph_save(map, map_path.c_str(), ("manifest " + hash).c_str()), "save map");
    check(hb_trace_write_csv(trace, trace_path.c_str(), sampler.trace_stride,
                             ("manifest " + hash).c_str()),
          "trace csv");

    hb_trace_stats stats{};
    check(hb_trace_get_stats(trace, &stats), "trace stats");

    json metrics;
    metrics["manifest_hash"] = hash;
    metrics["map_log_posterior"] = stats.map_log_posterior;
    metrics["map_iteration"] = stats.map_iteration;
    metrics["initial_log_posterior"] = stats.initial_log_posterior;
    metrics["final_log_posterior"] = stats.final_log_posterior;
    metrics["initial_num_hyperedges"] = stats.initial_num_hyperedges;
    metrics["final_num_hyperedges"] = stats.final_num_hyperedges;
    metrics["proposals"] = stats.proposals;
    metrics["accepted"] = stats.accepted;
    metrics["entropy_histogram"] = entropy_json(trace);
    {
        CStr hist;
        check(hb_size_histogram_json(map, hist.out()), "size histogram");
        metrics["size_histogram_map"] = json::parse(hist.str());
    }
    if (input.has_truth) {
        CStr score;
        check(hb_score_json(input.truth, map, score.out()), "score");
        metrics["recovery"] = json::parse(score.str());
        CStr hist;
        check(hb_size_histogram_json(input.truth, hist.out()), "truth histogram");
        metrics["size_histogram_truth"] = json::parse(hist.str());
    }
    const std::string metrics_path = (fs::path(out_dir) / "metrics.json").string();
    write_text(metrics_path, metrics.dump(2) + "\n");

    manifest.outputs = {map_path, trace_path, metrics_path};
    if (!convergence_out.empty()) {
        check(hb_trace_convergence_csv(trace, convergence_out.c_str(), 1000,
                                       ("manifest " + hash).c_str()),
              "convergence csv");
        manifest.outputs.push_back(convergence_out);
    }
    manifest.write((fs::path(out_dir) / "manifest.json").string());

    std::uint64_t map_edges = 0;
    hb_hypergraph_total_edges(map, &map_edges);
    std::cout << "reconstructed " << in << ": map log-posterior "
              << format_double(stats.map_log_posterior, "%.6f") << ", " << map_edges
              << " hyperedges -> " << out_dir << "\n";
    return 0;
}

// ------------------------------------------------------------- sweep-snr --

int cmd_sweep_snr(const std::string& in, const std::string& snr_list, std::uint64_t num_seeds,
                  std::uint64_t channel_seed, const ParamFlags& params,
                  const SamplerFlags& sampler, const std::string& out,
                  const std::string& detail_dir) {
    require_file(in);
    HgPtr truth;
    check(hb_hypergraph_load(in.c_str(), truth.out()), "load " + in);
    GraphPtr clean;
    check(hb_project(truth, clean.out()), "project");

    const std::vector<std::string> snrs = split_list(snr_list);
    if (snrs.empty()) die(kExitUsage, "empty --snr-list");
    if (num_seeds == 0) die(kExitUsage, "--num-seeds must be positive");

    Manifest manifest;
    manifest.command = "sweep-snr";
    manifest.arguments = {{"input", in},
                          {"snr_list", snr_list},
                          {"num_seeds", num_seeds},
                          {"channel_seed", channel_seed},
                          {"params", params.to_json()},
                          {"sampler", sampler.to_json()},
                          {"out", out}};
    const std::string hash = manifest.hash();
    if (!detail_dir.empty()) fs::create_directories(detail_dir);

    struct Row {
        std::string snr;
        std::uint64_t seed = 0;
        double f1 = 0.0, jaccard = 0.0, flip_rate = 0.0;
    };
    std::vector<Row> rows(snrs.size() * num_seeds);

    parallel_for(rows.size(), [&](std::size_t idx) {
        const std::size_t snr_idx = idx / num_seeds;
        const std::uint64_t seed = idx % num_seeds;
        const std::string& token = snrs[snr_idx];
        const bool noiseless = token == "inf" || token == "none";
        double snr_db = 0.0;
        if (!noiseless) snr_db = std::stod(token);

        GraphPtr received;
        std::uint64_t symbols = 0, flipped = 0;
        worker_check(hb_channel_run(clean, noiseless ? 1 : 0, snr_db,
                                    derive_seed(channel_seed, idx), 2000, received.out(),
                                    &symbols, &flipped),
                     "channel");

        hb_sampler_config cfg = hb_sampler_config_default();
        cfg.iterations = sampler.iterations;
        cfg.burn_in = sampler.burn_in;
        cfg.seed = derive_seed(sampler.seed, idx);
        cfg.params = params.to_params();
        TracePtr trace;
        worker_check(hb_sampler_run(received, &cfg, trace.out()), "sampler");
        HgPtr map;
        worker_check(hb_trace_map(trace, map.out()), "map");

        hb_recovery_score score{};
        worker_check(hb_score(truth, map, &score), "score");
        rows[idx] = Row{token, seed, score.f1, score.jaccard_mean,
                        symbols == 0 ? 0.0 : double(flipped) / double(symbols)};

        if (!detail_dir.empty()) {
            std::uint64_t bins[50];
            worker_check(hb_trace_entropy_histogram(trace, bins), "entropy histogram");
            const std::string path =
                (fs::path(detail_dir) /
                 ("entropy_" + token + "_seed" + std::to_string(seed) + ".csv"))
                    .string();
            write_text(path, entropy_csv(bins, "manifest " + hash));
        }
    });

    std::string csv = "# manifest " + hash + "\nsnr_db,seed,f1,jaccard,edge_flip_rate\n";
    for (const Row& r : rows) {
        csv += r.snr + "," + std::to_string(r.seed) + "," + format_double(r.f1) + "," +
               format_double(r.jaccard) + "," + format_double(r.flip_rate, "%.8f") + "\n";
    }
    write_text(out, csv);
    manifest.outputs = {out};
    manifest.write(out + ".manifest.json");
    std::cout << "snr sweep: " << rows.size() << " rows -> " << out << "\n";
    return 0;
}

// ---------------------------------------------------------- sweep-length --

int cmd_sweep_length(const std::string& in, const std::string& l_list, const ParamFlags& params,
                     const SamplerFlags& sampler, const std::string& out) {
    require_file(in);
    HgPtr truth;
    check(hb_hypergraph_load(in.c_str(), truth.out()), "load " + in);
    GraphPtr clean;
    check(hb_project(truth, clean.out()), "project");

    std::vector<std::uint32_t> limits;
    for (const std::string& tok : split_list(l_list)) {
        limits.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    }
    if (limits.empty()) die(kExitUsage, "empty --l-list");

    Manifest manifest;
    manifest.command = "sweep-length";
    manifest.arguments = {{"input", in},
                          {"l_list", l_list},
                          {"params", params.to_json()},
                          {"sampler", sampler.to_json()},
                          {"out", out}};
    const std::string hash = manifest.hash();

    struct Row {
        std::uint32_t limit = 0;
        double rate = 0.0, f1 = 0.0;
    };
    std::vector<Row> rows(limits.size());

    parallel_for(limits.size(), [&](std::size_t idx) {
        const std::uint32_t limit = limits[idx];
        double rate = 0.0;
        worker_check(hb_compression_rate(truth, limit, &rate), "compression rate");

        hb_sampler_config cfg = hb_sampler_config_default();
        cfg.iterations = sampler.iterations;
        cfg.burn_in = sampler.burn_in;
        cfg.seed = derive_seed(sampler.seed, idx);
        cfg.params = params.to_params();
        cfg.params.max_edge_size = limit;
        TracePtr trace;
        worker_check(hb_sampler_run(clean, &cfg, trace.out()), "sampler");
        HgPtr map;
        worker_check(hb_trace_map(trace, map.out()), "map");
        hb_recovery_score score{};
        worker_check(hb_score(truth, map, &score), "score");
        rows[idx] = Row{limit, rate, score.f1};
    });

    std::string csv = "# manifest " + hash + "\nL,compression_rate,f1\n";
    for (const Row& r : rows) {
        csv += std::to_string(r.limit) + "," + format_double(r.rate) + "," +
               format_double(r.f1) + "\n";
    }
    write_text(out, csv);
    manifest.outputs = {out};
    manifest.write(out + ".manifest.json");
    std::cout << "length sweep: " << rows.size() << " rows -> " << out << "\n";
    return 0;
}

// ----------------------------------------------------------- oracle-check --

int cmd_oracle_check(std::uint64_t instances, std::uint64_t seed, double edge_prob,
                     std::uint32_t min_vertices, std::uint32_t max_vertices,
                     std::uint32_t max_mult, double max_states, double tolerance,
                     const ParamFlags& params, const SamplerFlags& sampler,
                     const std::string& out) {
    if (instances == 0) die(kExitUsage, "--instances must be positive");
    if (min_vertices < 2 || max_vertices < min_vertices) {
        die(kExitUsage, "invalid vertex range");
    }

    Manifest manifest;
    manifest.command = "oracle-check";
    manifest.arguments = {{"instances", instances},
                          {"seed", seed},
                          {"edge_prob", edge_prob},
                          {"min_vertices", min_vertices},
                          {"max_vertices", max_vertices},
                          {"max_multiplicity", max_mult},
                          {"max_states", max_states},
                          {"tolerance", tolerance},
                          {"params", params.to_json()},
                          {"sampler", sampler.to_json()},
                          {"out", out}};
    const std::string hash = manifest.hash();

    hb_oracle_bounds bounds{max_vertices, max_mult, max_states};

    struct Result {
        bool matched = false;
        bool refused = false;
        json detail;
    };
    std::vector<Result> results(instances);

    parallel_for(instances, [&](std::size_t i) {
        std::uint64_t pick_state = derive_seed(seed, 2 * i);
        const std::uint32_t n =
            min_vertices + static_cast<std::uint32_t>(splitmix64(pick_state) %
                                                      (max_vertices - min_vertices + 1));
        GraphPtr g;
        worker_check(hb_synth_connected_gnp(n, edge_prob, derive_seed(seed, 2 * i + 1), g.out()),
                     "instance graph");

        hb_sampler_config cfg = hb_sampler_config_default();
        cfg.iterations = sampler.iterations;
        cfg.burn_in = sampler.burn_in;
        cfg.seed = derive_seed(sampler.seed, i);
        cfg.params = params.to_params();
        cfg.record_trace = 0;
        TracePtr trace;
        worker_check(hb_sampler_run(g, &cfg, trace.out()), "sampler");
        hb_trace_stats stats{};
        worker_check(hb_trace_get_stats(trace, &stats), "stats");

        HgPtr oracle_map;
        double oracle_lp = 0.0;
        hb_params hp = params.to_params();
        hb_status s = hb_oracle_exact_map(g, &hp, &bounds, oracle_map.out(), &oracle_lp);
        Result& r = results[i];
        if (s == HB_ERR_LIMIT) {
            r.refused = true;
            CStr serial;
            hb_graph_serialize(g, serial.out());
            r.detail = {{"instance", i},
                        {"vertices", n},
                        {"refused", true},
                        {"graph", serial.str()}};
            return;
        }
        worker_check(s, "oracle");
        r.matched = std::abs(stats.map_log_posterior - oracle_lp) <= tolerance;
        if (!r.matched) {
            CStr gser, mser, oser;
            hb_graph_serialize(g, gser.out());
            HgPtr smap;
            worker_check(hb_trace_map(trace, smap.out()), "map");
            hb_hypergraph_serialize(smap, mser.out());
            hb_hypergraph_serialize(oracle_map, oser.out());
            r.detail = {{"instance", i},
                        {"vertices", n},
                        {"sampler_log_posterior", stats.map_log_posterior},
                        {"oracle_log_posterior", oracle_lp},
                        {"graph", gser.str()},
                        {"sampler_map", mser.str()},
                        {"oracle_map", oser.str()}};
        }
    });

    std::uint64_t matches = 0, refused = 0;
    json mismatches = json::array();
    for (const Result& r : results) {
        if (r.matched) ++matches;
        if (r.refused) ++refused;
        if (!r.matched) mismatches.push_back(r.detail.is_null() ? json::object() : r.detail);
    }

    json report;
    report["manifest_hash"] = hash;
    report["instances"] = instances;
    report["matches"] = matches;
    report["match_rate"] = double(matches) / double(instances);
    report["refused"] = refused;
    report["mismatches"] = mismatches;
    write_text(out, report.dump(2) + "\n");
    manifest.outputs = {out};
    manifest.write(out + ".manifest.json");

    std::cout << "oracle check: " << matches << "/" << instances << " matches";
    if (refused) std::cout << " (" << refused << " refused)";
    std::cout << " -> " << out << "\n";
    return 0;
}

// ------------------------------------------------------------------ bench --

int cmd_bench(const std::string& spec, std::uint64_t iters_per_edge, std::uint64_t min_iters,
              std::uint32_t max_edge_size, std::uint64_t seed, const std::string& out) {
    struct Point {
        std::uint32_t vertices;
        std::uint32_t edges;
    };
    std::vector<Point> points;
    for (const std::string& tok : split_list(spec)) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) die(kExitUsage, "bench spec entries are V:E");
        points.push_back(Point{static_cast<std::uint32_t>(std::stoul(tok.substr(0, colon))),
                               static_cast<std::uint32_t>(std::stoul(tok.substr(colon + 1)))});
    }
    if (points.empty()) die(kExitUsage, "empty bench spec");

    Manifest manifest;
    manifest.command = "bench";
    manifest.arguments = {{"spec", spec},
                          {"iterations_per_edge", iters_per_edge},
                          {"min_iterations", min_iters},
                          {"max_edge_size", max_edge_size},
                          {"seed", seed},
                          {"out", out}};
    const std::string hash = manifest.hash();

    std::string csv = "# manifest " + hash +
                      "\nnum_vertices,num_hyperedges,max_edge_size,ns_per_iteration,total_ms\n";
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
        const Point& pt = points[idx];
        // Size mix 40/30/20/10 percent over sizes 2..5.
        std::uint32_t sizes[4] = {2, 3, 4, 5};
        std::uint32_t counts[4];
        counts[0] = pt.edges * 4 / 10;
        counts[1] = pt.edges * 3 / 10;
        counts[2] = pt.edges * 2 / 10;
        counts[3] = pt.edges - counts[0] - counts[1] - counts[2];
        HgPtr planted;
        check(hb_synth_planted(pt.vertices, sizes, counts, 4, derive_seed(seed, idx),
                               planted.out()),
              "planted instance");
        GraphPtr g;
        check(hb_project(planted, g.out()), "project");

        hb_sampler_config cfg = hb_sampler_config_default();
        cfg.iterations = std::max<std::uint64_t>(min_iters, iters_per_edge * pt.edges);
        cfg.seed = derive_seed(seed ^ 0x5eedULL, idx);
        cfg.params.max_edge_size = max_edge_size;
        cfg.record_trace = 0;

        const auto start = std::chrono::steady_clock::now();
        TracePtr trace;
        check(hb_sampler_run(g, &cfg, trace.out()), "sampler");
        const auto elapsed = std::chrono::steady_clock::now() - start;
        const double total_ms =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed)
                .count();
        const double ns_per_iter = total_ms * 1e6 / double(cfg.iterations);

        csv += std::to_string(pt.vertices) + "," + std::to_string(pt.edges) + "," +
               std::to_string(max_edge_size) + "," + format_double(ns_per_iter, "%.1f") + "," +
               format_double(total_ms, "%.3f") + "\n";
        std::cout << "bench |V|=" << pt.vertices << " |E|=" << pt.edges << ": "
                  << format_double(ns_per_iter, "%.1f") << " ns/iteration\n";
    }
    write_text(out, csv);
    manifest.outputs = {out};
    manifest.write(out + ".manifest.json");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperbayes: Bayesian hypergraph reconstruction over noisy pairwise graphs"};
    app.require_subcommand(1);

    // ingest
    std::string in_path, out_path, format = "nary-tsv";
    std::uint64_t subsample_edges = 0, subsample_seed = 0;
    auto* ingest = app.add_subcommand("ingest", "parse a relational dataset into an .hg file");
    ingest->add_option("--in", in_path, "input file")->required();
    ingest->add_option("--format", format, "nary-tsv | simplex-list | hg");
    ingest->add_option("--out", out_path, "output .hg path")->required();
    ingest->add_option("--subsample-edges", subsample_edges,
                       "keep at most this many distinct hyperedges");
    ingest->add_option("--subsample-seed", subsample_seed, "subsample seed");

    // reconstruct
    std::string rec_in, rec_out = "out", convergence_out;
    ParamFlags rec_params;
    SamplerFlags rec_sampler;
    auto* reconstruct =
        app.add_subcommand("reconstruct", "recover a hypergraph from an .hg or .pg input");
    reconstruct->add_option("--in", rec_in, ".hg (projected first) or .pg input")->required();
    reconstruct->add_option("--out", rec_out, "output directory");
    reconstruct->add_option("--convergence-out", convergence_out,
                            "optional (t, elapsed_ms, num_hyperedges) CSV; wall-clock data");
    rec_params.attach(reconstruct);
    rec_sampler.attach(reconstruct);

    // sweep-snr
    std::string snr_in, snr_list = "-10,0,10,20,30", snr_out = "snr_sweep.csv", detail_dir;
    std::uint64_t num_seeds = 10, channel_seed = 0;
    ParamFlags snr_params;
    SamplerFlags snr_sampler;
    auto* sweep_snr =
        app.add_subcommand("sweep-snr", "channel + reconstruction sweep over SNR points");
    sweep_snr->add_option("--in", snr_in, "ground-truth .hg input")->required();
    sweep_snr->add_option("--snr-list", snr_list,
                          "comma list of SNR dB values ('inf' = noiseless)");
    sweep_snr->add_option("--num-seeds", num_seeds, "seeds per SNR point");
    sweep_snr->add_option("--channel-seed", channel_seed, "channel seed base");
    sweep_snr->add_option("--out", snr_out, "output CSV");
    sweep_snr->add_option("--detail-dir", detail_dir, "per-run entropy histograms directory");
    snr_params.attach(sweep_snr);
    snr_sampler.attach(sweep_snr);

    // sweep-length
    std::string len_in, l_list = "2,3,4,5,6", len_out = "length_sweep.csv";
    ParamFlags len_params;
    SamplerFlags len_sampler;
    auto* sweep_length =
        app.add_subcommand("sweep-length", "compression and recovery sweep over size limits");
    sweep_length->add_option("--in", len_in, "ground-truth .hg input")->required();
    sweep_length->add_option("--l-list", l_list, "comma list of size limits");
    sweep_length->add_option("--out", len_out, "output CSV");
    len_params.attach(sweep_length);
    len_sampler.attach(sweep_length);

    // oracle-check
    std::uint64_t oc_instances = 100;
    double oc_edge_prob = 0.5, oc_max_states = 1e8, oc_tolerance = 1e-9;
    std::uint32_t oc_min_v = 2, oc_max_v = 6, oc_max_mult = 2;
    std::string oc_out = "oracle_check.json";
    ParamFlags oc_params;
    SamplerFlags oc_sampler;
    auto* oracle_check = app.add_subcommand(
        "oracle-check", "sampler MAP vs exhaustive-enumeration MAP on random small graphs");
    oracle_check->add_option("--instances", oc_instances, "number of random instances");
    oracle_check->add_option("--edge-prob", oc_edge_prob, "G(n,p) edge probability");
    oracle_check->add_option("--min-vertices", oc_min_v, "minimum vertex count");
    oracle_check->add_option("--max-vertices", oc_max_v, "maximum vertex count");
    oracle_check->add_option("--max-mult", oc_max_mult, "oracle multiplicity bound");
    oracle_check->add_option("--max-states", oc_max_states, "oracle state-space bound");
    oracle_check->add_option("--tolerance", oc_tolerance, "log-posterior match tolerance");
    oracle_check->add_option("--out", oc_out, "report JSON path");
    oc_params.attach(oracle_check);
    oc_sampler.attach(oracle_check);

    // bench
    std::string bench_spec = "100:100,1000:100", bench_out = "bench.csv";
    std::uint64_t bench_ipe = 5, bench_min_iters = 200000, bench_seed = 0;
    std::uint32_t bench_L = 6;
    auto* bench = app.add_subcommand("bench", "per-iteration cost across instance sizes");
    bench->add_option("--spec", bench_spec, "comma list of V:E instance sizes");
    bench->add_option("--iterations-per-edge", bench_ipe, "chain length factor");
    bench->add_option("--min-iterations", bench_min_iters, "chain length floor");
    bench->add_option("--max-edge-size", bench_L, "hyperedge size limit");
    bench->add_option("--seed", bench_seed, "instance seed");
    bench->add_option("--out", bench_out, "output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(ingest)) {
            return cmd_ingest(in_path, format, out_path, subsample_edges, subsample_seed);
        }
        if (app.got_subcommand(reconstruct)) {
            return cmd_reconstruct(rec_in, rec_params, rec_sampler, rec_out, convergence_out);
        }
        if (app.got_subcommand(sweep_snr)) {
            return cmd_sweep_snr(snr_in, snr_list, num_seeds, channel_seed, snr_params,
                                 snr_sampler, snr_out, detail_dir);
        }
        if (app.got_subcommand(sweep_length)) {
            return cmd_sweep_length(len_in, l_list, len_params, len_sampler, len_out);
        }
        if (app.got_subcommand(oracle_check)) {
            return cmd_oracle_check(oc_instances, oc_sampler.seed, oc_edge_prob, oc_min_v,
                                    oc_max_v, oc_max_mult, oc_max_states, oc_tolerance,
                                    oc_params, oc_sampler, oc_out);
        }
        if (app.got_subcommand(bench)) {
            return cmd_bench(bench_spec, bench_ipe, bench_min_iters, bench_L, bench_seed,
                             bench_out);
        }
    } catch (const std::invalid_argument& e) {
        die(kExitUsage, e.what());
    } catch (const std::exception& e) {
        die(kExitInternal, e.what());
    }
    return kExitUsage;
}
