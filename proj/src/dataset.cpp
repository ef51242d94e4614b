#include "hyperbayes/dataset.hpp"

#include <algorithm>
#include <sstream>

#include "hyperbayes/io.hpp"
#include "hyperbayes/rng.hpp"

#include <json.hpp>

namespace hyperbayes {

VertexId EntityDictionary::intern(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    VertexId id = static_cast<VertexId>(names_.size());
    ids_.emplace(name, id);
    names_.push_back(name);
    return id;
}

const std::string& EntityDictionary::name(VertexId id) const {
    if (id >= names_.size()) throw std::out_of_range("entity id out of range");
    return names_[id];
}

bool EntityDictionary::has(const std::string& name) const { return ids_.count(name) != 0; }

std::string IngestReport::to_json() const {
    nlohmann::json j;
    j["facts_read"] = facts_read;
    j["skipped_facts"] = skipped_facts;
    j["hyperedges_distinct"] = hyperedges_distinct;
    j["hyperedges_total"] = hyperedges_total;
    j["entities"] = entities;
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [size, count] : size_histogram) hist[std::to_string(size)] = count;
    j["size_histogram"] = hist;
    return j.dump(2);
}

namespace {

struct RawFact {
    std::vector<std::string> entities;
};

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    return out;
}

IngestResult build(const std::vector<RawFact>& facts, std::uint64_t lines_read,
                   std::uint64_t pre_skipped, const std::string& source) {
    IngestResult result;
    result.report.facts_read = lines_read;
    result.report.skipped_facts = pre_skipped;

    // First pass assigns ids in appearance order, second pass adds edges once
    // the entity universe (hence num_vertices) is known.
    std::vector<std::vector<std::string>> kept;
    for (const RawFact& fact : facts) {
        std::vector<std::string> distinct;
        for (const std::string& e : fact.entities) {
            if (std::find(distinct.begin(), distinct.end(), e) == distinct.end()) {
                distinct.push_back(e);
            }
        }
        if (distinct.size() < 2) {
            ++result.report.skipped_facts;
            continue;
        }
        for (const std::string& e : distinct) result.dictionary.intern(e);
        kept.push_back(std::move(distinct));
    }
    if (result.dictionary.size() == 0) {
        throw ParseError(source, lines_read, "empty dataset");
    }

    result.hypergraph = Hypergraph(static_cast<std::uint32_t>(result.dictionary.size()));
    for (const auto& names : kept) {
        std::vector<VertexId> ids;
        ids.reserve(names.size());
        for (const std::string& e : names) ids.push_back(result.dictionary.intern(e));
        result.hypergraph.add_edge(Hyperedge(std::move(ids)));
    }

    result.report.entities = result.dictionary.size();
    result.report.hyperedges_distinct = result.hypergraph.distinct_edge_count();
    result.report.hyperedges_total = result.hypergraph.total_edge_count();
    for (const auto& [edge, mult] : result.hypergraph.edges()) {
        ++result.report.size_histogram[static_cast<std::uint32_t>(edge.size())];
    }
    return result;
}

}  // namespace

IngestResult ingest_text(const std::string& text, DatasetFormat format,
                         const std::string& source) {
    if (format == DatasetFormat::Hg) {
        Hypergraph h = parse_hg(text, source);
        IngestResult result;
        result.hypergraph = h;
        for (std::uint32_t v = 0; v < h.num_vertices(); ++v) {
            result.dictionary.intern(std::to_string(v));
        }
        result.report.facts_read = h.distinct_edge_count();
        result.report.entities = h.num_vertices();
        result.report.hyperedges_distinct = h.distinct_edge_count();
        result.report.hyperedges_total = h.total_edge_count();
        for (const auto& [edge, mult] : h.edges()) {
            ++result.report.size_histogram[static_cast<std::uint32_t>(edge.size())];
        }
        if (h.distinct_edge_count() == 0) {
            throw ParseError(source, 1, "empty dataset");
        }
        return result;
    }

    std::vector<RawFact> facts;
    std::uint64_t lines_read = 0;
    std::uint64_t skipped = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '%') continue;
        ++lines_read;
        RawFact fact;
        if (format == DatasetFormat::NaryTsv) {
            auto fields = split(line, '\t');
            if (fields.size() < 2) {
                ++skipped;
                continue;
            }
            fact.entities.assign(fields.begin() + 1, fields.end());  // drop the relation label
        } else {
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok) fact.entities.push_back(tok);
        }
        facts.push_back(std::move(fact));
    }
    return build(facts, lines_read, skipped, source);
}

IngestResult ingest(const std::string& path, DatasetFormat format) {
    return ingest_text(read_file(path), format, path);
}

Hypergraph subsample(const Hypergraph& h, std::size_t max_edges, std::uint64_t seed) {
    if (max_edges == 0) throw std::invalid_argument("max_edges must be positive");
    std::vector<const std::pair<const Hyperedge, std::uint32_t>*> entries;
    entries.reserve(h.distinct_edge_count());
    for (const auto& entry : h.edges()) entries.push_back(&entry);

    if (entries.size() > max_edges) {
        Rng rng(seed);
        // Partial Fisher-Yates: uniform sample without replacement.
        for (std::size_t i = 0; i < max_edges; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(entries.size() - i));
            std::swap(entries[i], entries[j]);
        }
        entries.resize(max_edges);
    }

    std::set<VertexId> used;
    for (const auto* entry : entries) {
        for (VertexId v : entry->first.vertices()) used.insert(v);
    }
    std::map<VertexId, VertexId> remap;
    VertexId next = 0;
    for (VertexId v : used) remap[v] = next++;

    Hypergraph out(next);
    for (const auto* entry : entries) {
        std::vector<VertexId> ids;
        ids.reserve(entry->first.size());
        for (VertexId v : entry->first.vertices()) ids.push_back(remap[v]);
        out.add_edge(Hyperedge(std::move(ids)), entry->second);
    }
    return out;
}

}  // namespace hyperbayes
