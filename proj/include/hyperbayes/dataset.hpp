#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hyperbayes/hypergraph.hpp"

namespace hyperbayes {

/// Bijective entity-string <-> dense-id mapping, ids assigned in first
/// appearance order.
class EntityDictionary {
public:
    VertexId intern(const std::string& name);
    const std::string& name(VertexId id) const;
    bool has(const std::string& name) const;
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::map<std::string, VertexId> ids_;
    std::vector<std::string> names_;
};

struct IngestReport {
    std::uint64_t facts_read = 0;
    std::uint64_t skipped_facts = 0;        // fewer than 2 distinct entities
    std::uint64_t hyperedges_distinct = 0;
    std::uint64_t hyperedges_total = 0;     // multiplicity-weighted
    std::uint64_t entities = 0;
    std::map<std::uint32_t, std::uint64_t> size_histogram;  // distinct edges per size

    std::string to_json() const;
};

enum class DatasetFormat { NaryTsv, SimplexList, Hg };

/// Parses NaryTsv ("relation \t e1 \t ... \t ek"; label dropped, entities
/// de-duplicated, facts below 2 distinct entities skipped and counted,
/// duplicate hyperedges accumulate multiplicity), SimplexList (space-separated
/// entity list per line) or the native hg format. Throws ParseError /
/// std::runtime_error on malformed or empty input.
struct IngestResult {
    Hypergraph hypergraph;
    EntityDictionary dictionary;
    IngestReport report;
};
IngestResult ingest(const std::string& path, DatasetFormat format);
IngestResult ingest_text(const std::string& text, DatasetFormat format,
                         const std::string& source = "<string>");

/// Uniform sample of distinct hyperedges without replacement (multiplicities
/// kept); surviving vertices are re-densified in ascending original order.
/// Throws std::invalid_argument when max_edges is 0.
Hypergraph subsample(const Hypergraph& h, std::size_t max_edges, std::uint64_t seed);

}  // namespace hyperbayes
