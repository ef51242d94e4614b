#pragma once

#include <stdexcept>
#include <string>

#include "hyperbayes/hypergraph.hpp"

namespace hyperbayes {

/// File-system failure (missing file, failed write).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Parse failure with a 1-based line number and the offending file (when known).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, std::size_t line, const std::string& message)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + message),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Text formats. Both start with a "#vertices N" header line; '%' lines are
// comments. A hypergraph line is "v1 v2 ... vk" with an optional "*m"
// multiplicity suffix (m > 1); a pairwise-graph line has exactly two ids.
// Serialization is canonical: edges in lexicographic order, one per line,
// '\n' terminators, no comments.

std::string to_hg_string(const Hypergraph& h);
std::string to_pg_string(const PairwiseGraph& g);

Hypergraph parse_hg(const std::string& text, const std::string& source = "<string>");
PairwiseGraph parse_pg(const std::string& text, const std::string& source = "<string>");

Hypergraph load_hg(const std::string& path);
PairwiseGraph load_pg(const std::string& path);

/// Writes the canonical serialization. A non-empty `comment` is emitted as a
/// '%' line directly after the header.
void save_hg(const Hypergraph& h, const std::string& path, const std::string& comment = "");
void save_pg(const PairwiseGraph& g, const std::string& path, const std::string& comment = "");

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hyperbayes
