#include "hyperbayes/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hyperbayes {

namespace {

void append_edge_line(std::string& out, const Hyperedge& edge, std::uint32_t mult) {
    const auto& vs = edge.vertices();
    for (std::size_t k = 0; k < vs.size(); ++k) {
        if (k) out += ' ';
        out += std::to_string(vs[k]);
    }
    if (mult > 1) {
        out += '*';
        out += std::to_string(mult);
    }
    out += '\n';
}

struct LineScanner {
    const std::string& text;
    const std::string& source;
    std::size_t pos = 0;
    std::size_t line_no = 0;

    // Returns false at end of input. Comment ('%') and blank lines are skipped.
    bool next(std::string& out) {
        while (pos < text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string::npos) end = text.size();
            std::string line = text.substr(pos, end - pos);
            pos = end + 1;
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::size_t first = line.find_first_not_of(" \t");
            if (first == std::string::npos) continue;
            if (line[first] == '%') continue;
            out = std::move(line);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(source, line_no, message);
    }
};

std::uint64_t parse_uint(LineScanner& sc, const std::string& token, std::uint64_t max) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        sc.fail("expected a non-negative integer, got '" + token + "'");
    }
    if (value > max) sc.fail("value " + token + " out of range");
    return value;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

std::uint32_t parse_header(LineScanner& sc) {
    std::string line;
    if (!sc.next(line)) sc.fail("missing '#vertices N' header");
    auto tokens = split_ws(line);
    if (tokens.size() != 2 || tokens[0] != "#vertices") {
        sc.fail("expected '#vertices N' header, got '" + line + "'");
    }
    return static_cast<std::uint32_t>(parse_uint(sc, tokens[1], 0xffffffffu));
}

}  // namespace

std::string to_hg_string(const Hypergraph& h) {
    std::string out = "#vertices " + std::to_string(h.num_vertices()) + "\n";
    for (const auto& [edge, mult] : h.edges()) append_edge_line(out, edge, mult);
    return out;
}

std::string to_pg_string(const PairwiseGraph& g) {
    std::string out = "#vertices " + std::to_string(g.num_vertices()) + "\n";
    for (PairKey k : g.pairs()) {
        out += std::to_string(pair_first(k));
        out += ' ';
        out += std::to_string(pair_second(k));
        out += '\n';
    }
    return out;
}

Hypergraph parse_hg(const std::string& text, const std::string& source) {
    LineScanner sc{text, source};
    Hypergraph h(parse_header(sc));
    std::string line;
    while (sc.next(line)) {
        std::uint32_t mult = 1;
        std::size_t star = line.find('*');
        if (star != std::string::npos) {
            std::string mstr = line.substr(star + 1);
            if (mstr.empty()) sc.fail("empty multiplicity suffix");
            mult = static_cast<std::uint32_t>(parse_uint(sc, mstr, 0xffffffffu));
            if (mult < 2) sc.fail("multiplicity suffix must be > 1");
            line.resize(star);
        }
        auto tokens = split_ws(line);
        if (tokens.size() < 2) sc.fail("hyperedge needs at least 2 vertices");
        std::vector<VertexId> ids;
        ids.reserve(tokens.size());
        for (const auto& tok : tokens) {
            std::uint64_t v = parse_uint(sc, tok, 0xffffffffu);
            if (v >= h.num_vertices()) sc.fail("vertex id " + tok + " >= vertex count");
            ids.push_back(static_cast<VertexId>(v));
        }
        try {
            h.add_edge(Hyperedge(std::move(ids)), mult);
        } catch (const std::invalid_argument& e) {
            sc.fail(e.what());
        }
    }
    return h;
}

PairwiseGraph parse_pg(const std::string& text, const std::string& source) {
    LineScanner sc{text, source};
    PairwiseGraph g(parse_header(sc));
    std::string line;
    while (sc.next(line)) {
        auto tokens = split_ws(line);
        if (tokens.size() != 2) sc.fail("pairwise edge needs exactly 2 vertices");
        std::uint64_t a = parse_uint(sc, tokens[0], 0xffffffffu);
        std::uint64_t b = parse_uint(sc, tokens[1], 0xffffffffu);
        if (a >= g.num_vertices() || b >= g.num_vertices()) sc.fail("vertex id >= vertex count");
        if (a == b) sc.fail("self loop");
        if (g.has_edge(static_cast<VertexId>(a), static_cast<VertexId>(b))) {
            sc.fail("duplicate pair");
        }
        g.add_edge(static_cast<VertexId>(a), static_cast<VertexId>(b));
    }
    return g;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

Hypergraph load_hg(const std::string& path) { return parse_hg(read_file(path), path); }
PairwiseGraph load_pg(const std::string& path) { return parse_pg(read_file(path), path); }

namespace {
std::string with_comment(std::string serialized, const std::string& comment) {
    if (comment.empty()) return serialized;
    std::size_t header_end = serialized.find('\n');
    serialized.insert(header_end + 1, "% " + comment + "\n");
    return serialized;
}
}  // namespace

void save_hg(const Hypergraph& h, const std::string& path, const std::string& comment) {
    write_file(path, with_comment(to_hg_string(h), comment));
}

void save_pg(const PairwiseGraph& g, const std::string& path, const std::string& comment) {
    write_file(path, with_comment(to_pg_string(g), comment));
}

}  // namespace hyperbayes
