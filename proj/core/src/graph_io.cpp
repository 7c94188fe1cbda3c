#include "pushsim/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pushsim {

namespace {

std::uint64_t parse_id(const std::string& tok, std::uint64_t line_no) {
    std::size_t pos = 0;
    std::uint64_t v;
    try {
        v = std::stoull(tok, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("graph parse: bad id '" + tok + "' on line " +
                                    std::to_string(line_no));
    }
    if (pos != tok.size() || v == 0)
        throw std::invalid_argument("graph parse: bad id '" + tok + "' on line " +
                                    std::to_string(line_no));
    return v;  // 1-based in files
}

}  // namespace

std::string to_adjacency_text(const Graph& g) {
    std::ostringstream out;
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        out << (v + 1) << ':';
        for (Vertex u : g.neighbors(v)) out << ' ' << (u + 1);
        out << '\n';
    }
    return out.str();
}

Graph from_adjacency_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<Vertex>> rows;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("graph parse: missing ':' on line " +
                                        std::to_string(line_no));
        std::uint64_t v = parse_id(line.substr(0, colon), line_no);
        if (v != rows.size() + 1)
            throw std::invalid_argument("graph parse: rows must be 1..n in order");
        std::istringstream rest(line.substr(colon + 1));
        std::vector<Vertex> row;
        std::string tok;
        while (rest >> tok) row.push_back(Vertex(parse_id(tok, line_no) - 1));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("graph parse: empty input");
    const std::uint32_t n = std::uint32_t(rows.size());

    // A self entry stands for a loop and owns two ends.
    std::vector<Vertex> ends;
    std::uint32_t d = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
        std::uint32_t row_ends = 0;
        for (Vertex u : rows[v]) {
            if (u >= n)
                throw std::invalid_argument("graph parse: id out of range in row " +
                                            std::to_string(v + 1));
            row_ends += (u == v) ? 2 : 1;
        }
        if (v == 0) d = row_ends;
        else if (row_ends != d)
            throw std::invalid_argument("graph parse: not regular");
    }
    if (d == 0) throw std::invalid_argument("graph parse: zero degree");
    ends.reserve(std::size_t(n) * d);
    for (std::uint32_t v = 0; v < n; ++v)
        for (Vertex u : rows[v]) {
            ends.push_back(u);
            if (u == v) ends.push_back(u);
        }
    return Graph::from_ends(n, d, std::move(ends));
}

std::string to_edge_csv(const Graph& g) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(g.num_edges());
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        auto row = g.ends(v);
        for (std::uint32_t k = 0; k < g.degree(); ++k) {
            Vertex u = row[k];
            if (u > v) edges.emplace_back(v, u);
            else if (u == v && k % 2 == 0) {
                // Self-ends form one contiguous even-length run in the sorted
                // row, so every other position emits each loop exactly once.
                edges.emplace_back(v, v);
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    std::ostringstream out;
    for (auto [u, v] : edges) out << (u + 1) << ',' << (v + 1) << '\n';
    return out.str();
}

Graph from_edge_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::uint64_t max_id = 0;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("graph parse: missing ',' on line " +
                                        std::to_string(line_no));
        std::uint64_t u = parse_id(line.substr(0, comma), line_no);
        std::uint64_t v = parse_id(line.substr(comma + 1), line_no);
        max_id = std::max({max_id, u, v});
        edges.emplace_back(Vertex(u - 1), Vertex(v - 1));
    }
    if (edges.empty()) throw std::invalid_argument("graph parse: empty input");
    return Graph::from_edges(std::uint32_t(max_id), edges);
}

void save_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    if (path.ends_with(".adj")) out << to_adjacency_text(g);
    else out << to_edge_csv(g);
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (path.ends_with(".adj")) return from_adjacency_text(buf.str());
    return from_edge_csv(buf.str());
}

}  // namespace pushsim
