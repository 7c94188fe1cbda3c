#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pushsim/common.hpp"
#include "pushsim/rng.hpp"

namespace pushsim {

// Undirected d-regular multigraph on vertices 0..n-1 (ids are 1-based only in
// files and on the CLI). Storage is a flat edge-end table: row v holds the
// targets of v's d edge-ends in sorted order. A loop occupies two ends of its
// vertex, so rows always have exactly d entries and the handshake identity
// sum(deg) = n*d = 2*edges is structural rather than checked.
class Graph {
public:
    Graph() = default;

    // Builds from an undirected edge list (loops as (v,v), parallel edges
    // repeated). Throws std::invalid_argument unless the result is d-regular
    // with uniform d >= 1.
    static Graph from_edges(std::uint32_t n,
                            const std::vector<std::pair<Vertex, Vertex>>& edges);

    // Adopts a prebuilt end table (size n*d, rows need not be sorted yet).
    // Validates multiset symmetry.
    static Graph from_ends(std::uint32_t n, std::uint32_t d, std::vector<Vertex> ends);

    std::uint32_t num_vertices() const { return n_; }
    std::uint32_t degree() const { return d_; }
    std::uint64_t num_edges() const { return std::uint64_t(n_) * d_ / 2; }
    bool is_simple() const { return simple_; }

    std::span<const Vertex> ends(Vertex v) const {
        return {ends_.data() + std::size_t(v) * d_, d_};
    }

    // Neighbor multiset with each loop listed once (the file convention).
    std::vector<Vertex> neighbors(Vertex v) const;

    std::uint32_t loops_at(Vertex v) const;

private:
    Graph(std::uint32_t n, std::uint32_t d, std::vector<Vertex> ends, bool simple)
        : n_(n), d_(d), simple_(simple), ends_(std::move(ends)) {}

    std::uint32_t n_ = 0;
    std::uint32_t d_ = 0;
    bool simple_ = false;
    std::vector<Vertex> ends_;
};

// Set of distinct vertex ids, kept sorted.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(std::vector<Vertex> members);  // sorts, rejects duplicates

    static VertexSet range(Vertex lo, Vertex hi);  // [lo, hi)

    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    std::span<const Vertex> members() const { return members_; }
    bool contains(Vertex v) const;

    // Largest id + 1, 0 when empty; used for bounds validation.
    Vertex id_bound() const { return members_.empty() ? 0 : members_.back() + 1; }

private:
    std::vector<Vertex> members_;
};

// Uniform k-subset of {0..n-1}.
VertexSet random_vertex_set(std::uint32_t n, std::uint32_t k, Rng& rng);

// Edges with both ends in s. Loops count once, parallel edges with
// multiplicity.
std::uint64_t edges_within(const Graph& g, const VertexSet& s);

// Edges with one end in a and the other in b. Requires a, b disjoint.
std::uint64_t edges_between(const Graph& g, const VertexSet& a, const VertexSet& b);

struct BfsLayers {
    std::vector<std::uint32_t> layer_sizes;  // layer_sizes[i] = |{v : dist(v) = i}|
    std::vector<std::uint32_t> dist;         // kUnreached where not reachable
    Vertex root = 0;

    static constexpr std::uint32_t kUnreached = 0xffffffffu;

    std::uint64_t reached() const;

    // True when the subgraph induced by vertices at distance <= depth has
    // exactly |V_depth| - 1 edges (multiplicities and loops included).
    bool is_tree_up_to(const Graph& g, std::uint32_t depth) const;
};

BfsLayers bfs_layers(const Graph& g, Vertex root);

// Fixture builders.
Graph complete_graph(std::uint32_t n);
Graph cycle_graph(std::uint32_t n);
Graph petersen_graph();

}  // namespace pushsim
