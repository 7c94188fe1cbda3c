#include "pushsim/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace pushsim {

namespace {

// Scratch bitmask over vertex ids.
class Mask {
public:
    Mask(std::uint32_t n, std::span<const Vertex> vs) : bits_((n + 63) / 64, 0) {
        for (Vertex v : vs) bits_[v >> 6] |= 1ULL << (v & 63);
    }
    bool test(Vertex v) const { return (bits_[v >> 6] >> (v & 63)) & 1; }

private:
    std::vector<std::uint64_t> bits_;
};

void require_in_range(const VertexSet& s, std::uint32_t n, const char* what) {
    if (s.id_bound() > n)
        throw std::invalid_argument(std::string(what) + ": vertex id out of range");
}

void sort_rows(std::vector<Vertex>& ends, std::uint32_t n, std::uint32_t d) {
    for (std::uint32_t v = 0; v < n; ++v)
        std::sort(ends.begin() + std::size_t(v) * d, ends.begin() + std::size_t(v + 1) * d);
}

bool compute_simple(const std::vector<Vertex>& ends, std::uint32_t n, std::uint32_t d) {
    for (std::uint32_t v = 0; v < n; ++v) {
        const Vertex* row = ends.data() + std::size_t(v) * d;
        for (std::uint32_t k = 0; k < d; ++k) {
            if (row[k] == v) return false;                 // loop
            if (k > 0 && row[k] == row[k - 1]) return false;  // parallel edge
        }
    }
    return true;
}

void check_symmetry(const std::vector<Vertex>& ends, std::uint32_t n, std::uint32_t d) {
    // Multiset symmetry: multiplicity of u in row v equals multiplicity of v
    // in row u. With sorted rows, count directed occurrences both ways.
    for (std::uint32_t v = 0; v < n; ++v) {
        const Vertex* row = ends.data() + std::size_t(v) * d;
        std::uint32_t k = 0;
        while (k < d) {
            Vertex u = row[k];
            std::uint32_t mult = 1;
            while (k + mult < d && row[k + mult] == u) ++mult;
            if (u >= n) throw std::invalid_argument("graph: end target out of range");
            if (u != v) {
                const Vertex* urow = ends.data() + std::size_t(u) * d;
                auto [lo, hi] = std::equal_range(urow, urow + d, v);
                if (std::uint32_t(hi - lo) != mult)
                    throw std::invalid_argument("graph: asymmetric end table");
            } else if (mult % 2 != 0) {
                throw std::invalid_argument("graph: odd self-end count (half a loop)");
            }
            k += mult;
        }
    }
}

}  // namespace

Graph Graph::from_edges(std::uint32_t n,
                        const std::vector<std::pair<Vertex, Vertex>>& edges) {
    if (n == 0) throw std::invalid_argument("graph: n must be positive");
    std::vector<std::uint32_t> deg(n, 0);
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw std::invalid_argument("graph: edge endpoint out of range");
        ++deg[u];
        ++deg[v];
    }
    const std::uint32_t d = deg.empty() ? 0 : deg[0];
    for (std::uint32_t v = 0; v < n; ++v)
        if (deg[v] != d) throw std::invalid_argument("graph: not regular");
    if (d == 0) throw std::invalid_argument("graph: degree must be at least 1");

    std::vector<Vertex> ends(std::size_t(n) * d);
    std::vector<std::uint32_t> fill(n, 0);
    for (auto [u, v] : edges) {
        ends[std::size_t(u) * d + fill[u]++] = v;
        ends[std::size_t(v) * d + fill[v]++] = u;  // u == v lands twice: loop = two ends
    }
    sort_rows(ends, n, d);
    bool simple = compute_simple(ends, n, d);
    return Graph(n, d, std::move(ends), simple);
}

Graph Graph::from_ends(std::uint32_t n, std::uint32_t d, std::vector<Vertex> ends) {
    if (n == 0 || d == 0) throw std::invalid_argument("graph: empty dimensions");
    if (ends.size() != std::size_t(n) * d)
        throw std::invalid_argument("graph: end table size mismatch");
    sort_rows(ends, n, d);
    check_symmetry(ends, n, d);
    bool simple = compute_simple(ends, n, d);
    return Graph(n, d, std::move(ends), simple);
}

std::vector<Vertex> Graph::neighbors(Vertex v) const {
    std::vector<Vertex> out;
    out.reserve(d_);
    auto row = ends(v);
    for (std::uint32_t k = 0; k < d_; ++k) {
        if (row[k] == v) {
            out.push_back(v);  // loop: two sorted self-ends -> list once
            ++k;
        } else {
            out.push_back(row[k]);
        }
    }
    return out;
}

std::uint32_t Graph::loops_at(Vertex v) const {
    std::uint32_t self = 0;
    for (Vertex u : ends(v)) self += (u == v);
    return self / 2;
}

VertexSet::VertexSet(std::vector<Vertex> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
        throw std::invalid_argument("vertex set: duplicate id");
}

VertexSet VertexSet::range(Vertex lo, Vertex hi) {
    if (lo > hi) throw std::invalid_argument("vertex set: bad range");
    std::vector<Vertex> m(hi - lo);
    std::iota(m.begin(), m.end(), lo);
    return VertexSet(std::move(m));
}

bool VertexSet::contains(Vertex v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
}

VertexSet random_vertex_set(std::uint32_t n, std::uint32_t k, Rng& rng) {
    if (k > n) throw std::invalid_argument("vertex set: k > n");
    // Partial Fisher-Yates over the identity permutation.
    std::vector<Vertex> pool(n);
    std::iota(pool.begin(), pool.end(), 0u);
    for (std::uint32_t i = 0; i < k; ++i)
        std::swap(pool[i], pool[i + rng.below32(n - i)]);
    pool.resize(k);
    return VertexSet(std::move(pool));
}

std::uint64_t edges_within(const Graph& g, const VertexSet& s) {
    require_in_range(s, g.num_vertices(), "edges_within");
    Mask in(g.num_vertices(), s.members());
    std::uint64_t ends_inside = 0;
    for (Vertex v : s.members())
        for (Vertex u : g.ends(v)) ends_inside += in.test(u);
    return ends_inside / 2;  // every internal edge (loops included) owns two ends here
}

std::uint64_t edges_between(const Graph& g, const VertexSet& a, const VertexSet& b) {
    require_in_range(a, g.num_vertices(), "edges_between");
    require_in_range(b, g.num_vertices(), "edges_between");
    Mask in_b(g.num_vertices(), b.members());
    for (Vertex v : a.members())
        if (in_b.test(v)) throw std::invalid_argument("edges_between: sets overlap");
    std::uint64_t count = 0;
    for (Vertex v : a.members())
        for (Vertex u : g.ends(v)) count += in_b.test(u);
    return count;
}

BfsLayers bfs_layers(const Graph& g, Vertex root) {
    if (root >= g.num_vertices()) throw std::invalid_argument("bfs: root out of range");
    BfsLayers out;
    out.root = root;
    out.dist.assign(g.num_vertices(), BfsLayers::kUnreached);
    out.dist[root] = 0;
    std::vector<Vertex> frontier{root};
    out.layer_sizes.push_back(1);
    std::uint32_t depth = 0;
    while (!frontier.empty()) {
        std::vector<Vertex> next;
        ++depth;
        for (Vertex v : frontier)
            for (Vertex u : g.ends(v))
                if (out.dist[u] == BfsLayers::kUnreached) {
                    out.dist[u] = depth;
                    next.push_back(u);
                }
        if (!next.empty()) out.layer_sizes.push_back(std::uint32_t(next.size()));
        frontier = std::move(next);
    }
    return out;
}

std::uint64_t BfsLayers::reached() const {
    std::uint64_t total = 0;
    for (auto s : layer_sizes) total += s;
    return total;
}

bool BfsLayers::is_tree_up_to(const Graph& g, std::uint32_t depth) const {
    std::vector<Vertex> ball;
    for (Vertex v = 0; v < g.num_vertices(); ++v)
        if (dist[v] <= depth) ball.push_back(v);
    std::uint64_t e = edges_within(g, VertexSet(std::move(ball)));
    std::uint64_t count = 0;
    for (std::uint32_t i = 0; i <= depth && i < layer_sizes.size(); ++i)
        count += layer_sizes[i];
    return e + 1 == count;
}

Graph complete_graph(std::uint32_t n) {
    if (n < 2) throw std::invalid_argument("complete graph needs n >= 2");
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(std::size_t(n) * (n - 1) / 2);
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

Graph cycle_graph(std::uint32_t n) {
    if (n < 3) throw std::invalid_argument("cycle graph needs n >= 3");
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(n);
    for (Vertex v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
    return Graph::from_edges(n, edges);
}

Graph petersen_graph() {
    // Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5.
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex i = 0; i < 5; ++i) {
        edges.emplace_back(i, (i + 1) % 5);
        edges.emplace_back(5 + i, 5 + (i + 2) % 5);
        edges.emplace_back(i, i + 5);
    }
    return Graph::from_edges(10, edges);
}

}  // namespace pushsim
