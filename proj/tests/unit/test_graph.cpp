#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pushsim/graph.hpp"
#include "pushsim/graph_io.hpp"
#include "pushsim/rng.hpp"

using namespace pushsim;

namespace {

std::string fixture(const std::string& name) {
    return std::string(PUSHSIM_FIXTURES_DIR) + "/" + name;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("complete graph basics") {
    const Graph g = complete_graph(4);
    CHECK(g.num_vertices() == 4);
    CHECK(g.degree() == 3);
    CHECK(g.num_edges() == 6);
    CHECK(g.is_simple());
    CHECK(g.loops_at(0) == 0);
    CHECK(g.neighbors(0) == std::vector<Vertex>{1, 2, 3});
    CHECK(g.neighbors(2) == std::vector<Vertex>{0, 1, 3});
    CHECK_THROWS_AS(complete_graph(1), std::invalid_argument);
}

TEST_CASE("cycle and petersen structure") {
    const Graph c5 = cycle_graph(5);
    CHECK(c5.degree() == 2);
    CHECK(c5.num_edges() == 5);
    CHECK(c5.is_simple());
    CHECK(c5.neighbors(0) == std::vector<Vertex>{1, 4});
    CHECK_THROWS_AS(cycle_graph(2), std::invalid_argument);

    const Graph p = petersen_graph();
    CHECK(p.num_vertices() == 10);
    CHECK(p.degree() == 3);
    CHECK(p.num_edges() == 15);
    CHECK(p.is_simple());
    for (Vertex v = 0; v < 10; ++v) CHECK(p.loops_at(v) == 0);
}

TEST_CASE("bfs layers and local tree check") {
    const Graph p = petersen_graph();
    const BfsLayers layers = bfs_layers(p, 0);
    CHECK(layers.layer_sizes == std::vector<std::uint32_t>{1, 3, 6});
    CHECK(layers.reached() == 10);
    CHECK(layers.dist[0] == 0);
    // girth 5: the radius-1 ball is a tree, the radius-2 ball is the whole
    // graph and carries all 15 edges.
    CHECK(layers.is_tree_up_to(p, 1));
    CHECK_FALSE(layers.is_tree_up_to(p, 2));
    CHECK_THROWS_AS(bfs_layers(p, 10), std::invalid_argument);

    const Graph two_triangles = Graph::from_edges(
        6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    const BfsLayers part = bfs_layers(two_triangles, 0);
    CHECK(part.reached() == 3);
    CHECK(part.dist[3] == BfsLayers::kUnreached);
}

TEST_CASE("from_edges validates regularity and range") {
    CHECK_THROWS_AS(Graph::from_edges(3, {{0, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph::from_edges(2, {{0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(Graph::from_edges(0, {}), std::invalid_argument);
    const Graph tri = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(tri.degree() == 2);
    CHECK(tri.is_simple());
}

TEST_CASE("loops and parallel edges") {
    const Graph loop = Graph::from_edges(1, {{0, 0}});
    CHECK(loop.degree() == 2);
    CHECK(loop.num_edges() == 1);
    CHECK_FALSE(loop.is_simple());
    CHECK(loop.loops_at(0) == 1);
    CHECK(loop.neighbors(0) == std::vector<Vertex>{0});

    const Graph par = Graph::from_edges(2, {{0, 1}, {0, 1}});
    CHECK_FALSE(par.is_simple());
    CHECK(par.neighbors(0) == std::vector<Vertex>{1, 1});
    CHECK(par.loops_at(0) == 0);

    const Graph triple = Graph::from_edges(2, {{0, 1}, {0, 1}, {0, 1}});
    CHECK(triple.degree() == 3);
    CHECK(triple.num_edges() == 3);
}

TEST_CASE("from_ends validates symmetry") {
    const Graph tri = Graph::from_ends(3, 2, {1, 2, 0, 2, 0, 1});
    CHECK(tri.is_simple());
    CHECK(tri.num_edges() == 3);
    // two half-loops are not an edge
    CHECK_THROWS_AS(Graph::from_ends(2, 1, {0, 1}), std::invalid_argument);
    // claims 0-1 from one side only
    CHECK_THROWS_AS(Graph::from_ends(2, 1, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Graph::from_ends(2, 2, {1, 1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(Graph::from_ends(2, 1, {2, 0}), std::invalid_argument);
}

TEST_CASE("vertex sets") {
    const VertexSet s(std::vector<Vertex>{3, 1, 2});
    CHECK(s.size() == 3);
    CHECK(s.contains(2));
    CHECK_FALSE(s.contains(0));
    CHECK(s.id_bound() == 4);
    CHECK(std::is_sorted(s.members().begin(), s.members().end()));
    CHECK_THROWS_AS(VertexSet(std::vector<Vertex>{1, 1}), std::invalid_argument);

    const VertexSet r = VertexSet::range(2, 5);
    CHECK(r.size() == 3);
    CHECK(r.contains(4));
    CHECK_FALSE(r.contains(5));
    CHECK(VertexSet{}.id_bound() == 0);
    CHECK_THROWS_AS(VertexSet::range(5, 2), std::invalid_argument);
}

TEST_CASE("random vertex sets are uniform-ish and well formed") {
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        const VertexSet s = random_vertex_set(10, 4, rng);
        CHECK(s.size() == 4);
        CHECK(s.id_bound() <= 10);
    }
    CHECK(random_vertex_set(5, 5, rng).size() == 5);
    CHECK(random_vertex_set(5, 0, rng).empty());
    CHECK_THROWS_AS(random_vertex_set(5, 6, rng), std::invalid_argument);

    // every vertex should appear in roughly 2/5 of 4-of-10 draws
    std::vector<int> seen(10, 0);
    for (int i = 0; i < 5000; ++i) {
        const VertexSet draw = random_vertex_set(10, 4, rng);
        for (Vertex v : draw.members()) ++seen[v];
    }
    for (int c : seen) CHECK(std::abs(c - 2000) < 200);
}

TEST_CASE("edge counting within and between sets") {
    const Graph k4 = complete_graph(4);
    CHECK(edges_within(k4, VertexSet({0, 1, 2})) == 3);
    CHECK(edges_within(k4, VertexSet::range(0, 4)) == 6);
    CHECK(edges_within(k4, VertexSet({0})) == 0);
    CHECK(edges_between(k4, VertexSet({0, 1}), VertexSet({2, 3})) == 4);
    CHECK(edges_between(k4, VertexSet({0}), VertexSet({1})) == 1);
    CHECK_THROWS_AS(edges_between(k4, VertexSet({0}), VertexSet({0, 1})),
                    std::invalid_argument);
    CHECK_THROWS_AS(edges_within(k4, VertexSet({9})), std::invalid_argument);

    // loops count once, parallel edges with multiplicity
    const Graph loops = Graph::from_edges(2, {{0, 0}, {1, 1}});
    CHECK(edges_within(loops, VertexSet({0, 1})) == 2);
    CHECK(edges_within(loops, VertexSet({0})) == 1);
    CHECK(edges_between(loops, VertexSet({0}), VertexSet({1})) == 0);

    const Graph par = Graph::from_edges(2, {{0, 1}, {0, 1}});
    CHECK(edges_within(par, VertexSet({0, 1})) == 2);
    CHECK(edges_between(par, VertexSet({0}), VertexSet({1})) == 2);
}

TEST_CASE("adjacency text round trip") {
    const Graph p = petersen_graph();
    const std::string text = to_adjacency_text(p);
    const Graph back = from_adjacency_text(text);
    CHECK(to_edge_csv(back) == to_edge_csv(p));

    const Graph loop = Graph::from_edges(1, {{0, 0}});
    CHECK(to_adjacency_text(loop) == "1: 1\n");
    const Graph loop_back = from_adjacency_text("1: 1\n");
    CHECK(loop_back.degree() == 2);
    CHECK(loop_back.loops_at(0) == 1);

    CHECK_THROWS_AS(from_adjacency_text(""), std::invalid_argument);
    CHECK_THROWS_AS(from_adjacency_text("1 2 3\n"), std::invalid_argument);
    CHECK_THROWS_AS(from_adjacency_text("2: 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(from_adjacency_text("1: 2\n2: 1 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(from_adjacency_text("1: 0\n"), std::invalid_argument);
}

TEST_CASE("edge csv round trip") {
    const Graph tri = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(to_edge_csv(tri) == "1,2\n1,3\n2,3\n");
    CHECK(to_edge_csv(from_edge_csv("1,2\n1,3\n2,3\n")) == to_edge_csv(tri));
    // reversed endpoint order is accepted on read
    CHECK(to_edge_csv(from_edge_csv("2,1\n3,1\n3,2\n")) == to_edge_csv(tri));

    const Graph loop = Graph::from_edges(1, {{0, 0}});
    CHECK(to_edge_csv(loop) == "1,1\n");
    const Graph triple = Graph::from_edges(2, {{0, 1}, {0, 1}, {0, 1}});
    CHECK(to_edge_csv(triple) == "1,2\n1,2\n1,2\n");
    CHECK(to_edge_csv(from_edge_csv(to_edge_csv(triple))) == to_edge_csv(triple));

    CHECK_THROWS_AS(from_edge_csv(""), std::invalid_argument);
    CHECK_THROWS_AS(from_edge_csv("1 2\n"), std::invalid_argument);
    CHECK_THROWS_AS(from_edge_csv("0,1\n"), std::invalid_argument);
    CHECK_THROWS_AS(from_edge_csv("1,x\n"), std::invalid_argument);
}

TEST_CASE("save and load pick the format from the extension") {
    namespace fs = std::filesystem;
    const Graph p = petersen_graph();
    const fs::path dir = fs::temp_directory_path();
    const std::string adj = (dir / "pushsim_test_roundtrip.adj").string();
    const std::string csv = (dir / "pushsim_test_roundtrip.csv").string();
    save_graph(p, adj);
    save_graph(p, csv);
    CHECK(to_edge_csv(load_graph(adj)) == to_edge_csv(p));
    CHECK(to_edge_csv(load_graph(csv)) == to_edge_csv(p));
    std::remove(adj.c_str());
    std::remove(csv.c_str());
    CHECK_THROWS_AS(load_graph((dir / "pushsim_no_such_file.adj").string()),
                    std::runtime_error);
}

TEST_CASE("bundled fixtures parse to the expected graphs") {
    const Graph p = load_graph(fixture("petersen.adj"));
    CHECK(to_edge_csv(p) == to_edge_csv(petersen_graph()));
    const Graph k4 = load_graph(fixture("k4.csv"));
    CHECK(to_edge_csv(k4) == to_edge_csv(complete_graph(4)));
}

}  // TEST_SUITE
