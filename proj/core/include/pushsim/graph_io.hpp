#pragma once

#include <string>

#include "pushsim/graph.hpp"

namespace pushsim {

// Adjacency text, one line per vertex: "v: u1 u2 ... ". Ids are 1-based and
// each loop is listed once.
std::string to_adjacency_text(const Graph& g);
Graph from_adjacency_text(const std::string& text);

// Edge list CSV, one undirected edge per row as "u,v" with u <= v, 1-based,
// loops once, parallel edges repeated. Rows are sorted.
std::string to_edge_csv(const Graph& g);
Graph from_edge_csv(const std::string& text);

// File helpers; format picked by extension (.adj / .csv).
void save_graph(const Graph& g, const std::string& path);
Graph load_graph(const std::string& path);

}  // namespace pushsim
