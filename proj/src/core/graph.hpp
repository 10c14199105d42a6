#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace spinhop {

// Undirected weighted graph, 0-based, edges stored with u < v.
struct Graph {
  struct Edge {
    int u = 0;
    int v = 0;
    long long weight = 1;
  };

  int n_nodes = 0;
  std::vector<Edge> edges;

  // Throws std::invalid_argument on self-loops, duplicates, or range errors.
  void validate() const;
  bool has_edge(int u, int v) const;
};

// Text format: header "n m", then m lines "i j w" with 1-based node indices.
// Blank lines and '#' comments are skipped. Throws ParseError with the
// offending line number.
Graph parse_biqmac(const std::string& text);
Graph load_graph_file(const std::string& path);

// Total weight of edges whose endpoints fall on different sides.
long long cut_value(const Graph& g, std::span<const uint8_t> partition);

// Sidecar of reference cut values: lines "instance_name value", '#' comments.
std::map<std::string, long long> parse_best_known(const std::string& text);
std::map<std::string, long long> load_best_known_file(const std::string& path);

}  // namespace spinhop
