#include "graph.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "errors.hpp"

namespace spinhop {

void Graph::validate() const {
  if (n_nodes < 1) throw std::invalid_argument("graph must have at least one node");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n_nodes || e.v < 0 || e.v >= n_nodes)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loops are not allowed");
    if (e.u > e.v) throw std::invalid_argument("edges must be stored with u < v");
    if (!seen.insert({e.u, e.v}).second)
      throw std::invalid_argument("duplicate edge");
  }
}

bool Graph::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  for (const Edge& e : edges)
    if (e.u == u && e.v == v) return true;
  return false;
}

Graph parse_biqmac(const std::string& text) {
  Graph g;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  long long m_declared = -1;
  bool header_seen = false;
  std::set<std::pair<int, int>> seen;

  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream row(line);
    if (!header_seen) {
      long long n = 0, m = 0;
      if (!(row >> n >> m) || n < 1 || m < 0)
        throw ParseError("expected header \"n m\"", line_no);
      std::string extra;
      if (row >> extra) throw ParseError("trailing tokens after header", line_no);
      g.n_nodes = static_cast<int>(n);
      m_declared = m;
      header_seen = true;
      continue;
    }

    long long i = 0, j = 0, w = 0;
    if (!(row >> i >> j >> w))
      throw ParseError("expected edge line \"i j w\"", line_no);
    std::string extra;
    if (row >> extra) throw ParseError("trailing tokens after edge", line_no);
    if (i < 1 || i > g.n_nodes || j < 1 || j > g.n_nodes)
      throw ParseError("edge endpoint out of range", line_no);
    if (i == j) throw ParseError("self-loop is not allowed", line_no);
    Graph::Edge e;
    e.u = static_cast<int>(std::min(i, j)) - 1;
    e.v = static_cast<int>(std::max(i, j)) - 1;
    e.weight = w;
    if (!seen.insert({e.u, e.v}).second)
      throw ParseError("duplicate edge", line_no);
    g.edges.push_back(e);
  }

  if (!header_seen) throw ParseError("empty graph file", line_no);
  if (m_declared != static_cast<long long>(g.edges.size()))
    throw ParseError("edge count does not match header", line_no);
  g.validate();
  return g;
}

Graph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_biqmac(buf.str());
}

long long cut_value(const Graph& g, std::span<const uint8_t> partition) {
  if (partition.size() != static_cast<size_t>(g.n_nodes))
    throw std::invalid_argument("partition size does not match node count");
  long long total = 0;
  for (const Graph::Edge& e : g.edges)
    if ((partition[e.u] != 0) != (partition[e.v] != 0)) total += e.weight;
  return total;
}

std::map<std::string, long long> parse_best_known(const std::string& text) {
  std::map<std::string, long long> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row(line);
    std::string name;
    long long value = 0;
    if (!(row >> name >> value))
      throw ParseError("expected \"instance_name value\"", line_no);
    out[name] = value;
  }
  return out;
}

std::map<std::string, long long> load_best_known_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open reference-value file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_best_known(buf.str());
}

}  // namespace spinhop
