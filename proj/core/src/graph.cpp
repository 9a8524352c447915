#include "dpllstat/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "dpllstat/cnf.hpp"  // ParseError
#include "dpllstat/rng.hpp"

namespace dpllstat {

std::vector<std::vector<int>> Graph::adjacency() const {
  std::vector<std::vector<int>> adj(num_vertices + 1);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  return adj;
}

void Graph::validate() const {
  if (num_vertices <= 0) throw std::invalid_argument("num_vertices must be positive");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [u, v] = edges[i];
    if (u < 1 || v < 1 || u > num_vertices || v > num_vertices)
      throw std::invalid_argument("vertex out of range");
    if (u == v) throw std::invalid_argument("self-loop");
    if (u > v) throw std::invalid_argument("edge not stored as (min,max)");
    if (i > 0 && edges[i - 1] == edges[i]) throw std::invalid_argument("duplicate edge");
  }
}

Graph gen_gnp(int num_vertices, double c, std::uint64_t seed) {
  if (num_vertices <= 0) throw std::invalid_argument("gen_gnp: N must be positive");
  if (c < 0.0 || c > static_cast<double>(num_vertices))
    throw std::invalid_argument("gen_gnp: need 0 <= c <= N (p = c/N is a probability)");
  const double p = c / static_cast<double>(num_vertices);
  Rng rng(seed);
  Graph g;
  g.num_vertices = num_vertices;
  for (int u = 1; u <= num_vertices; ++u)
    for (int v = u + 1; v <= num_vertices; ++v)
      if (rng.bernoulli(p)) g.edges.emplace_back(u, v);
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

Graph parse_edges(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  Graph g;
  int declared_edges = -1;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") continue;
    if (tok == "p") {
      std::string fmt;
      if (!(ls >> fmt) || fmt != "col")
        throw ParseError(lineno, "malformed header, expected 'p col <vertices> <edges>'");
      if (!(ls >> g.num_vertices >> declared_edges) || g.num_vertices <= 0 || declared_edges < 0)
        throw ParseError(lineno, "malformed header counts");
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(lineno, "edge before 'p col' header");
    int u, v;
    std::istringstream es(line);
    if (!(es >> u >> v)) throw ParseError(lineno, "expected 'u v'");
    std::string rest;
    if (es >> rest) throw ParseError(lineno, "trailing token on edge line");
    if (u < 1 || v < 1 || u > g.num_vertices || v > g.num_vertices)
      throw ParseError(lineno, "vertex out of range");
    if (u == v) throw ParseError(lineno, "self-loop");
    g.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  if (!have_header) throw ParseError(lineno, "missing 'p col' header");
  if (g.num_edges() != declared_edges)
    throw ParseError(lineno, "edge count differs from header");
  std::sort(g.edges.begin(), g.edges.end());
  for (std::size_t i = 1; i < g.edges.size(); ++i)
    if (g.edges[i - 1] == g.edges[i]) throw ParseError(lineno, "duplicate edge");
  g.validate();
  return g;
}

std::string emit_edges(const Graph& g) {
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "p col %d %d\n", g.num_vertices, g.num_edges());
  out += buf;
  for (auto [u, v] : g.edges) {
    std::snprintf(buf, sizeof buf, "%d %d\n", u, v);
    out += buf;
  }
  return out;
}

}  // namespace dpllstat
