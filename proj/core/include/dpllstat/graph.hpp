// Erdos-Renyi random graphs and edge-list text I/O.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dpllstat {

// Simple undirected graph on vertices 1..num_vertices. Edges are stored as
// (min,max) pairs sorted lexicographically; no self-loops, no duplicates.
struct Graph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;

  int num_edges() const { return static_cast<int>(edges.size()); }
  std::vector<std::vector<int>> adjacency() const;
  void validate() const;
};

// G(N, p = c/N): each of the N(N-1)/2 pairs is included independently with
// probability c/N. Requires 0 <= c <= N.
Graph gen_gnp(int num_vertices, double c, std::uint64_t seed);

// "p col N E" header followed by one "u v" pair per line.
Graph parse_edges(const std::string& text);
std::string emit_edges(const Graph& g);

}  // namespace dpllstat
