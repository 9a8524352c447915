#include "dpllstat/residual.hpp"

#include <bit>
#include <stdexcept>

namespace dpllstat {

SatResidual reduce(const CnfInstance& f, const SatAssignment& a) {
  std::vector<std::int8_t> value(f.num_vars + 1, 0);
  for (auto [var, val] : a.steps) {
    if (var < 1 || var > f.num_vars) throw std::invalid_argument("reduce: variable out of range");
    if (value[var] != 0) throw std::invalid_argument("reduce: variable assigned twice");
    value[var] = val ? 1 : -1;
  }
  SatResidual r;
  r.unassigned = f.num_vars - a.length();
  for (const auto& cl : f.clauses) {
    std::vector<int> rest;
    bool sat = false;
    for (int lit : cl) {
      std::int8_t v = value[std::abs(lit)];
      if (v == 0) {
        rest.push_back(lit);
      } else if ((v > 0) == (lit > 0)) {
        sat = true;
        break;
      }
    }
    if (sat) continue;
    // counts track lengths 0..3; longer residual clauses (k>3 inputs) land in C3.
    ++r.counts[rest.size() < 3 ? rest.size() : 3];
    r.clauses.push_back(std::move(rest));
  }
  return r;
}

ColResidual reduce(const Graph& g, const ColAssignment& a) {
  std::vector<int> color(g.num_vertices + 1, -1);
  for (auto [v, c] : a.steps) {
    if (v < 1 || v > g.num_vertices) throw std::invalid_argument("reduce: vertex out of range");
    if (c < 0 || c > 2) throw std::invalid_argument("reduce: color out of range");
    if (color[v] != -1) throw std::invalid_argument("reduce: vertex colored twice");
    color[v] = c;
  }
  ColResidual r;
  r.unassigned = g.num_vertices - a.length();
  r.color_mask.assign(g.num_vertices + 1, 0);
  for (int v = 1; v <= g.num_vertices; ++v)
    if (color[v] == -1) r.color_mask[v] = 0b111;
  for (auto [u, v] : g.edges) {
    if (color[u] != -1 && color[v] == -1) r.color_mask[v] &= ~(1u << color[u]);
    if (color[v] != -1 && color[u] == -1) r.color_mask[u] &= ~(1u << color[v]);
  }
  for (int v = 1; v <= g.num_vertices; ++v)
    if (color[v] == -1) ++r.counts[std::popcount(r.color_mask[v])];
  return r;
}

}  // namespace dpllstat
