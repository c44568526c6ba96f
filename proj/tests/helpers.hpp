#pragma once

#include <string>
#include <vector>

#include "alaam/attributes.hpp"
#include "alaam/graph.hpp"
#include "alaam/model.hpp"

#include "oracles.hpp"

namespace testutil {

inline alaam::DirectedGraph to_graph(const oracle::DenseGraph& g) {
  alaam::DirectedGraph out(g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (g.has(i, j)) out.add_arc(i, j);
  return out;
}

inline alaam::AttributeData make_data(
    const std::vector<std::uint8_t>& outcome,
    const std::vector<int>& missing_nodes = {}) {
  std::vector<std::uint8_t> miss(outcome.size(), 0);
  for (int i : missing_nodes) miss[static_cast<std::size_t>(i)] = 1;
  return alaam::AttributeData(outcome, miss);
}

inline alaam::ModelSpec spec_of(const std::vector<std::string>& names) {
  return alaam::ModelSpec::parse(names);
}

// Cycle graph 0 -> 1 -> ... -> n-1 -> 0, a fixed sparse test network.
inline alaam::DirectedGraph cycle_graph(int n) {
  alaam::DirectedGraph g(n);
  for (int i = 0; i < n; ++i) g.add_arc(i, (i + 1) % n);
  return g;
}

}  // namespace testutil
