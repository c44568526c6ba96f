#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "alaam/attributes.hpp"
#include "alaam/graph.hpp"

namespace alaam {

struct GraphReadOptions {
  bool one_based = false;   // node ids start at 1 in the file
  bool undirected = false;  // each line adds both arc directions
  int expected_n = -1;      // enforce node count when >= 0
  // Receives non-fatal messages (duplicate arcs).  May be empty.
  std::function<void(const std::string&)> warn;
};

// Reads a whitespace-separated arc list: one "i j" pair per line, '#'
// comments, blank lines ignored.  An optional first data line "n=<N>" fixes
// the node count; otherwise it is the largest id + 1.  Duplicate arcs are
// collapsed with a warning; self-loops and out-of-range ids are errors.
DirectedGraph load_graph(const std::filesystem::path& path,
                         const GraphReadOptions& options = {});

// Writes the "n=<N>" header followed by arcs in lexicographic order,
// 0-based.  load_graph(write_graph(g)) reproduces the arc set.
void write_graph(const std::filesystem::path& path, const DirectedGraph& g);

struct AttributeReadOptions {
  std::string outcome_column = "y";
  int expected_n = -1;  // enforce row count when >= 0
};

// Reads a comma-separated table with a header row.  The outcome column must
// contain 0, 1, or NA (missing); every other column is a numeric covariate.
// Rows are node ids in order.
AttributeData load_attributes(const std::filesystem::path& path,
                              const AttributeReadOptions& options = {});

// Reads one node id per line ('#' comments allowed).
std::vector<int> load_node_list(const std::filesystem::path& path,
                                bool one_based = false);

// Builds a clamp mask from a node list.  Clamping a missing outcome or an
// out-of-range node is an error, as is clamping every node.
ClampMask clamp_from_nodes(const std::vector<int>& nodes,
                           const AttributeData& data);

// Graph and attribute table must agree on the node count.
void require_same_node_count(const DirectedGraph& g, const AttributeData& data);

}  // namespace alaam
