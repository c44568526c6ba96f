#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

namespace alaam {

// Fixed-size simple directed graph over nodes 0..n-1.  Self-loops are
// rejected.  Arc membership is O(1); neighbor lists are kept sorted.
class DirectedGraph {
 public:
  explicit DirectedGraph(int node_count);

  static DirectedGraph from_arcs(int node_count,
                                 const std::vector<std::pair<int, int>>& arcs);

  int node_count() const { return n_; }
  int arc_count() const { return arc_count_; }

  // Adds i -> j.  Returns false if the arc already existed.
  bool add_arc(int i, int j);

  bool has_arc(int i, int j) const;

  std::span<const int> out_neighbors(int i) const;
  std::span<const int> in_neighbors(int i) const;

  int out_degree(int i) const;
  int in_degree(int i) const;

  // All arcs in lexicographic order.
  std::vector<std::pair<int, int>> arcs() const;

 private:
  void check_node(int i) const;

  int n_ = 0;
  int arc_count_ = 0;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  bool dense_ = false;
  std::vector<std::uint64_t> bits_;             // n*n bits when dense
  std::unordered_set<std::uint64_t> arc_set_;   // packed (i,j) otherwise
};

}  // namespace alaam
