#include "alaam/graph.hpp"

#include <algorithm>

#include "alaam/errors.hpp"

namespace alaam {

namespace {
// Dense bit-matrix membership up to this many nodes, hash set beyond.
constexpr int kDenseLimit = 4096;
}  // namespace

DirectedGraph::DirectedGraph(int node_count) : n_(node_count) {
  if (node_count <= 0) throw DimensionError("graph needs at least one node");
  out_.resize(n_);
  in_.resize(n_);
  dense_ = n_ <= kDenseLimit;
  if (dense_) {
    const std::size_t cells = static_cast<std::size_t>(n_) * n_;
    bits_.assign((cells + 63) / 64, 0);
  }
}

DirectedGraph DirectedGraph::from_arcs(
    int node_count, const std::vector<std::pair<int, int>>& arcs) {
  DirectedGraph g(node_count);
  for (const auto& [i, j] : arcs) g.add_arc(i, j);
  return g;
}

void DirectedGraph::check_node(int i) const {
  if (i < 0 || i >= n_)
    throw DimensionError("node index " + std::to_string(i) +
                         " out of range for n=" + std::to_string(n_));
}

bool DirectedGraph::add_arc(int i, int j) {
  check_node(i);
  check_node(j);
  if (i == j)
    throw ParseError("self-loop " + std::to_string(i) + "->" +
                     std::to_string(j) + " is not allowed");
  if (has_arc(i, j)) return false;
  if (dense_) {
    const std::size_t cell = static_cast<std::size_t>(i) * n_ + j;
    bits_[cell >> 6] |= (std::uint64_t{1} << (cell & 63));
  } else {
    arc_set_.insert(static_cast<std::uint64_t>(i) << 32 |
                    static_cast<std::uint32_t>(j));
  }
  auto& o = out_[i];
  o.insert(std::lower_bound(o.begin(), o.end(), j), j);
  auto& in = in_[j];
  in.insert(std::lower_bound(in.begin(), in.end(), i), i);
  ++arc_count_;
  return true;
}

bool DirectedGraph::has_arc(int i, int j) const {
  check_node(i);
  check_node(j);
  if (dense_) {
    const std::size_t cell = static_cast<std::size_t>(i) * n_ + j;
    return (bits_[cell >> 6] >> (cell & 63)) & 1;
  }
  return arc_set_.count(static_cast<std::uint64_t>(i) << 32 |
                        static_cast<std::uint32_t>(j)) != 0;
}

std::span<const int> DirectedGraph::out_neighbors(int i) const {
  check_node(i);
  return out_[i];
}

std::span<const int> DirectedGraph::in_neighbors(int i) const {
  check_node(i);
  return in_[i];
}

int DirectedGraph::out_degree(int i) const {
  check_node(i);
  return static_cast<int>(out_[i].size());
}

int DirectedGraph::in_degree(int i) const {
  check_node(i);
  return static_cast<int>(in_[i].size());
}

std::vector<std::pair<int, int>> DirectedGraph::arcs() const {
  std::vector<std::pair<int, int>> result;
  result.reserve(arc_count_);
  for (int i = 0; i < n_; ++i)
    for (int j : out_[i]) result.emplace_back(i, j);
  return result;
}

}  // namespace alaam
