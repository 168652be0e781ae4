#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace uniblock {

/// Simple undirected graph on 0-based contiguous vertices. Immutable after
/// construction: adjacency is stored CSR-style with each neighbour list
/// sorted ascending. Construction rejects self-loops, parallel edges and
/// out-of-range endpoints.
class Graph {
public:
  Graph() = default;
  Graph(int vertex_count, const std::vector<std::pair<int, int>>& edges);

  int vertex_count() const { return n_; }
  std::size_t edge_count() const { return flat_.size() / 2; }

  int degree(int v) const { return static_cast<int>(off_[v + 1] - off_[v]); }

  std::span<const int> neighbors(int v) const {
    return {flat_.data() + off_[v], flat_.data() + off_[v + 1]};
  }

  bool has_edge(int u, int v) const;

  /// All edges as (u, v) with u < v, sorted lexicographically.
  std::vector<std::pair<int, int>> edges() const;

  bool connected() const;

private:
  int n_ = 0;
  std::vector<int> flat_;
  std::vector<std::size_t> off_ = {0};
};

int max_degree(const Graph& g);

} // namespace uniblock
