#include "uniblock/graph.hpp"

#include <algorithm>
#include <string>

#include "uniblock/errors.hpp"

namespace uniblock {

Graph::Graph(int vertex_count, const std::vector<std::pair<int, int>>& edges) : n_(vertex_count) {
  if (vertex_count < 0) throw PreconditionError("graph: negative vertex count");

  std::vector<int> deg(n_, 0);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
      throw PreconditionError("graph: endpoint out of range: " + std::to_string(u) + " " +
                              std::to_string(v));
    if (u == v) throw PreconditionError("graph: self-loop at vertex " + std::to_string(u));
    ++deg[u];
    ++deg[v];
  }

  off_.assign(n_ + 1, 0);
  for (int v = 0; v < n_; ++v) off_[v + 1] = off_[v] + static_cast<std::size_t>(deg[v]);
  flat_.resize(off_[n_]);

  std::vector<std::size_t> cursor(off_.begin(), off_.end() - 1);
  for (auto [u, v] : edges) {
    flat_[cursor[u]++] = v;
    flat_[cursor[v]++] = u;
  }
  for (int v = 0; v < n_; ++v) {
    auto* lo = flat_.data() + off_[v];
    auto* hi = flat_.data() + off_[v + 1];
    std::sort(lo, hi);
    if (std::adjacent_find(lo, hi) != hi)
      throw PreconditionError("graph: duplicate edge at vertex " + std::to_string(v));
  }
}

bool Graph::has_edge(int u, int v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edge_count());
  for (int u = 0; u < n_; ++u)
    for (int v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

bool Graph::connected() const {
  if (n_ <= 1) return true;
  std::vector<char> seen(n_, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : neighbors(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == n_;
}

int max_degree(const Graph& g) {
  int best = 0;
  for (int v = 0; v < g.vertex_count(); ++v) best = std::max(best, g.degree(v));
  return best;
}

} // namespace uniblock
