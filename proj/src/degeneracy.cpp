#include "uniblock/degeneracy.hpp"

#include <algorithm>
#include <queue>

namespace uniblock {

DegeneracyResult degeneracy_order(const Graph& g) {
  const int n = g.vertex_count();
  DegeneracyResult res;
  res.order.reserve(n);

  std::vector<int> deg(n);
  std::vector<char> removed(n, 0);

  // Lazy min-heap keyed by (residual degree, vertex index); the index key
  // makes the lowest vertex win ties. Stale entries are skipped on pop.
  std::priority_queue<std::pair<int, int>, std::vector<std::pair<int, int>>, std::greater<>> heap;
  for (int v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    heap.emplace(deg[v], v);
  }

  std::vector<int> removal;
  removal.reserve(n);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (removed[v] || deg[v] != d) continue;
    res.degeneracy = std::max(res.degeneracy, d);
    removed[v] = 1;
    removal.push_back(v);
    for (int u : g.neighbors(v)) {
      if (!removed[u]) {
        --deg[u];
        heap.emplace(deg[u], u);
      }
    }
  }

  res.order.assign(removal.rbegin(), removal.rend());
  return res;
}

int order_back_degree(const Graph& g, const std::vector<int>& order) {
  const int n = g.vertex_count();
  if (static_cast<int>(order.size()) != n) return -1;
  std::vector<int> pos(n, -1);
  for (int i = 0; i < n; ++i) {
    int v = order[i];
    if (v < 0 || v >= n || pos[v] != -1) return -1;
    pos[v] = i;
  }
  int worst = 0;
  for (int v = 0; v < n; ++v) {
    int back = 0;
    for (int u : g.neighbors(v))
      if (pos[u] < pos[v]) ++back;
    worst = std::max(worst, back);
  }
  return worst;
}

DegreeProfileReport degree_profile_check(const Graph& g, int d) {
  DegreeProfileReport report;
  const int n = g.vertex_count();
  const int dmax = max_degree(g);
  if (n == 0 || dmax == 0) return report;

  // tail[k] = #{v : deg(v) >= k}
  std::vector<int> count(dmax + 2, 0);
  for (int v = 0; v < n; ++v) ++count[g.degree(v)];
  int tail = 0;
  std::vector<int> tails(dmax + 1, 0);
  for (int k = dmax; k >= 1; --k) {
    tail += count[k];
    tails[k] = tail;
  }
  for (int k = 1; k <= dmax; ++k) {
    if (static_cast<double>(tails[k]) * k > 2.0 * d * n) report.violations.push_back(k);
  }
  return report;
}

} // namespace uniblock
