#include "uniblock/generators.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "uniblock/errors.hpp"
#include "uniblock/rng.hpp"

namespace uniblock {

Family family_from_string(const std::string& name) {
  if (name == "random_degenerate") return Family::random_degenerate;
  if (name == "bounded_degree") return Family::bounded_degree;
  if (name == "star") return Family::star;
  if (name == "complete_bipartite") return Family::complete_bipartite;
  if (name == "d_ary_tree") return Family::d_ary_tree;
  throw PreconditionError("unknown guest family \"" + name + "\"");
}

std::string family_name(Family family) {
  switch (family) {
  case Family::random_degenerate:
    return "random_degenerate";
  case Family::bounded_degree:
    return "bounded_degree";
  case Family::star:
    return "star";
  case Family::complete_bipartite:
    return "complete_bipartite";
  case Family::d_ary_tree:
    return "d_ary_tree";
  }
  return "?";
}

namespace {

// k distinct values from {0..bound-1}, via partial Fisher-Yates on a scratch
// index array.
std::vector<int> sample_distinct(Rng& rng, int bound, int k, std::vector<int>& scratch) {
  scratch.resize(bound);
  for (int i = 0; i < bound; ++i) scratch[i] = i;
  std::vector<int> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) {
    int r = i + rng.below_int(bound - i);
    std::swap(scratch[i], scratch[r]);
    out.push_back(scratch[i]);
  }
  return out;
}

} // namespace

Graph gen_random_degenerate(int n, int d, std::uint64_t seed, RandomMode mode) {
  if (n < 1) throw PreconditionError("gen_random_degenerate: n must be >= 1");
  if (d < 1) throw PreconditionError("gen_random_degenerate: d must be >= 1");
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  std::vector<int> scratch;
  for (int v = 1; v < n; ++v) {
    int cap = std::min(d, v);
    int take = (mode == RandomMode::full) ? cap : rng.below_int(cap + 1);
    for (int u : sample_distinct(rng, v, take, scratch)) edges.emplace_back(u, v);
  }
  return Graph(n, edges);
}

Graph gen_bounded_degree_degenerate(int n, int d, std::uint64_t seed) {
  if (n < 2) throw PreconditionError("gen_bounded_degree_degenerate: n must be >= 2");
  if (d < 1) throw PreconditionError("gen_bounded_degree_degenerate: d must be >= 1");
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  std::vector<int> degree(n, 0);
  std::vector<int> eligible;
  for (int v = 1; v < n; ++v) {
    // Vertex v-1 entered with at most d edges, so the eligible set (running
    // degree <= 2d) is never empty at the start of a step.
    eligible.clear();
    for (int u = 0; u < v; ++u)
      if (degree[u] <= 2 * d) eligible.push_back(u);
    int take = 1 + rng.below_int(std::min<int>(d, static_cast<int>(eligible.size())));
    std::vector<int> chosen;
    for (int t = 0; t < take; ++t) {
      // Re-check eligibility: edges added in this step may push a vertex
      // past 2d.
      eligible.clear();
      for (int u = 0; u < v; ++u) {
        if (degree[u] > 2 * d) continue;
        if (std::find(chosen.begin(), chosen.end(), u) != chosen.end()) continue;
        eligible.push_back(u);
      }
      if (eligible.empty()) break;
      int u = eligible[rng.below_int(static_cast<int>(eligible.size()))];
      chosen.push_back(u);
      edges.emplace_back(u, v);
      ++degree[u];
      ++degree[v];
    }
  }
  return Graph(n, edges);
}

Graph gen_extremal(Family family, int n, int d) {
  std::vector<std::pair<int, int>> edges;
  switch (family) {
  case Family::star: {
    if (n < 2) throw PreconditionError("star: n must be >= 2");
    for (int v = 1; v < n; ++v) edges.emplace_back(0, v);
    return Graph(n, edges);
  }
  case Family::complete_bipartite: {
    if (d < 1 || n <= d)
      throw PreconditionError("complete_bipartite: need n > d >= 1 for K_{d,n-d}");
    for (int u = 0; u < d; ++u)
      for (int v = d; v < n; ++v) edges.emplace_back(u, v);
    return Graph(n, edges);
  }
  case Family::d_ary_tree: {
    if (n < 1) throw PreconditionError("d_ary_tree: n must be >= 1");
    if (d < 1) throw PreconditionError("d_ary_tree: arity must be >= 1");
    for (int v = 1; v < n; ++v) edges.emplace_back((v - 1) / d, v);
    return Graph(n, edges);
  }
  default:
    throw PreconditionError("gen_extremal: family is not deterministic");
  }
}

Graph corpus_instance(const CorpusSpec& spec, int index) {
  if (index < 0 || index >= spec.count) throw PreconditionError("corpus_instance: index out of range");
  switch (spec.family) {
  case Family::random_degenerate: {
    Rng stream = Rng::derived(spec.seed, static_cast<std::uint64_t>(index));
    return gen_random_degenerate(spec.n, spec.d, stream.next_u64(), spec.mode);
  }
  case Family::bounded_degree: {
    Rng stream = Rng::derived(spec.seed, static_cast<std::uint64_t>(index));
    return gen_bounded_degree_degenerate(spec.n, spec.d, stream.next_u64());
  }
  default:
    return gen_extremal(spec.family, spec.n, spec.d);
  }
}

} // namespace uniblock
