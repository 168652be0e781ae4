#pragma once

#include <vector>

#include "uniblock/graph.hpp"

namespace uniblock {

/// Result of min-degree peeling: `order[i]` is the i-th vertex of a
/// degeneracy order, i.e. every vertex has at most `degeneracy` neighbours
/// among the vertices placed before it.
struct DegeneracyResult {
  int degeneracy = 0;
  std::vector<int> order;
};

/// Iterated minimum-degree removal with lowest-vertex-index tie-breaking;
/// the reversed removal sequence is the order. Deterministic.
DegeneracyResult degeneracy_order(const Graph& g);

/// Back-degrees of a proposed order; returns the maximum, or -1 if `order`
/// is not a permutation of the vertices.
int order_back_degree(const Graph& g, const std::vector<int>& order);

struct DegreeProfileReport {
  std::vector<int> violations; // thresholds k with #{v : deg(v) >= k} > 2*d*n/k
  bool ok() const { return violations.empty(); }
};

/// Degree-profile sanity check for a claimed d-degenerate graph: a genuine
/// d-degenerate graph has at most 2*d*n/k vertices of degree >= k for every
/// k >= 1.
DegreeProfileReport degree_profile_check(const Graph& g, int d);

} // namespace uniblock
