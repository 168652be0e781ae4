#pragma once

#include <cstdint>
#include <optional>

#include "uniblock/block_model.hpp"
#include "uniblock/embedder.hpp"
#include "uniblock/stats.hpp"

namespace uniblock {

/// Counting lower bound: any host containing every n-vertex d-degenerate
/// graph of maximum degree <= 2d+1 has at least n^(2-1/d) / (1000 d) edges.
double lower_bound_edges(double n, int d);

/// Edge budget sufficient for universality:
/// 80000 n^(2-1/d) (ln n)^(2/d) (ln ln n)^5. Requires n >= 16.
double universality_budget(double n, int d);

/// Upper bound on the block model's edge count at default constants:
/// 10^5 3^(2d) n^(2-1/d) (ln n)^(2/d) (ln ln n)^5.
double model_edge_bound(double n, int d);

/// Sum over block pairs of the sampling expectations p_{i,k}|W_i||W_k|
/// (i < k) and p_{k,k} C(|W_k|, 2).
double expected_edges(const BlockModelParams& params);

/// Edge-count cap derived from the instantiated parameters the way the
/// model's tail argument derives it: 2 (2 ln ln n)^2 * max pair
/// expectation. Scales with overridden constants; at defaults it sits below
/// model_edge_bound.
double scaled_model_edge_bound(const BlockModelParams& params);

struct BoundsReport {
  double lower_bound = 0.0;
  double budget = 0.0;
  double model_bound = 0.0;
  double expected = 0.0;
  std::optional<std::int64_t> observed;
};

BoundsReport bounds_report(const BlockModelParams& params, const HostGraph* host = nullptr);

/// Common-neighbourhood event probability floor for a well-behaved multiset
/// of t sets and a target in W_k:
/// min{1/4, t n^(d^(1-k) - 1) (ln n)^2 (ln ln n)^d}.
double common_event_lower_bound(const BlockModelParams& params, std::int64_t t, int k);

struct CommonEventEstimate {
  double p_hat = 0.0;
  WilsonInterval ci;
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  int target = -1;        // host vertex whose edges were resampled
  double bound = 0.0;     // common_event_lower_bound for (|b|, k)
  bool bound_capped = false;     // the 1/4 branch of the min applied
  bool bound_reportable = false; // bound <= 1
  bool bound_met = false;        // bound <= ci.lower
};

/// Monte Carlo estimate of Pr(some B in b lies fully inside N(u)) for the
/// lowest-index u in W_k outside the union of b, over fresh independent
/// samples of the edges between u and the members of b.
CommonEventEstimate estimate_common_event(const BlockModelParams& params, const BackMultiset& b,
                                          int k, std::int64_t trials, std::uint64_t seed);

inline constexpr std::int64_t kDefaultTrials = 10000;

struct PseudoRandomReport {
  std::int64_t hit_count = 0;
  std::int64_t subblock_size = 0;
  double bound = 0.0;     // min{1/16, (t/4) n^(d^(1-k)-1) (ln n)^2 (ln ln n)^d} |W_{k,j}|
  bool capped = false;    // the 1/16 branch of the min applied
  bool satisfied = false; // hit_count >= bound
};

/// Counts the vertices of W_{k,j} whose neighbourhood contains some member
/// of b entirely, against the pseudo-randomness floor. A diagnostic: the
/// floor is an asymptotic guarantee at default constants, not a hard
/// invariant under overrides.
PseudoRandomReport pseudo_random_diagnostic(const HostGraph& host, const BackMultiset& b, int k,
                                            int j);

} // namespace uniblock
