#include "uniblock/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "uniblock/errors.hpp"
#include "uniblock/rng.hpp"

namespace uniblock {

double lower_bound_edges(double n, int d) {
  if (n < 1 || d < 1) throw PreconditionError("lower_bound_edges: need n >= 1, d >= 1");
  return std::pow(n, 2.0 - 1.0 / d) / (1000.0 * d);
}

double universality_budget(double n, int d) {
  if (d < 1) throw PreconditionError("universality_budget: need d >= 1");
  if (n < 16) throw PreconditionError("n too small: universality budget needs n >= 16");
  const double ln_n = std::log(n);
  return 80000.0 * std::pow(n, 2.0 - 1.0 / d) * std::pow(ln_n, 2.0 / d) *
         std::pow(std::log(ln_n), 5.0);
}

double model_edge_bound(double n, int d) {
  if (d < 1) throw PreconditionError("model_edge_bound: need d >= 1");
  if (n < 16) throw PreconditionError("n too small: model edge bound needs n >= 16");
  const double ln_n = std::log(n);
  return 1e5 * std::pow(3.0, 2.0 * d) * std::pow(n, 2.0 - 1.0 / d) * std::pow(ln_n, 2.0 / d) *
         std::pow(std::log(ln_n), 5.0);
}

namespace {

double pair_expectation(const BlockModelParams& params, int i, int k) {
  const double p = params.p(i, k);
  if (i == k) {
    const double s = static_cast<double>(params.block_size(k));
    return p * s * (s - 1.0) / 2.0;
  }
  return p * static_cast<double>(params.block_size(i)) *
         static_cast<double>(params.block_size(k));
}

} // namespace

double expected_edges(const BlockModelParams& params) {
  double sum = 0.0;
  for (int i = 1; i <= params.levels; ++i)
    for (int k = i; k <= params.levels; ++k) sum += pair_expectation(params, i, k);
  return sum;
}

double scaled_model_edge_bound(const BlockModelParams& params) {
  double max_pair = 0.0;
  for (int i = 1; i <= params.levels; ++i)
    for (int k = i; k <= params.levels; ++k)
      max_pair = std::max(max_pair, pair_expectation(params, i, k));
  const double lnln_n = std::log(std::log(static_cast<double>(params.n)));
  return 2.0 * (2.0 * lnln_n) * (2.0 * lnln_n) * max_pair;
}

BoundsReport bounds_report(const BlockModelParams& params, const HostGraph* host) {
  BoundsReport r;
  r.lower_bound = lower_bound_edges(static_cast<double>(params.n), params.d);
  r.budget = universality_budget(static_cast<double>(params.n), params.d);
  r.model_bound = model_edge_bound(static_cast<double>(params.n), params.d);
  r.expected = expected_edges(params);
  if (host) r.observed = host->edge_count();
  return r;
}

WilsonInterval wilson(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw PreconditionError("wilson: need 0 <= successes <= trials, trials > 0");
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double centre = p + z2 / (2.0 * nt);
  const double margin = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt));
  return {std::max(0.0, (centre - margin) / denom), std::min(1.0, (centre + margin) / denom)};
}

namespace {

double common_event_raw(const BlockModelParams& params, std::int64_t t, int k) {
  const double n = static_cast<double>(params.n);
  const double ln_n = std::log(n);
  return static_cast<double>(t) *
         std::pow(n, std::pow(static_cast<double>(params.d), 1.0 - k) - 1.0) * ln_n * ln_n *
         std::pow(std::log(ln_n), params.d);
}

} // namespace

double common_event_lower_bound(const BlockModelParams& params, std::int64_t t, int k) {
  return std::min(0.25, common_event_raw(params, t, k));
}

CommonEventEstimate estimate_common_event(const BlockModelParams& params, const BackMultiset& b,
                                          int k, std::int64_t trials, std::uint64_t seed) {
  if (trials <= 0) throw PreconditionError("estimate_common_event: trials must be positive");
  if (k < 1 || k > params.levels) throw PreconditionError("estimate_common_event: bad block k");

  std::unordered_set<int> members;
  for (const auto& set : b.sets) members.insert(set.begin(), set.end());

  CommonEventEstimate est;
  est.trials = trials;
  for (std::int64_t v = params.block_begin(k); v < params.block_end(k); ++v) {
    if (!members.count(static_cast<int>(v))) {
      est.target = static_cast<int>(v);
      break;
    }
  }
  if (est.target < 0)
    throw PreconditionError("estimate_common_event: no valid target, the multiset covers W_" +
                            std::to_string(k));

  // Edge probability from the target to each distinct member, by the
  // member's block.
  std::vector<int> member_list(members.begin(), members.end());
  std::sort(member_list.begin(), member_list.end());
  std::vector<double> edge_p(member_list.size());
  std::vector<std::size_t> slot_of(member_list.empty() ? 0 : member_list.back() + 1, 0);
  for (std::size_t m = 0; m < member_list.size(); ++m) {
    edge_p[m] = params.p(params.locate(member_list[m]).first, k);
    slot_of[static_cast<std::size_t>(member_list[m])] = m;
  }

  Rng rng(seed);
  std::vector<char> present(member_list.size(), 0);
  for (std::int64_t t = 0; t < trials; ++t) {
    for (std::size_t m = 0; m < member_list.size(); ++m)
      present[m] = rng.bernoulli(edge_p[m]) ? 1 : 0;
    bool hit = false;
    for (const auto& set : b.sets) {
      bool all = true; // an empty set is contained in any neighbourhood
      for (int u : set) {
        if (!present[slot_of[static_cast<std::size_t>(u)]]) {
          all = false;
          break;
        }
      }
      if (all) {
        hit = true;
        break;
      }
    }
    if (hit) ++est.successes;
  }

  est.p_hat = static_cast<double>(est.successes) / static_cast<double>(trials);
  est.ci = wilson(est.successes, est.trials);
  est.bound = common_event_lower_bound(params, static_cast<std::int64_t>(b.size()), k);
  est.bound_capped = common_event_raw(params, static_cast<std::int64_t>(b.size()), k) > 0.25;
  est.bound_reportable = est.bound <= 1.0;
  est.bound_met = est.bound <= est.ci.lower;
  return est;
}

PseudoRandomReport pseudo_random_diagnostic(const HostGraph& host, const BackMultiset& b, int k,
                                            int j) {
  const auto& params = host.params();
  PseudoRandomReport report;
  report.subblock_size = params.subblock_size(k, j);

  const std::size_t lo = static_cast<std::size_t>(params.subblock_begin(k, j));
  const std::size_t hi = static_cast<std::size_t>(params.subblock_end(k, j));
  const std::size_t words = host.adjacency().words_per_row();

  // Union over b of common neighbourhoods, restricted to W_{k,j}.
  Bitset hits(static_cast<std::size_t>(params.total_vertices));
  std::vector<std::uint64_t> cand(words);
  for (const auto& set : b.sets) {
    std::fill(cand.begin(), cand.end(), ~0ULL);
    for (int u : set) {
      const std::uint64_t* row = host.adjacency().row(static_cast<std::size_t>(u));
      for (std::size_t w = 0; w < words; ++w) cand[w] &= row[w];
    }
    auto hw = hits.words();
    for (std::size_t w = 0; w < words; ++w) hw[w] |= cand[w];
  }
  report.hit_count =
      static_cast<std::int64_t>(bits::count_range(hits.words().data(), lo, hi));

  const double n = static_cast<double>(params.n);
  const double ln_n = std::log(n);
  const double raw = static_cast<double>(b.size()) / 4.0 *
                     std::pow(n, std::pow(static_cast<double>(params.d), 1.0 - k) - 1.0) *
                     ln_n * ln_n * std::pow(std::log(ln_n), params.d);
  report.capped = raw > 1.0 / 16.0;
  report.bound = std::min(1.0 / 16.0, raw) * static_cast<double>(report.subblock_size);
  report.satisfied = static_cast<double>(report.hit_count) >= report.bound - 1e-9;
  return report;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw PreconditionError("fit_slope: need two samples of equal length");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw PreconditionError("fit_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

} // namespace uniblock
