#include "uniblock/block_model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "uniblock/errors.hpp"
#include "uniblock/rng.hpp"

namespace uniblock {

namespace {

// ceil() that forgives sub-ulp float noise around exact integers.
std::int64_t ceil_tolerant(double x) {
  double r = std::nearbyint(x);
  if (std::fabs(x - r) <= 1e-6 + 1e-12 * std::fabs(x)) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

} // namespace

double BlockModelParams::effective_block_constant() const {
  return block_constant * std::pow(3.0, d);
}

std::pair<int, int> BlockModelParams::locate(std::int64_t v) const {
  if (v < 0 || v >= total_vertices) throw PreconditionError("locate: vertex out of range");
  auto it = std::upper_bound(block_offsets.begin(), block_offsets.end(), v);
  int k = static_cast<int>(it - block_offsets.begin()); // first offset > v is block_end(k)
  const auto& sb = subblock_offsets[k - 1];
  auto jt = std::upper_bound(sb.begin(), sb.end(), v);
  int j = static_cast<int>(jt - sb.begin());
  return {k, j};
}

BlockModelParams derive_params(std::int64_t n, int d, const BlockModelOverrides& overrides) {
  if (n < 16) throw PreconditionError("n too small: need n >= 16, got " + std::to_string(n));
  if (d < 1) throw PreconditionError("invalid degeneracy parameter d = " + std::to_string(d));
  if (d == 1)
    throw PreconditionError("d too small for the block model: the level equation "
                            "n^(d^(1-N)) <= 3^(d^2) has no solution at d = 1; need d >= 2");

  BlockModelParams params;
  params.n = n;
  params.d = d;

  const double nd = static_cast<double>(n);
  const double ln_n = std::log(nd);
  const double lnln_n = std::log(ln_n);

  if (overrides.block_constant) {
    if (*overrides.block_constant <= 0.0)
      throw PreconditionError("invalid override: block_constant must be positive");
    params.block_constant = *overrides.block_constant;
    params.block_constant_overridden = true;
  }
  params.prob_boost = std::pow(ln_n, 2.0 / d) * std::pow(lnln_n, 3.0);
  if (overrides.prob_boost) {
    if (*overrides.prob_boost < 0.0)
      throw PreconditionError("invalid override: prob_boost must be non-negative");
    params.prob_boost = *overrides.prob_boost;
    params.prob_boost_overridden = true;
  }
  params.subblock_count = std::max(2, static_cast<int>(std::floor(ln_n)));
  if (overrides.subblock_count) {
    if (*overrides.subblock_count < 2)
      throw PreconditionError("invalid override: subblock_count must be >= 2");
    params.subblock_count = *overrides.subblock_count;
    params.subblock_count_overridden = true;
  }

  // Smallest N with n^(d^(1-N)) <= 3^(d^2). The exponent d^(1-N) decays
  // geometrically, so small N always suffices.
  const double level_cap = std::pow(3.0, static_cast<double>(d) * d);
  int levels = 0;
  for (int cand = 1; cand <= 64; ++cand) {
    double top = std::pow(nd, std::pow(static_cast<double>(d), 1.0 - cand));
    if (top <= level_cap * (1.0 + 1e-12)) {
      levels = cand;
      break;
    }
  }
  if (levels == 0) throw InternalError("derive_params: no level count found");
  params.levels = levels;

  params.delta.resize(levels + 1);
  for (int i = 1; i <= levels; ++i)
    params.delta[i - 1] =
        (i == 1) ? nd : std::pow(nd, std::pow(static_cast<double>(d), 1.0 - i));
  params.delta[levels] = 0.0;

  params.prob.assign(levels, std::vector<double>(levels, 0.0));
  for (int i = 1; i <= levels; ++i) {
    for (int k = 1; k <= levels; ++k) {
      if (i == 1 || k == 1) {
        params.prob[i - 1][k - 1] = 1.0;
        continue;
      }
      double expo = -1.0 / d + std::pow(static_cast<double>(d), -i) +
                    std::pow(static_cast<double>(d), -k);
      double raw = std::pow(nd, expo) * params.prob_boost;
      params.prob[i - 1][k - 1] = std::clamp(raw, 0.0, 1.0);
    }
  }

  const double c_eff = params.effective_block_constant();
  const int j_count = params.subblock_count;
  params.block_sizes.resize(levels);
  params.subblock_sizes.assign(levels, {});
  params.block_offsets.assign(levels + 1, 0);
  params.subblock_offsets.assign(levels, {});
  for (int k = 1; k <= levels; ++k) {
    double raw = c_eff * std::pow(nd, 1.0 - std::pow(static_cast<double>(d), -k));
    std::int64_t w = ceil_tolerant(raw);
    params.block_sizes[k - 1] = w;

    auto& sizes = params.subblock_sizes[k - 1];
    sizes.resize(j_count);
    sizes[0] = (w + 1) / 2;
    std::int64_t rest = w - sizes[0];
    std::int64_t base = rest / (j_count - 1);
    std::int64_t extra = rest % (j_count - 1);
    for (int j = 2; j <= j_count; ++j) sizes[j - 1] = base + (j - 2 < extra ? 1 : 0);
    // The even split keeps every sub-block at >= |W_k|/(2J) whenever the
    // block is not tiny relative to J (w >= 2J^2 suffices); reject the
    // degenerate configurations instead of silently breaking the floor.
    for (int j = 1; j <= j_count; ++j) {
      if (sizes[j - 1] < 1 || sizes[j - 1] * 2 * j_count < w)
        throw PreconditionError("invalid override: block " + std::to_string(k) + " (" +
                                std::to_string(w) + " vertices) cannot honour the sub-block size "
                                "floor with " + std::to_string(j_count) +
                                " sub-blocks; lower subblock_count");
    }
  }
  for (int k = 1; k <= levels; ++k)
    params.block_offsets[k] = params.block_offsets[k - 1] + params.block_sizes[k - 1];
  params.total_vertices = params.block_offsets[levels];
  for (int k = 1; k <= levels; ++k) {
    auto& offs = params.subblock_offsets[k - 1];
    offs.resize(j_count + 1);
    offs[0] = params.block_begin(k);
    for (int j = 1; j <= j_count; ++j) offs[j] = offs[j - 1] + params.subblock_size(k, j);
  }

  return params;
}

HostGraph::HostGraph(BlockModelParams params, std::uint64_t seed, BitMatrix adj)
    : params_(std::move(params)), seed_(seed), adj_(std::move(adj)) {
  edge_count_ = static_cast<std::int64_t>(adj_.count_all() / 2);
  const std::int64_t total = params_.total_vertices;
  block_of_.resize(total);
  subblock_of_.resize(total);
  for (int k = 1; k <= params_.levels; ++k) {
    for (int j = 1; j <= params_.subblock_count; ++j) {
      for (std::int64_t v = params_.subblock_begin(k, j); v < params_.subblock_end(k, j); ++v) {
        block_of_[v] = k;
        subblock_of_[v] = j;
      }
    }
  }
}

Graph HostGraph::to_graph() const {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(edge_count_));
  const std::size_t n = adj_.size();
  for (std::size_t u = 0; u < n; ++u) {
    const std::uint64_t* row = adj_.row(u);
    for (std::size_t wi = (u + 1) / 64; wi < adj_.words_per_row(); ++wi) {
      std::uint64_t w = row[wi];
      if (wi == (u + 1) / 64 && (u + 1) % 64 != 0) w &= ~((1ULL << ((u + 1) % 64)) - 1);
      while (w) {
        std::size_t v = wi * 64 + static_cast<std::size_t>(__builtin_ctzll(w));
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
        w &= w - 1;
      }
    }
  }
  return Graph(static_cast<int>(n), edges);
}

namespace {

// Skip-sampling over a linearised pair range: visits each of the M pair
// slots independently with probability p, jumping geometric gaps instead of
// drawing one Bernoulli per pair.
template <typename EmitPair>
void sample_pairs(Rng& rng, double p, std::int64_t pair_count, EmitPair&& emit) {
  if (p <= 0.0 || pair_count <= 0) return;
  const double log_q = std::log1p(-p); // < 0 for p in (0,1)
  std::int64_t pos = -1;
  while (true) {
    double gap = std::floor(std::log1p(-rng.unit()) / log_q);
    if (gap >= static_cast<double>(pair_count - pos)) return; // jumped past the end
    pos += 1 + static_cast<std::int64_t>(gap);
    if (pos >= pair_count) return;
    emit(pos);
  }
}

} // namespace

std::pair<std::int64_t, std::int64_t> detail::triangle_unrank(std::int64_t pos, std::int64_t s) {
  double sd = static_cast<double>(s);
  double disc = (2.0 * sd - 1.0) * (2.0 * sd - 1.0) - 8.0 * static_cast<double>(pos);
  std::int64_t a = static_cast<std::int64_t>(
      std::floor((2.0 * sd - 1.0 - std::sqrt(std::max(disc, 0.0))) / 2.0));
  a = std::clamp<std::int64_t>(a, 0, s - 2);
  // the float estimate can land one row off; fix up exactly
  auto row_start = [s](std::int64_t r) { return r * s - r * (r + 1) / 2; };
  while (a > 0 && row_start(a) > pos) --a;
  while (a < s - 2 && row_start(a + 1) <= pos) ++a;
  std::int64_t b = a + 1 + (pos - row_start(a));
  return {a, b};
}

HostGraph sample_host(const BlockModelParams& params, std::uint64_t seed,
                      const SampleOptions& options) {
  if (params.total_vertices > options.vertex_cap)
    throw PreconditionError(
        "host size overflow: " + std::to_string(params.total_vertices) + " vertices exceeds cap " +
        std::to_string(options.vertex_cap) +
        " (the default model constants exceed desk scale; use overrides or raise the cap)");

  const std::int64_t total = params.total_vertices;
  BitMatrix adj(static_cast<std::size_t>(total));
  Rng rng(seed);

  // Fixed region order (i <= k) keeps the stream layout, and therefore the
  // sampled host, deterministic per seed. p = 1 regions consume no
  // randomness.
  for (int i = 1; i <= params.levels; ++i) {
    for (int k = i; k <= params.levels; ++k) {
      const double p = params.p(i, k);
      const std::int64_t ib = params.block_begin(i), ie = params.block_end(i);
      const std::int64_t kb = params.block_begin(k), ke = params.block_end(k);
      if (i == k) {
        const std::int64_t s = ke - kb;
        if (p >= 1.0) {
          for (std::int64_t u = kb; u < ke; ++u) {
            adj.fill_row_range(static_cast<std::size_t>(u), static_cast<std::size_t>(kb),
                               static_cast<std::size_t>(ke));
            adj.reset_bit(static_cast<std::size_t>(u), static_cast<std::size_t>(u));
          }
        } else {
          sample_pairs(rng, p, s * (s - 1) / 2, [&](std::int64_t pos) {
            auto [a, b] = detail::triangle_unrank(pos, s);
            adj.set_edge(static_cast<std::size_t>(kb + a), static_cast<std::size_t>(kb + b));
          });
        }
      } else {
        const std::int64_t szk = ke - kb;
        if (p >= 1.0) {
          for (std::int64_t u = ib; u < ie; ++u)
            adj.fill_row_range(static_cast<std::size_t>(u), static_cast<std::size_t>(kb),
                               static_cast<std::size_t>(ke));
          for (std::int64_t v = kb; v < ke; ++v)
            adj.fill_row_range(static_cast<std::size_t>(v), static_cast<std::size_t>(ib),
                               static_cast<std::size_t>(ie));
        } else {
          sample_pairs(rng, p, (ie - ib) * szk, [&](std::int64_t pos) {
            adj.set_edge(static_cast<std::size_t>(ib + pos / szk),
                         static_cast<std::size_t>(kb + pos % szk));
          });
        }
      }
    }
  }

  return HostGraph(params, seed, std::move(adj));
}

EdgeAudit audit_edges(const HostGraph& host, double z_threshold) {
  const auto& params = host.params();
  const auto& adj = host.adjacency();
  EdgeAudit audit;
  audit.threshold = z_threshold;

  for (int i = 1; i <= params.levels; ++i) {
    for (int k = i; k <= params.levels; ++k) {
      const double p = params.p(i, k);
      const std::int64_t ib = params.block_begin(i), ie = params.block_end(i);
      const std::int64_t kb = params.block_begin(k), ke = params.block_end(k);

      std::int64_t observed = 0;
      std::int64_t pair_count = 0;
      if (i == k) {
        for (std::int64_t u = kb; u < ke; ++u)
          observed += static_cast<std::int64_t>(adj.count_row_range(
              static_cast<std::size_t>(u), static_cast<std::size_t>(u + 1),
              static_cast<std::size_t>(ke)));
        pair_count = (ke - kb) * (ke - kb - 1) / 2;
      } else {
        for (std::int64_t u = ib; u < ie; ++u)
          observed += static_cast<std::int64_t>(
              adj.count_row_range(static_cast<std::size_t>(u), static_cast<std::size_t>(kb),
                                  static_cast<std::size_t>(ke)));
        pair_count = (ie - ib) * (ke - kb);
      }

      PairAudit pa;
      pa.i = i;
      pa.k = k;
      pa.observed = observed;
      pa.expected = p * static_cast<double>(pair_count);
      const double variance = static_cast<double>(pair_count) * p * (1.0 - p);
      if (variance > 0.0) {
        pa.z = (static_cast<double>(observed) - pa.expected) / std::sqrt(variance);
      } else {
        pa.z = 0.0;
        if (static_cast<double>(observed) != pa.expected) audit.flagged = true;
      }
      audit.max_abs_z = std::max(audit.max_abs_z, std::fabs(pa.z));
      audit.total_edges += observed;
      audit.pairs.push_back(pa);
    }
  }
  if (audit.max_abs_z > z_threshold) audit.flagged = true;
  return audit;
}

std::vector<ParamCheck> check_block_model(const BlockModelParams& params) {
  std::vector<ParamCheck> checks;
  const double nd = static_cast<double>(params.n);
  const double lnln_n = std::log(std::log(nd));
  const bool small_n = params.n < 10000;
  auto add = [&](std::string name, bool pass, bool warn_on_fail, std::string detail) {
    checks.push_back({std::move(name), pass, !pass && warn_on_fail, std::move(detail)});
  };

  {
    double lo = lnln_n / (2.0 * std::log(static_cast<double>(params.d)));
    double hi = 2.0 * lnln_n;
    std::ostringstream ss;
    ss << lo << " <= N=" << params.levels << " <= " << hi;
    add("level count range", lo <= params.levels && params.levels <= hi, small_n, ss.str());
  }
  {
    double lo = std::pow(3.0, params.d);
    double hi = std::pow(3.0, static_cast<double>(params.d) * params.d);
    double dn = params.delta_at(params.levels);
    std::ostringstream ss;
    ss << lo << " <= delta_N=" << dn << " <= " << hi;
    add("deepest band range", lo * (1 - 1e-12) <= dn && dn <= hi * (1 + 1e-12), small_n, ss.str());
  }
  {
    bool ok = true;
    for (int i = 1; i <= params.levels && ok; ++i)
      ok = params.p(i, 1) == 1.0 && params.p(1, i) == 1.0;
    for (int i = 1; i <= params.levels; ++i)
      for (int k = 1; k <= params.levels; ++k) {
        double p = params.p(i, k);
        if (p < 0.0 || p > 1.0 || p != params.p(k, i)) ok = false;
      }
    add("probability matrix (first row/column forced to 1, symmetric, in [0,1])", ok, false, "");
  }
  {
    const double c_eff = params.effective_block_constant();
    double wn = static_cast<double>(params.block_size(params.levels));
    double lo = c_eff * nd / std::pow(3.0, params.d);
    double hi = c_eff * nd / 3.0;
    std::ostringstream ss;
    ss << "|W_N|/n = " << wn / nd << " in [" << lo / nd << ", " << hi / nd << "]";
    add("deepest block size range", lo * (1 - 1e-12) <= wn && wn <= hi * (1 + 1e-12) + 1.0,
        small_n, ss.str());
  }
  {
    const double c_eff = params.effective_block_constant();
    double cap = 2.0 * c_eff * nd + params.levels; // ceil slack
    std::ostringstream ss;
    ss << params.total_vertices << " <= " << cap;
    add("total vertex count", static_cast<double>(params.total_vertices) <= cap, small_n,
        ss.str());
  }
  {
    bool ok = true;
    for (int k = 1; k <= params.levels && ok; ++k) {
      std::int64_t w = params.block_size(k);
      std::int64_t sum = 0;
      if (params.subblock_size(k, 1) != (w + 1) / 2) ok = false;
      for (int j = 1; j <= params.subblock_count; ++j) {
        std::int64_t s = params.subblock_size(k, j);
        sum += s;
        if (s < 1 || static_cast<double>(s) * 2 * params.subblock_count < static_cast<double>(w))
          ok = false;
      }
      if (sum != w) ok = false;
    }
    add("sub-block partition (half split, floor |W_k|/(2J))", ok, false, "");
  }
  return checks;
}

void write_labels(const HostGraph& host, std::ostream& out) {
  for (int v = 0; v < host.vertex_count(); ++v)
    out << v << ' ' << host.block_of(v) << ' ' << host.subblock_of(v) << '\n';
}

} // namespace uniblock
