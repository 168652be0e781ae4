#include "uniblock/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "uniblock/errors.hpp"
#include "uniblock/rng.hpp"

namespace uniblock {

int assign_band(std::int64_t deg, const BlockModelParams& params) {
  if (deg < 0 || deg >= params.n)
    throw PreconditionError("assign_band: degree " + std::to_string(deg) +
                            " out of range for n = " + std::to_string(params.n));
  if (deg == 0) return params.levels;
  // Bands are nested: {k : deg <= delta_k} is a prefix of 1..N, so the
  // deepest matching k is the unique band. The epsilon absorbs float noise
  // when delta_k is mathematically an integer (e.g. delta_2 = sqrt(n)).
  for (int k = params.levels; k >= 1; --k) {
    if (static_cast<double>(deg) <= params.delta_at(k) * (1.0 + 1e-12) + 1e-9) return k;
  }
  throw InternalError("assign_band: no band found"); // unreachable, delta_1 = n
}

std::vector<int> common_candidates(const HostGraph& host, const std::vector<int>& images, int k,
                                   int j, const Bitset& used) {
  const auto& params = host.params();
  for (int img : images)
    if (img < 0 || img >= host.vertex_count())
      throw PreconditionError("common_candidates: image " + std::to_string(img) +
                              " is not a host vertex");
  std::vector<int> out;
  for (std::int64_t v = params.subblock_begin(k, j); v < params.subblock_end(k, j); ++v) {
    if (used.test(static_cast<std::size_t>(v))) continue;
    bool all = true;
    for (int img : images) {
      if (!host.adjacency().test(static_cast<std::size_t>(img), static_cast<std::size_t>(v))) {
        all = false;
        break;
      }
    }
    if (all) out.push_back(static_cast<int>(v));
  }
  return out;
}

namespace {

// Word-parallel scan of one sub-block: counts free common neighbours of the
// image set and returns the index-th one (index 0 = lowest host vertex).
// Returns -1 when fewer than index + 1 candidates exist; count is always
// the full candidate count.
int scan_subblock(const BitMatrix& adj, const Bitset& used, std::int64_t lo, std::int64_t hi,
                  const std::vector<int>& images, std::int64_t index, std::int64_t& count) {
  count = 0;
  int picked = -1;
  const auto ulo = static_cast<std::size_t>(lo), uhi = static_cast<std::size_t>(hi);
  const std::size_t w_lo = ulo / 64, w_hi = (uhi - 1) / 64;
  auto used_words = used.words();
  for (std::size_t wi = w_lo; wi <= w_hi; ++wi) {
    std::uint64_t cand = ~used_words[wi];
    if (wi == w_lo) cand &= bits::range_mask(ulo % 64, 64);
    if (wi == w_hi) cand &= bits::range_mask(0, (uhi - 1) % 64 + 1);
    for (int img : images) cand &= adj.row(static_cast<std::size_t>(img))[wi];
    if (cand == 0) continue;
    int c = bits::popcount(cand);
    if (picked < 0 && count + c > index) {
      // select the (index - count)-th set bit of cand
      std::uint64_t w = cand;
      for (std::int64_t skip = index - count; skip > 0; --skip) w &= w - 1;
      picked = static_cast<int>(wi * 64 + static_cast<std::size_t>(__builtin_ctzll(w)));
    }
    count += c;
  }
  return picked;
}

} // namespace

EmbedResult embed(const Graph& h, const DegeneracyResult& order, const HostGraph& host,
                  const EmbedOptions& options) {
  const auto& params = host.params();
  const int n_guest = h.vertex_count();
  if (n_guest > params.n)
    throw PreconditionError("embed: guest has " + std::to_string(n_guest) +
                            " vertices, host model built for n = " + std::to_string(params.n));
  const int back = order_back_degree(h, order.order);
  if (back < 0) throw PreconditionError("bad order: not a permutation of the guest vertices");
  if (back > params.d)
    throw PreconditionError("bad order: back-degree " + std::to_string(back) +
                            " exceeds model parameter d = " + std::to_string(params.d));

  EmbedResult res;
  res.embedding = EmbeddingMap(n_guest);
  res.trace.reserve(n_guest);

  std::vector<int> pos(n_guest);
  for (int i = 0; i < n_guest; ++i) pos[order.order[i]] = i;

  Bitset used(static_cast<std::size_t>(params.total_vertices));
  std::vector<std::vector<std::int64_t>> occupancy(
      params.levels, std::vector<std::int64_t>(params.subblock_count, 0));

  Rng choice_rng(options.choice_seed);
  std::vector<int> images;
  images.reserve(params.d);

  for (int i = 1; i <= n_guest; ++i) {
    const int x = order.order[i - 1];
    const int k = assign_band(h.degree(x), params);

    images.clear();
    for (int y : h.neighbors(x))
      if (pos[y] < pos[x]) images.push_back(res.embedding.assignment[y]);

    bool placed = false;
    for (int j = 1; j <= params.subblock_count && !placed; ++j) {
      const std::int64_t lo = params.subblock_begin(k, j), hi = params.subblock_end(k, j);
      std::int64_t count = 0;
      int v = scan_subblock(host.adjacency(), used, lo, hi, images, 0, count);
      if (count == 0) continue;
      if (options.choice == EmbedOptions::Choice::seeded_random && count > 1) {
        std::int64_t pick = static_cast<std::int64_t>(
            choice_rng.below(static_cast<std::uint64_t>(count)));
        if (pick > 0) v = scan_subblock(host.adjacency(), used, lo, hi, images, pick, count);
      }
      res.embedding.assignment[x] = v;
      used.set(static_cast<std::size_t>(v));
      ++occupancy[k - 1][j - 1];
      res.trace.push_back({i, x, k, j, v, count - 1});
      placed = true;
    }
    if (!placed) {
      res.failure = EmbedFailure{i, x, k, occupancy};
      return res;
    }
  }
  res.success = true;
  return res;
}

PartialEmbedding replay_trace(const Trace& trace, int guest_count, const BlockModelParams& params,
                              std::size_t steps) {
  PartialEmbedding pe;
  pe.map = EmbeddingMap(guest_count);
  pe.used = Bitset(static_cast<std::size_t>(params.total_vertices));
  pe.occupancy.assign(params.levels, std::vector<std::int64_t>(params.subblock_count, 0));
  steps = std::min(steps, trace.size());
  for (std::size_t t = 0; t < steps; ++t) {
    const auto& s = trace[t];
    pe.map.assignment[s.guest] = s.host;
    pe.used.set(static_cast<std::size_t>(s.host));
    ++pe.occupancy[s.band - 1][s.subblock - 1];
  }
  return pe;
}

BackMultiset collect_back_multiset(const PartialEmbedding& pe, const Graph& h,
                                   const DegeneracyResult& order, const BlockModelParams& params,
                                   int k, int j) {
  BackMultiset b;
  const int n_guest = h.vertex_count();
  std::vector<int> pos(n_guest, -1);
  for (int i = 0; i < static_cast<int>(order.order.size()); ++i) pos[order.order[i]] = i;

  const std::int64_t lo = params.subblock_begin(k, j), hi = params.subblock_end(k, j);
  for (int i = 0; i < static_cast<int>(order.order.size()); ++i) {
    const int x = order.order[i];
    const int img = pe.map.assignment[x];
    if (img == EmbeddingMap::kUnassigned || img < lo || img >= hi) continue;
    std::vector<int> set;
    for (int y : h.neighbors(x))
      if (pos[y] < pos[x] && pe.map.assignment[y] != EmbeddingMap::kUnassigned)
        set.push_back(pe.map.assignment[y]);
    std::sort(set.begin(), set.end());
    b.sets.push_back(std::move(set));
  }
  return b;
}

WellBehavedResult check_well_behaved(const BackMultiset& b, const BlockModelParams& params) {
  WellBehavedResult r;
  for (std::size_t s = 0; s < b.sets.size(); ++s) {
    if (static_cast<int>(b.sets[s].size()) > params.d) {
      r.status = WellBehaved::nb1;
      r.set_index = static_cast<int>(s);
      return r;
    }
  }

  std::unordered_map<int, int> multiplicity;
  for (const auto& set : b.sets)
    for (int u : set) ++multiplicity[u];
  for (const auto& [u, m] : multiplicity) {
    const int k = params.locate(u).first;
    if (static_cast<double>(m) > params.delta_at(k) * (1.0 + 1e-12) + 1e-9) {
      r.status = WellBehaved::nb2;
      r.vertex = u;
      r.block = k;
      return r;
    }
  }

  Bitset covered(static_cast<std::size_t>(params.total_vertices));
  for (const auto& set : b.sets)
    for (int u : set) covered.set(static_cast<std::size_t>(u));
  for (int k = 1; k <= params.levels; ++k) {
    for (int j = 1; j <= params.subblock_count; ++j) {
      const std::int64_t cnt = static_cast<std::int64_t>(
          bits::count_range(covered.words().data(),
                            static_cast<std::size_t>(params.subblock_begin(k, j)),
                            static_cast<std::size_t>(params.subblock_end(k, j))));
      if (2 * cnt > params.subblock_size(k, j)) {
        r.status = WellBehaved::nb3;
        r.block = k;
        r.subblock = j;
        return r;
      }
    }
  }
  return r;
}

std::string WellBehavedResult::message() const {
  switch (status) {
  case WellBehaved::ok:
    return "ok";
  case WellBehaved::nb1:
    return "NB1 violated: set " + std::to_string(set_index) + " larger than D";
  case WellBehaved::nb2:
    return "NB2 violated: vertex " + std::to_string(vertex) + " in block " +
           std::to_string(block) + " appears in more than delta_k sets";
  case WellBehaved::nb3:
    return "NB3 violated: union covers more than half of sub-block (" + std::to_string(block) +
           "," + std::to_string(subblock) + ")";
  }
  return "unknown";
}

Ledger ledger(const BlockModelParams& params) {
  Ledger led;
  const double ln_n = std::log(static_cast<double>(params.n));
  led.cap.assign(params.levels, std::vector<double>(params.subblock_count, 0.0));
  for (int k = 1; k <= params.levels; ++k) {
    led.cap[k - 1][0] =
        (k == params.levels)
            ? static_cast<double>(params.n)
            : 2.0 * std::pow(static_cast<double>(params.n),
                             1.0 - std::pow(static_cast<double>(params.d), -k));
    for (int j = 2; j <= params.subblock_count; ++j)
      led.cap[k - 1][j - 1] = led.cap[k - 1][j - 2] / (4.0 * ln_n);
  }
  return led;
}

std::optional<LedgerBreach> assert_ledger(const Trace& trace, const Ledger& led,
                                          const BlockModelParams& params) {
  std::vector<std::vector<std::int64_t>> occupancy(
      params.levels, std::vector<std::int64_t>(params.subblock_count, 0));
  for (const auto& s : trace) {
    const std::int64_t occ = ++occupancy[s.band - 1][s.subblock - 1];
    if (static_cast<double>(occ) > led.at(s.band, s.subblock) + 1e-9)
      return LedgerBreach{s.step, s.band, s.subblock, occ, led.at(s.band, s.subblock)};
  }
  return std::nullopt;
}

void write_trace(const Trace& trace, std::ostream& out) {
  for (const auto& s : trace)
    out << s.step << ' ' << s.guest << ' ' << s.band << ' ' << s.subblock << ' ' << s.host << ' '
        << s.candidates_remaining << '\n';
}

void write_embedding(const EmbeddingMap& m, std::ostream& out) {
  for (std::size_t x = 0; x < m.assignment.size(); ++x) out << x << ' ' << m.assignment[x] << '\n';
}

EmbeddingMap read_embedding(std::istream& in, int guest_count) {
  EmbeddingMap m(guest_count);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    long long x = 0, v = 0;
    if (!(ss >> x >> v)) throw PreconditionError("embedding: malformed line \"" + line + "\"");
    if (x < 0 || x >= guest_count)
      throw PreconditionError("embedding: guest vertex out of range in \"" + line + "\"");
    m.assignment[static_cast<std::size_t>(x)] = static_cast<int>(v);
  }
  return m;
}

} // namespace uniblock
