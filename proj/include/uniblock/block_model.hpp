#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uniblock/bitset.hpp"
#include "uniblock/graph.hpp"

namespace uniblock {

struct BlockModelOverrides {
  // Leading coefficient c in |W_k| = ceil(c * 3^d * n^(1 - d^-k)). The
  // model default c = 100 is far too dense to sample at desk scale, so
  // experiments typically shrink it; every artifact records the value used.
  std::optional<double> block_constant;
  // Replaces the default boost factor (ln n)^(2/d) * (ln ln n)^3 inside the
  // edge probabilities. 0 is allowed and zeroes every non-forced entry.
  std::optional<double> prob_boost;
  // Number of sub-blocks J per block; default max(2, floor(ln n)).
  std::optional<int> subblock_count;
};

/// All derived constants of the random block model for guest size n and
/// degeneracy parameter d:
///   - N (levels): smallest integer with n^(d^(1-N)) <= 3^(d^2),
///   - degree bands delta_i = n^(d^(1-i)) with delta_{N+1} = 0,
///   - edge probabilities p_{i,k} = min{n^(-1/d + d^-i + d^-k) * boost, 1},
///     forced to exactly 1 when i = 1 or k = 1,
///   - block sizes |W_k| = ceil(c * 3^d * n^(1 - d^-k)) laid out contiguously
///     (W_1 first), each split into J sub-blocks: W_{k,1} of size
///     ceil(|W_k|/2), the rest splitting the remainder as evenly as possible
///     with earlier sub-blocks taking the spill.
///
/// Indices i, k (blocks) and j (sub-blocks) are 1-based throughout, matching
/// the model's convention.
struct BlockModelParams {
  std::int64_t n = 0;
  int d = 0;
  int levels = 0;         // N
  int subblock_count = 0; // J
  double block_constant = 100.0;
  double prob_boost = 0.0;
  bool block_constant_overridden = false;
  bool prob_boost_overridden = false;
  bool subblock_count_overridden = false;

  std::vector<double> delta;                               // delta[i-1], i = 1..N+1
  std::vector<std::vector<double>> prob;                   // prob[i-1][k-1]
  std::vector<std::int64_t> block_sizes;                   // |W_k|, k = 1..N
  std::vector<std::vector<std::int64_t>> subblock_sizes;   // [k-1][j-1]
  std::vector<std::int64_t> block_offsets;                 // size N+1; last = total
  std::vector<std::vector<std::int64_t>> subblock_offsets; // [k-1], size J+1, absolute
  std::int64_t total_vertices = 0;

  bool default_constants() const {
    return !block_constant_overridden && !prob_boost_overridden && !subblock_count_overridden;
  }
  double effective_block_constant() const;

  double delta_at(int i) const { return delta[i - 1]; } // i in [1, N+1]
  double p(int i, int k) const { return prob[i - 1][k - 1]; }
  std::int64_t block_size(int k) const { return block_sizes[k - 1]; }
  std::int64_t subblock_size(int k, int j) const { return subblock_sizes[k - 1][j - 1]; }
  std::int64_t block_begin(int k) const { return block_offsets[k - 1]; }
  std::int64_t block_end(int k) const { return block_offsets[k]; }
  std::int64_t subblock_begin(int k, int j) const { return subblock_offsets[k - 1][j - 1]; }
  std::int64_t subblock_end(int k, int j) const { return subblock_offsets[k - 1][j]; }

  /// (block, sub-block) of a host vertex under the contiguous layout.
  std::pair<int, int> locate(std::int64_t v) const;
};

/// Derives every model constant for (n, d). Requires n >= 16 (so that
/// ln ln n >= 1) and d >= 2: for d = 1 the level equation n^(d^(1-N)) <=
/// 3^(d^2) has no solution, the geometric block-size scaling degenerates,
/// and no parameter set exists.
BlockModelParams derive_params(std::int64_t n, int d, const BlockModelOverrides& overrides = {});

/// A sampled host: the random graph together with its vertex labelling.
/// Adjacency is kept as a bit matrix; desk-scale hosts are dense (many
/// block pairs sit at p = 1), which makes row bitsets both the compact and
/// the fast representation. to_graph() materialises explicit neighbour
/// lists when a caller needs the plain graph form.
class HostGraph {
public:
  HostGraph(BlockModelParams params, std::uint64_t seed, BitMatrix adj);

  const BlockModelParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  int vertex_count() const { return static_cast<int>(adj_.size()); }
  std::int64_t edge_count() const { return edge_count_; }
  const BitMatrix& adjacency() const { return adj_; }

  int block_of(int v) const { return block_of_[v]; }       // 1-based k
  int subblock_of(int v) const { return subblock_of_[v]; } // 1-based j

  Graph to_graph() const;

private:
  BlockModelParams params_;
  std::uint64_t seed_ = 0;
  BitMatrix adj_;
  std::int64_t edge_count_ = 0;
  std::vector<std::int32_t> block_of_;
  std::vector<std::int32_t> subblock_of_;
};

struct SampleOptions {
  // Hard cap on host vertices; sampling a default-constant host at any
  // realistic n would blow past desk scale, so the guard is on by default.
  std::int64_t vertex_cap = 50000;
};

/// Samples the host graph: every unordered pair {u, v} with u in W_i,
/// v in W_k is an edge independently with probability p_{i,k}.
/// Deterministic for a fixed seed.
HostGraph sample_host(const BlockModelParams& params, std::uint64_t seed,
                      const SampleOptions& options = {});

struct PairAudit {
  int i = 0, k = 0;
  std::int64_t observed = 0;
  double expected = 0.0;
  double z = 0.0; // 0 when the pair is deterministic (p in {0,1}) and exact
};

struct EdgeAudit {
  std::vector<PairAudit> pairs;
  std::int64_t total_edges = 0;
  double max_abs_z = 0.0;
  double threshold = 0.0;
  bool flagged = false; // any |z| > threshold, or a deterministic pair off its exact count
};

/// Per block pair: observed edge count against the binomial expectation
/// p_{i,k}|W_i||W_k| (i != k) or p_{k,k} C(|W_k|, 2), with the normalized
/// deviation z = (obs - exp) / sqrt(variance).
EdgeAudit audit_edges(const HostGraph& host, double z_threshold = 5.0);

struct ParamCheck {
  std::string name;
  bool pass = false;
  bool warn = false; // soft failure (asymptotic property at small n, or overridden constants)
  std::string detail;
};

/// Structural checks on derived parameters: N and delta_N ranges, the
/// forced p rows, block-size bounds relative to n, total vertex count, and
/// sub-block size floors. Checks tied to the model's default constants
/// degrade to warnings when overrides are active.
std::vector<ParamCheck> check_block_model(const BlockModelParams& params);

/// Companion label file: one line "v k j" per host vertex.
void write_labels(const HostGraph& host, std::ostream& out);

namespace detail {
/// Inverse of the u-major linearisation of pairs {a < b} inside a block of
/// size s: index(a, b) = a*s - a(a+1)/2 + (b - a - 1). Used by the
/// skip-sampling edge generator.
std::pair<std::int64_t, std::int64_t> triangle_unrank(std::int64_t pos, std::int64_t s);
} // namespace detail

} // namespace uniblock
