#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uniblock/block_model.hpp"
#include "uniblock/degeneracy.hpp"
#include "uniblock/embedding.hpp"

namespace uniblock {

/// Degree band of a guest with total degree deg: the unique k with
/// delta_{k+1} < deg <= delta_k, where delta_{N+1} = 0. Isolated vertices
/// (deg = 0, where the strict lower inequality has no room) are sent to
/// band N, the lowest-degree block.
int assign_band(std::int64_t deg, const BlockModelParams& params);

/// The unoccupied vertices of W_{k,j} adjacent to every vertex of `images`,
/// ascending. Empty `images` selects every unoccupied vertex of the
/// sub-block.
std::vector<int> common_candidates(const HostGraph& host, const std::vector<int>& images, int k,
                                   int j, const Bitset& used);

struct TraceStep {
  int step;     // 1-based position in the embedding order
  int guest;    // guest vertex embedded at this step
  int band;     // k
  int subblock; // j
  int host;     // chosen host vertex
  std::int64_t candidates_remaining; // free common neighbours left unused in W_{k,j}

  bool operator==(const TraceStep&) const = default;
};
using Trace = std::vector<TraceStep>;

struct PartialEmbedding {
  EmbeddingMap map;
  Bitset used;                                      // occupied host vertices
  std::vector<std::vector<std::int64_t>> occupancy; // [k-1][j-1]
};

struct EmbedFailure {
  int step = 0;
  int guest = -1;
  int band = 0;
  std::vector<std::vector<std::int64_t>> occupancy; // snapshot at failure
};

struct EmbedOptions {
  enum class Choice { lowest_index, seeded_random };
  Choice choice = Choice::lowest_index;
  std::uint64_t choice_seed = 0;
};

struct EmbedResult {
  bool success = false;
  EmbeddingMap embedding;
  Trace trace;
  std::optional<EmbedFailure> failure;
};

/// Greedy sub-block embedding: guests are placed in degeneracy order; each
/// guest goes to the band of its total degree and to the minimal sub-block
/// j holding a free common neighbour of its already-embedded
/// back-neighbours. Candidate ties break to the lowest host index, or to a
/// seeded uniform choice when requested. Returns a structured failure
/// report instead of throwing when no sub-block of the band can take a
/// vertex.
EmbedResult embed(const Graph& h, const DegeneracyResult& order, const HostGraph& host,
                  const EmbedOptions& options = {});

/// Rebuilds the partial embedding after the first `steps` trace steps.
PartialEmbedding replay_trace(const Trace& trace, int guest_count, const BlockModelParams& params,
                              std::size_t steps);

/// Multiset of embedded back-neighbourhoods; duplicates are kept (guests
/// with identical back-neighbourhoods contribute identical sets).
struct BackMultiset {
  std::vector<std::vector<int>> sets; // each sorted ascending
  std::size_t size() const { return sets.size(); }
};

/// One set per guest embedded in W_{k,j}: the images of its
/// back-neighbours, in embedding order.
BackMultiset collect_back_multiset(const PartialEmbedding& pe, const Graph& h,
                                   const DegeneracyResult& order, const BlockModelParams& params,
                                   int k, int j);

enum class WellBehaved { ok, nb1, nb2, nb3 };

struct WellBehavedResult {
  WellBehaved status = WellBehaved::ok;
  int set_index = -1; // NB1: first oversized set
  int vertex = -1;    // NB2: host vertex with excess multiplicity
  int block = -1;     // NB3: sub-block filled past half
  int subblock = -1;

  bool ok() const { return status == WellBehaved::ok; }
  std::string message() const;
};

/// NB1: every set has at most D elements. NB2: every host vertex of W_k
/// lies in at most delta_k of the sets. NB3: the union covers at most half
/// of every sub-block.
WellBehavedResult check_well_behaved(const BackMultiset& b, const BlockModelParams& params);

/// Per-sub-block occupancy caps:
///   L_{k,1} = 2 n^(1 - d^-k) for k < N,  L_{N,1} = n,
///   L_{k,j} = L_{k,j-1} / (4 ln n) for j > 1.
struct Ledger {
  std::vector<std::vector<double>> cap; // [k-1][j-1]
  double at(int k, int j) const { return cap[k - 1][j - 1]; }
};

Ledger ledger(const BlockModelParams& params);

struct LedgerBreach {
  int step = 0;
  int band = 0;
  int subblock = 0;
  std::int64_t occupancy = 0;
  double cap = 0.0;
};

/// Checks occupancy[k][j] <= L_{k,j} after every trace step; returns the
/// first breach, if any. Enforced only for runs at the model's default
/// constants; under overrides callers treat the result as a diagnostic.
std::optional<LedgerBreach> assert_ledger(const Trace& trace, const Ledger& led,
                                          const BlockModelParams& params);

// Text serialisation: one line per step "i guest k j host candidates_remaining";
// embeddings as "guest host" lines.
void write_trace(const Trace& trace, std::ostream& out);
void write_embedding(const EmbeddingMap& m, std::ostream& out);
EmbeddingMap read_embedding(std::istream& in, int guest_count);

} // namespace uniblock
