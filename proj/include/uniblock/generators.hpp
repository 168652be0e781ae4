#pragma once

#include <cstdint>
#include <string>

#include "uniblock/graph.hpp"

namespace uniblock {

enum class Family { random_degenerate, bounded_degree, star, complete_bipartite, d_ary_tree };

Family family_from_string(const std::string& name);
std::string family_name(Family family);

enum class RandomMode { full, varied };

/// Random d-degenerate graph built along the natural vertex order: vertex i
/// receives exactly min(d, i) random earlier neighbours ("full") or a
/// uniform count in {0..min(d, i)} ("varied"). The natural order witnesses
/// d-degeneracy.
Graph gen_random_degenerate(int n, int d, std::uint64_t seed, RandomMode mode);

/// Connected d-degenerate graph with maximum degree at most 2d+1: each new
/// vertex joins between 1 and d earlier vertices whose running degree is at
/// most 2d, re-checking eligibility after every added edge. At least one
/// eligible vertex always exists, so the construction never stalls.
Graph gen_bounded_degree_degenerate(int n, int d, std::uint64_t seed);

/// Deterministic extremal families: star K_{1,n-1}, complete bipartite
/// K_{d,n-d}, and the complete d-ary tree on n vertices.
Graph gen_extremal(Family family, int n, int d);

struct CorpusSpec {
  Family family = Family::random_degenerate;
  int n = 0;
  int d = 0;
  int count = 1;
  std::uint64_t seed = 0;
  RandomMode mode = RandomMode::varied;
};

/// Instance `index` of a corpus: random families draw from the stream
/// derived from (seed, index); deterministic families ignore the seed.
Graph corpus_instance(const CorpusSpec& spec, int index);

} // namespace uniblock
