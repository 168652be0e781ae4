#pragma once

#include <string>
#include <vector>

#include "uniblock/bitset.hpp"
#include "uniblock/graph.hpp"

namespace uniblock {

/// Injective partial map from guest vertices to host vertices;
/// kUnassigned marks guests without an image.
struct EmbeddingMap {
  static constexpr int kUnassigned = -1;

  std::vector<int> assignment;

  explicit EmbeddingMap(int guest_count = 0) : assignment(guest_count, kUnassigned) {}

  bool fully_assigned() const {
    for (int a : assignment)
      if (a == kUnassigned) return false;
    return true;
  }
};

enum class VerifyStatus { ok, unassigned_vertex, not_injective, missing_edge };

struct VerifyResult {
  VerifyStatus status = VerifyStatus::ok;
  int u = -1; // first offending guest vertex (pair member / duplicate target)
  int v = -1;

  bool ok() const { return status == VerifyStatus::ok; }
  std::string message() const;
};

/// Checks that m maps every guest vertex, injectively, and that every guest
/// edge lands on a host edge. Reports the first violation in vertex order.
VerifyResult verify_embedding(const Graph& h, const Graph& host, const EmbeddingMap& m);
VerifyResult verify_embedding(const Graph& h, const BitMatrix& host_adj, const EmbeddingMap& m);

} // namespace uniblock
