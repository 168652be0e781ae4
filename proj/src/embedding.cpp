#include "uniblock/embedding.hpp"

#include <unordered_set>

namespace uniblock {

namespace {

template <typename HasEdge>
VerifyResult verify_impl(const Graph& h, int host_n, HasEdge&& host_has_edge,
                         const EmbeddingMap& m) {
  VerifyResult r;
  const int n = h.vertex_count();
  if (static_cast<int>(m.assignment.size()) != n) {
    r.status = VerifyStatus::unassigned_vertex;
    r.u = static_cast<int>(m.assignment.size());
    return r;
  }
  for (int x = 0; x < n; ++x) {
    if (m.assignment[x] == EmbeddingMap::kUnassigned || m.assignment[x] < 0 ||
        m.assignment[x] >= host_n) {
      r.status = VerifyStatus::unassigned_vertex;
      r.u = x;
      return r;
    }
  }
  std::unordered_set<int> seen;
  seen.reserve(n * 2);
  for (int x = 0; x < n; ++x) {
    if (!seen.insert(m.assignment[x]).second) {
      r.status = VerifyStatus::not_injective;
      r.u = x;
      r.v = m.assignment[x];
      return r;
    }
  }
  for (int x = 0; x < n; ++x) {
    for (int y : h.neighbors(x)) {
      if (y <= x) continue;
      if (!host_has_edge(m.assignment[x], m.assignment[y])) {
        r.status = VerifyStatus::missing_edge;
        r.u = x;
        r.v = y;
        return r;
      }
    }
  }
  return r;
}

} // namespace

VerifyResult verify_embedding(const Graph& h, const Graph& host, const EmbeddingMap& m) {
  return verify_impl(
      h, host.vertex_count(), [&](int a, int b) { return host.has_edge(a, b); }, m);
}

VerifyResult verify_embedding(const Graph& h, const BitMatrix& host_adj, const EmbeddingMap& m) {
  return verify_impl(
      h, static_cast<int>(host_adj.size()),
      [&](int a, int b) { return host_adj.test(static_cast<std::size_t>(a), static_cast<std::size_t>(b)); },
      m);
}

std::string VerifyResult::message() const {
  switch (status) {
  case VerifyStatus::ok:
    return "ok";
  case VerifyStatus::unassigned_vertex:
    return "unassigned vertex " + std::to_string(u);
  case VerifyStatus::not_injective:
    return "not injective: guest " + std::to_string(u) + " reuses host " + std::to_string(v);
  case VerifyStatus::missing_edge:
    return "guest edge (" + std::to_string(u) + "," + std::to_string(v) +
           ") has no host edge between its images";
  }
  return "unknown";
}

} // namespace uniblock
