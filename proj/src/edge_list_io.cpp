#include "uniblock/edge_list_io.hpp"

#include <fstream>
#include <sstream>

#include "uniblock/errors.hpp"

namespace uniblock {

namespace {

// Strict "int int" line parse; rejects trailing junk.
bool parse_two_ints(const std::string& line, long long& a, long long& b) {
  std::istringstream ss(line);
  if (!(ss >> a >> b)) return false;
  std::string rest;
  if (ss >> rest) return false;
  return true;
}

} // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  long long n = 0, m = 0;
  if (!std::getline(in, line) || !parse_two_ints(line, n, m))
    throw PreconditionError("edge list: missing or malformed header (expected \"n m\")");
  if (n < 0 || m < 0) throw PreconditionError("edge list: negative counts in header");
  if (n > (1LL << 31) - 1)
    throw PreconditionError("edge list: vertex count out of range: " + std::to_string(n));
  if (m > n * (n - 1) / 2)
    throw PreconditionError("edge list: edge count exceeds the simple-graph maximum");

  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!std::getline(in, line))
      throw PreconditionError("edge list: expected " + std::to_string(m) + " edges, got " +
                              std::to_string(i));
    long long u = 0, v = 0;
    if (!parse_two_ints(line, u, v))
      throw PreconditionError("edge list: malformed line: \"" + line + "\"");
    if (u == v) throw PreconditionError("edge list: self-loop \"" + line + "\"");
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw PreconditionError("edge list: index out of range: \"" + line + "\"");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  // Graph construction rejects duplicates (including "u v" + "v u" pairs).
  return Graph(static_cast<int>(n), edges);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Graph read_edge_list_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path.string());
  return read_edge_list(in);
}

void write_edge_list_file(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write " + path.string());
  write_edge_list(g, out);
}

std::string write_edge_list_string(const Graph& g) {
  std::ostringstream ss;
  write_edge_list(g, ss);
  return ss.str();
}

Graph read_edge_list_string(const std::string& text) {
  std::istringstream ss(text);
  return read_edge_list(ss);
}

} // namespace uniblock
