#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "uniblock/graph.hpp"

namespace uniblock {

/// Edge-list text format: first line "n m", then m lines "u v" with u < v.
/// Writing emits edges sorted lexicographically, so write(read(x)) == x for
/// canonical input and read(write(g)) == g always.
Graph read_edge_list(std::istream& in);
void write_edge_list(const Graph& g, std::ostream& out);

Graph read_edge_list_file(const std::filesystem::path& path);
void write_edge_list_file(const Graph& g, const std::filesystem::path& path);

std::string write_edge_list_string(const Graph& g);
Graph read_edge_list_string(const std::string& text);

} // namespace uniblock
