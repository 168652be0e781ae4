#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uniblock/block_model.hpp"
#include "uniblock/embedder.hpp"
#include "uniblock/generators.hpp"

namespace uniblock {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kFormatVersion = 1;

enum class AssertLevel {
  strict,    // default-constant runs: ledger and NB violations are hard errors
  diagnostic // margins measured and reported only
};

struct ExperimentConfig {
  std::int64_t n = 0;
  int d = 0;
  BlockModelOverrides overrides;
  std::vector<std::uint64_t> host_seeds;
  std::int64_t host_vertex_cap = 50000;
  std::vector<CorpusSpec> corpus;
  EmbedOptions embed_options;
  AssertLevel assert_level = AssertLevel::diagnostic;
  bool save_embeddings = true;
  bool save_traces = false;

  std::string to_json_string() const;
  static ExperimentConfig from_json_string(const std::string& text);
  static ExperimentConfig from_json_file(const std::filesystem::path& path);

  /// FNV-1a over the canonical JSON dump plus the format version.
  std::uint64_t config_hash() const;
};

struct ExperimentRow {
  std::uint64_t host_seed = 0;
  int guest_index = 0;
  std::string family;
  int guest_vertices = 0;
  std::int64_t guest_edges = 0;
  int guest_degeneracy = 0;
  bool success = false;
  bool verified = false;
  int fail_step = -1;
  int fail_guest = -1;
  int fail_band = -1;
  double max_occupancy_ratio = 0.0; // max over (k,j) of occupancy / |W_{k,j}|
  double ledger_max_ratio = 0.0;    // max over occupied (k,j) of occupancy / L_{k,j}
  bool ledger_ok = false;
  bool nb_ok = false;
  double wall_ms = 0.0; // measured, reported on stderr; never serialized
};

struct HostSummary {
  std::uint64_t seed = 0;
  std::int64_t vertices = 0;
  std::int64_t edges = 0;
  double audit_max_abs_z = 0.0;
  bool audit_flagged = false;
  double scaled_edge_bound = 0.0;
  bool edges_below_bound = false;
  int successes = 0;
  int guests = 0;
};

struct ExperimentSummary {
  std::vector<ExperimentRow> rows;
  std::vector<HostSummary> hosts;
  std::filesystem::path csv_path;
  std::filesystem::path manifest_path;
};

/// Runs the full sweep: per host seed, sample one host, embed every corpus
/// guest against it, verify every success, audit edges, and write
/// results.csv + manifest.json (+ guest and embedding artifacts) under
/// out_dir. Identical configs produce byte-identical CSV and manifest;
/// wall-clock timing goes to stderr only.
ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir);

/// Human-readable parameter table with the structural checks appended.
std::string params_table(const BlockModelParams& params);

/// CSV over the given guest sizes: the counting lower bound, the
/// universality budget, the model edge bound, their ratio, and the ratio
/// with the budget's polylog factor divided out (flat in n exactly when the
/// gap is polylogarithmic).
std::string bounds_csv(const std::vector<double>& ns, int d);

std::string params_json(const BlockModelParams& params);

} // namespace uniblock
