#include "uniblock/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "uniblock/analysis.hpp"
#include "uniblock/edge_list_io.hpp"
#include "uniblock/errors.hpp"

namespace uniblock {

using nlohmann::json;

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

json overrides_to_json(const BlockModelOverrides& o) {
  json j = json::object();
  if (o.block_constant) j["block_constant"] = *o.block_constant;
  if (o.prob_boost) j["prob_boost"] = *o.prob_boost;
  if (o.subblock_count) j["subblock_count"] = *o.subblock_count;
  return j;
}

BlockModelOverrides overrides_from_json(const json& j) {
  BlockModelOverrides o;
  if (j.contains("block_constant")) o.block_constant = j["block_constant"].get<double>();
  if (j.contains("prob_boost")) o.prob_boost = j["prob_boost"].get<double>();
  if (j.contains("subblock_count")) o.subblock_count = j["subblock_count"].get<int>();
  return o;
}

} // namespace

std::string ExperimentConfig::to_json_string() const {
  json j;
  j["n"] = n;
  j["d"] = d;
  j["overrides"] = overrides_to_json(overrides);
  j["host_seeds"] = host_seeds;
  j["host_vertex_cap"] = host_vertex_cap;
  json corpus_json = json::array();
  for (const auto& spec : corpus) {
    json s;
    s["family"] = family_name(spec.family);
    s["n"] = spec.n;
    s["d"] = spec.d;
    s["count"] = spec.count;
    s["seed"] = spec.seed;
    s["mode"] = spec.mode == RandomMode::full ? "full" : "varied";
    corpus_json.push_back(s);
  }
  j["corpus"] = corpus_json;
  j["embed"] = {
      {"choice", embed_options.choice == EmbedOptions::Choice::lowest_index ? "lowest_index"
                                                                            : "seeded_random"},
      {"choice_seed", embed_options.choice_seed}};
  j["assert_level"] = assert_level == AssertLevel::strict ? "strict" : "diagnostic";
  j["save_embeddings"] = save_embeddings;
  j["save_traces"] = save_traces;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    cfg.n = j.at("n").get<std::int64_t>();
    cfg.d = j.at("d").get<int>();
    if (j.contains("overrides")) cfg.overrides = overrides_from_json(j["overrides"]);
    cfg.host_seeds = j.at("host_seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("host_vertex_cap")) cfg.host_vertex_cap = j["host_vertex_cap"].get<std::int64_t>();
    for (const auto& s : j.at("corpus")) {
      CorpusSpec spec;
      spec.family = family_from_string(s.at("family").get<std::string>());
      spec.n = s.contains("n") ? s["n"].get<int>() : static_cast<int>(cfg.n);
      spec.d = s.contains("d") ? s["d"].get<int>() : cfg.d;
      spec.count = s.contains("count") ? s["count"].get<int>() : 1;
      spec.seed = s.contains("seed") ? s["seed"].get<std::uint64_t>() : 0;
      if (s.contains("mode")) {
        std::string m = s["mode"].get<std::string>();
        if (m != "full" && m != "varied")
          throw PreconditionError("config: corpus mode must be \"full\" or \"varied\"");
        spec.mode = m == "full" ? RandomMode::full : RandomMode::varied;
      }
      cfg.corpus.push_back(spec);
    }
    if (j.contains("embed")) {
      std::string c = j["embed"].value("choice", "lowest_index");
      if (c != "lowest_index" && c != "seeded_random")
        throw PreconditionError("config: embed choice must be lowest_index or seeded_random");
      cfg.embed_options.choice = c == "lowest_index" ? EmbedOptions::Choice::lowest_index
                                                     : EmbedOptions::Choice::seeded_random;
      cfg.embed_options.choice_seed = j["embed"].value("choice_seed", 0ULL);
    }
    if (j.contains("assert_level")) {
      std::string a = j["assert_level"].get<std::string>();
      if (a != "strict" && a != "diagnostic")
        throw PreconditionError("config: assert_level must be strict or diagnostic");
      cfg.assert_level = a == "strict" ? AssertLevel::strict : AssertLevel::diagnostic;
    }
    cfg.save_embeddings = j.value("save_embeddings", true);
    cfg.save_traces = j.value("save_traces", false);
    return cfg;
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_string(ss.str());
}

std::uint64_t ExperimentConfig::config_hash() const {
  const std::string canonical =
      json::parse(to_json_string()).dump() + "|format" + std::to_string(kFormatVersion);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string params_json(const BlockModelParams& p) {
  json j;
  j["n"] = p.n;
  j["d"] = p.d;
  j["levels"] = p.levels;
  j["subblock_count"] = p.subblock_count;
  j["block_constant"] = p.block_constant;
  j["block_constant_effective"] = p.effective_block_constant();
  j["block_constant_overridden"] = p.block_constant_overridden;
  j["prob_boost"] = p.prob_boost;
  j["prob_boost_overridden"] = p.prob_boost_overridden;
  j["subblock_count_overridden"] = p.subblock_count_overridden;
  j["delta"] = p.delta;
  j["prob"] = p.prob;
  j["block_sizes"] = p.block_sizes;
  j["subblock_sizes"] = p.subblock_sizes;
  j["block_offsets"] = p.block_offsets;
  j["total_vertices"] = p.total_vertices;
  j["expected_edges"] = expected_edges(p);
  return j.dump(2);
}

std::string params_table(const BlockModelParams& p) {
  std::ostringstream out;
  out << "random block model parameters\n";
  out << "  n = " << p.n << ", d = " << p.d << "\n";
  out << "  N (blocks)          = " << p.levels << "\n";
  out << "  J (sub-blocks each) = " << p.subblock_count
      << (p.subblock_count_overridden ? "  [override]" : "") << "\n";
  out << "  block constant      = " << fmt(p.block_constant, "%g") << " * 3^d = "
      << fmt(p.effective_block_constant(), "%g")
      << (p.block_constant_overridden ? "  [override]" : "  [default]") << "\n";
  out << "  prob boost          = " << fmt(p.prob_boost, "%g")
      << (p.prob_boost_overridden ? "  [override]" : "  [default]") << "\n";
  out << "  delta (degree bands):\n";
  for (int i = 1; i <= p.levels; ++i)
    out << "    delta_" << i << " = " << fmt(p.delta_at(i), "%.6g") << "\n";
  out << "    delta_" << (p.levels + 1) << " = 0\n";
  out << "  p matrix:\n";
  for (int i = 1; i <= p.levels; ++i) {
    out << "   ";
    for (int k = 1; k <= p.levels; ++k) out << ' ' << fmt(p.p(i, k), "%.6g");
    out << "\n";
  }
  out << "  blocks:\n";
  for (int k = 1; k <= p.levels; ++k) {
    out << "    |W_" << k << "| = " << p.block_size(k) << "  (sub-blocks: " << p.subblock_size(k, 1);
    if (p.subblock_count >= 2) out << ", " << p.subblock_size(k, 2);
    if (p.subblock_count >= 3) out << ", ..., " << p.subblock_size(k, p.subblock_count);
    out << ")\n";
  }
  out << "  total vertices  = " << p.total_vertices << "\n";
  out << "  expected edges  = " << fmt(expected_edges(p), "%.6g") << "\n";
  out << "  checks:\n";
  for (const auto& check : check_block_model(p)) {
    out << "    [" << (check.pass ? "pass" : (check.warn ? "warn" : "FAIL")) << "] " << check.name;
    if (!check.detail.empty()) out << ": " << check.detail;
    out << "\n";
  }
  return out.str();
}

std::string bounds_csv(const std::vector<double>& ns, int d) {
  std::ostringstream out;
  out << "n,lower_bound,budget,model_edge_bound,budget_over_lower,normalized_gap\n";
  for (double n : ns) {
    const double lower = lower_bound_edges(n, d);
    const double budget = universality_budget(n, d);
    const double model = model_edge_bound(n, d);
    const double ratio = budget / lower;
    const double polylog =
        std::pow(std::log(n), 2.0 / d) * std::pow(std::log(std::log(n)), 5.0);
    out << fmt(n, "%.10g") << ',' << fmt(lower, "%.10g") << ',' << fmt(budget, "%.10g") << ','
        << fmt(model, "%.10g") << ',' << fmt(ratio, "%.10g") << ','
        << fmt(ratio / polylog, "%.10g") << "\n";
  }
  return out.str();
}

namespace {

struct CorpusInstanceRecord {
  Graph graph;
  DegeneracyResult order;
  std::string family;
  std::string file;
  int index = 0;
};

std::string guest_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "guests/g_%04d.edges", index);
  return buf;
}

std::string run_file_name(const char* dir, std::uint64_t seed, int index, const char* ext) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s/s%llu_g%04d.%s", dir,
                static_cast<unsigned long long>(seed), index, ext);
  return buf;
}

} // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir) {
  if (config.host_seeds.empty()) throw PreconditionError("experiment: no host seeds given");
  if (config.corpus.empty()) throw PreconditionError("experiment: empty corpus");
  {
    auto seeds = config.host_seeds;
    std::sort(seeds.begin(), seeds.end());
    if (std::adjacent_find(seeds.begin(), seeds.end()) != seeds.end())
      throw PreconditionError("experiment: duplicate host seeds");
  }
  for (const auto& spec : config.corpus)
    if (spec.n > config.n)
      throw PreconditionError("experiment: corpus guests larger than the model size n");

  const BlockModelParams params = derive_params(config.n, config.d, config.overrides);
  if (config.assert_level == AssertLevel::strict && !params.default_constants())
    throw PreconditionError(
        "experiment: strict assertion level requires default model constants");

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  fs::create_directories(out_dir / "guests");
  if (config.save_embeddings) fs::create_directories(out_dir / "embeddings");
  if (config.save_traces) fs::create_directories(out_dir / "traces");

  {
    std::ofstream cfg_out(out_dir / "config.json");
    cfg_out << config.to_json_string() << "\n";
    std::ofstream params_out(out_dir / "params.json");
    params_out << params_json(params) << "\n";
  }

  // Materialise the corpus once; guest degeneracy orders are recomputed
  // here and reused across hosts.
  std::vector<CorpusInstanceRecord> corpus;
  for (const auto& spec : config.corpus) {
    for (int i = 0; i < spec.count; ++i) {
      CorpusInstanceRecord rec;
      rec.graph = corpus_instance(spec, i);
      rec.order = degeneracy_order(rec.graph);
      rec.family = family_name(spec.family);
      rec.index = static_cast<int>(corpus.size());
      rec.file = guest_file_name(rec.index);
      if (rec.order.degeneracy > params.d)
        throw PreconditionError("experiment: corpus guest " + std::to_string(rec.index) +
                                " has degeneracy " + std::to_string(rec.order.degeneracy) +
                                " > d = " + std::to_string(params.d));
      write_edge_list_file(rec.graph, out_dir / rec.file);
      corpus.push_back(std::move(rec));
    }
  }

  const Ledger led = ledger(params);
  ExperimentSummary summary;

  std::vector<std::uint64_t> seeds = config.host_seeds;
  std::sort(seeds.begin(), seeds.end());

  for (std::uint64_t seed : seeds) {
    SampleOptions sample_options;
    sample_options.vertex_cap = config.host_vertex_cap;
    const HostGraph host = sample_host(params, seed, sample_options);
    const EdgeAudit audit = audit_edges(host);

    HostSummary hs;
    hs.seed = seed;
    hs.vertices = host.vertex_count();
    hs.edges = host.edge_count();
    hs.audit_max_abs_z = audit.max_abs_z;
    hs.audit_flagged = audit.flagged;
    hs.scaled_edge_bound = scaled_model_edge_bound(params);
    hs.edges_below_bound = static_cast<double>(host.edge_count()) <= hs.scaled_edge_bound;
    hs.guests = static_cast<int>(corpus.size());

    for (const auto& rec : corpus) {
      const auto t0 = std::chrono::steady_clock::now();
      ExperimentRow row;
      row.host_seed = seed;
      row.guest_index = rec.index;
      row.family = rec.family;
      row.guest_vertices = rec.graph.vertex_count();
      row.guest_edges = static_cast<std::int64_t>(rec.graph.edge_count());
      row.guest_degeneracy = rec.order.degeneracy;

      EmbedResult result = embed(rec.graph, rec.order, host, config.embed_options);
      row.success = result.success;
      if (result.success) {
        const VerifyResult check = verify_embedding(rec.graph, host.adjacency(), result.embedding);
        if (!check.ok())
          throw InternalError("experiment: embedding failed re-verification: " + check.message());
        row.verified = true;
        ++hs.successes;
      } else {
        row.fail_step = result.failure->step;
        row.fail_guest = result.failure->guest;
        row.fail_band = result.failure->band;
      }

      // Occupancy, ledger and NB margins over the (possibly partial) trace.
      PartialEmbedding pe =
          replay_trace(result.trace, rec.graph.vertex_count(), params, result.trace.size());
      for (int k = 1; k <= params.levels; ++k) {
        for (int j = 1; j <= params.subblock_count; ++j) {
          const std::int64_t occ = pe.occupancy[k - 1][j - 1];
          if (occ == 0) continue;
          row.max_occupancy_ratio =
              std::max(row.max_occupancy_ratio,
                       static_cast<double>(occ) / static_cast<double>(params.subblock_size(k, j)));
          row.ledger_max_ratio =
              std::max(row.ledger_max_ratio, static_cast<double>(occ) / led.at(k, j));
        }
      }
      row.ledger_ok = !assert_ledger(result.trace, led, params).has_value();
      row.nb_ok = true;
      for (int k = 1; k <= params.levels && row.nb_ok; ++k) {
        for (int j = 1; j <= params.subblock_count && row.nb_ok; ++j) {
          if (pe.occupancy[k - 1][j - 1] == 0) continue;
          const BackMultiset b = collect_back_multiset(pe, rec.graph, rec.order, params, k, j);
          row.nb_ok = check_well_behaved(b, params).ok();
        }
      }
      if (config.assert_level == AssertLevel::strict && (!row.ledger_ok || !row.nb_ok))
        throw InternalError("experiment: strict assertion breach at host seed " +
                            std::to_string(seed) + ", guest " + std::to_string(rec.index) +
                            (!row.ledger_ok ? " (ledger)" : " (well-behavedness)"));

      if (row.success && config.save_embeddings) {
        std::ofstream out(out_dir / run_file_name("embeddings", seed, rec.index, "txt"));
        write_embedding(result.embedding, out);
      }
      if (config.save_traces) {
        std::ofstream out(out_dir / run_file_name("traces", seed, rec.index, "txt"));
        write_trace(result.trace, out);
      }

      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                        .count();
      summary.rows.push_back(std::move(row));
    }
    summary.hosts.push_back(hs);
  }

  std::sort(summary.rows.begin(), summary.rows.end(), [](const auto& a, const auto& b) {
    return a.host_seed != b.host_seed ? a.host_seed < b.host_seed
                                      : a.guest_index < b.guest_index;
  });

  summary.csv_path = out_dir / "results.csv";
  {
    std::ofstream csv(summary.csv_path);
    csv << "host_seed,guest_index,family,guest_vertices,guest_edges,guest_degeneracy,success,"
           "verified,fail_step,fail_guest,fail_band,max_occupancy_ratio,ledger_max_ratio,"
           "ledger_ok,nb_ok,host_vertices,host_edges,audit_max_abs_z,audit_flagged\n";
    for (const auto& row : summary.rows) {
      const HostSummary* hs = nullptr;
      for (const auto& h : summary.hosts)
        if (h.seed == row.host_seed) hs = &h;
      csv << row.host_seed << ',' << row.guest_index << ',' << row.family << ','
          << row.guest_vertices << ',' << row.guest_edges << ',' << row.guest_degeneracy << ','
          << (row.success ? 1 : 0) << ',' << (row.verified ? 1 : 0) << ',' << row.fail_step << ','
          << row.fail_guest << ',' << row.fail_band << ',' << fmt(row.max_occupancy_ratio) << ','
          << fmt(row.ledger_max_ratio) << ',' << (row.ledger_ok ? 1 : 0) << ','
          << (row.nb_ok ? 1 : 0) << ',' << hs->vertices << ',' << hs->edges << ','
          << fmt(hs->audit_max_abs_z) << ',' << (hs->audit_flagged ? 1 : 0) << "\n";
    }
  }

  summary.manifest_path = out_dir / "manifest.json";
  {
    json manifest;
    manifest["format_version"] = kFormatVersion;
    manifest["tool_version"] = kToolVersion;
    manifest["config"] = json::parse(config.to_json_string());
    char hash_buf[32];
    std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                  static_cast<unsigned long long>(config.config_hash()));
    manifest["config_hash"] = hash_buf;
    manifest["params"] = json::parse(params_json(params));
    json hosts_json = json::array();
    for (const auto& h : summary.hosts) {
      json hj;
      hj["seed"] = h.seed;
      hj["vertices"] = h.vertices;
      hj["edges"] = h.edges;
      hj["audit_max_abs_z"] = h.audit_max_abs_z;
      hj["audit_flagged"] = h.audit_flagged;
      hj["scaled_edge_bound"] = h.scaled_edge_bound;
      hj["edges_below_bound"] = h.edges_below_bound;
      hj["successes"] = h.successes;
      hj["guests"] = h.guests;
      hosts_json.push_back(hj);
    }
    manifest["hosts"] = hosts_json;
    json guests_json = json::array();
    for (const auto& rec : corpus) {
      json gj;
      gj["index"] = rec.index;
      gj["family"] = rec.family;
      gj["file"] = rec.file;
      gj["vertices"] = rec.graph.vertex_count();
      gj["edges"] = rec.graph.edge_count();
      gj["degeneracy"] = rec.order.degeneracy;
      guests_json.push_back(gj);
    }
    manifest["guests"] = guests_json;
    int successes = 0;
    for (const auto& row : summary.rows) successes += row.success ? 1 : 0;
    manifest["totals"] = {{"rows", summary.rows.size()}, {"successes", successes}};
    std::ofstream out(summary.manifest_path);
    out << manifest.dump(2) << "\n";
  }

  double total_ms = 0.0;
  for (const auto& row : summary.rows) total_ms += row.wall_ms;
  std::cerr << "experiment: " << summary.rows.size() << " rows, "
            << fmt(total_ms, "%.1f") << " ms embedding time, results in " << out_dir.string()
            << "\n";
  return summary;
}

} // namespace uniblock
