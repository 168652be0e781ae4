#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uniblock/analysis.hpp"
#include "uniblock/block_model.hpp"
#include "uniblock/edge_list_io.hpp"
#include "uniblock/embedder.hpp"
#include "uniblock/errors.hpp"
#include "uniblock/experiment.hpp"
#include "uniblock/generators.hpp"

namespace fs = std::filesystem;
using namespace uniblock;

namespace {

struct ModelFlags {
  std::int64_t n = 0;
  int d = 0;
  double block_constant = -1.0;
  double prob_boost = -1.0;
  int subblocks = -1;

  BlockModelOverrides overrides() const {
    BlockModelOverrides o;
    if (block_constant >= 0) o.block_constant = block_constant;
    if (prob_boost >= 0) o.prob_boost = prob_boost;
    if (subblocks >= 0) o.subblock_count = subblocks;
    return o;
  }
};

void add_model_flags(CLI::App* cmd, ModelFlags& flags) {
  cmd->add_option("--n", flags.n, "guest size n")->required();
  cmd->add_option("--d", flags.d, "degeneracy parameter d")->required();
  cmd->add_option("--block-constant", flags.block_constant,
                  "override block size coefficient c in |W_k| = ceil(c*3^d*n^(1-d^-k))");
  cmd->add_option("--prob-boost", flags.prob_boost,
                  "override the probability boost factor (default (ln n)^(2/d)(ln ln n)^3)");
  cmd->add_option("--subblocks", flags.subblocks, "override sub-block count J");
}

// Reads n, d and the recorded overrides back from a params.json written by
// `sample` or `experiment`.
struct ParamsFile {
  std::int64_t n = 0;
  int d = 0;
  BlockModelOverrides overrides;
};

ParamsFile read_params_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open params file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    ParamsFile pf;
    pf.n = j.at("n").get<std::int64_t>();
    pf.d = j.at("d").get<int>();
    if (j.value("block_constant_overridden", false))
      pf.overrides.block_constant = j.at("block_constant").get<double>();
    if (j.value("prob_boost_overridden", false))
      pf.overrides.prob_boost = j.at("prob_boost").get<double>();
    if (j.value("subblock_count_overridden", false))
      pf.overrides.subblock_count = j.at("subblock_count").get<int>();
    return pf;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("params file " + path.string() + ": " + e.what());
  }
}

std::vector<double> log_spaced(double from, double to, int points) {
  if (from <= 0 || to < from || points < 1)
    throw PreconditionError("bounds: need 0 < n-from <= n-to and points >= 1");
  std::vector<double> ns;
  if (points == 1) {
    ns.push_back(from);
    return ns;
  }
  const double lf = std::log(from), lt = std::log(to);
  for (int i = 0; i < points; ++i)
    ns.push_back(std::exp(lf + (lt - lf) * i / (points - 1)));
  return ns;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"random block model construction, greedy sub-block embedding and experiments "
               "for degenerate-guest universality"};
  app.require_subcommand(1);

  // params
  auto* cmd_params = app.add_subcommand("params", "derive and print all model parameters");
  ModelFlags params_flags;
  add_model_flags(cmd_params, params_flags);

  // sample
  auto* cmd_sample = app.add_subcommand("sample", "sample a host graph and write its artifacts");
  ModelFlags sample_flags;
  add_model_flags(cmd_sample, sample_flags);
  std::uint64_t sample_seed = 0;
  std::string sample_out;
  std::int64_t sample_cap = 50000;
  cmd_sample->add_option("--seed", sample_seed, "host RNG seed")->required();
  cmd_sample->add_option("--out", sample_out, "output prefix (.edges/.labels/.params.json)")
      ->required();
  cmd_sample->add_option("--host-cap", sample_cap, "vertex cap guard");

  // gen
  auto* cmd_gen = app.add_subcommand("gen", "generate a guest corpus");
  std::string gen_family, gen_out, gen_mode = "varied";
  int gen_n = 0, gen_d = 0, gen_count = 1;
  std::uint64_t gen_seed = 0;
  cmd_gen->add_option("--family", gen_family,
                      "random_degenerate | bounded_degree | star | complete_bipartite | d_ary_tree")
      ->required();
  cmd_gen->add_option("--n", gen_n, "vertices per guest")->required();
  cmd_gen->add_option("--d", gen_d, "degeneracy parameter")->required();
  cmd_gen->add_option("--count", gen_count, "number of instances");
  cmd_gen->add_option("--seed", gen_seed, "corpus seed");
  cmd_gen->add_option("--mode", gen_mode, "random_degenerate back-degree mode: full | varied");
  cmd_gen->add_option("--out", gen_out, "output directory")->required();

  // embed
  auto* cmd_embed = app.add_subcommand("embed", "embed one guest into a regenerated host");
  std::string embed_guest, embed_params, embed_out, embed_choice = "lowest";
  std::uint64_t embed_host_seed = 0, embed_choice_seed = 0;
  std::int64_t embed_cap = 50000;
  cmd_embed->add_option("--guest", embed_guest, "guest edge-list file")->required();
  cmd_embed->add_option("--params", embed_params, "params.json of the host model")->required();
  cmd_embed->add_option("--host-seed", embed_host_seed, "host RNG seed")->required();
  cmd_embed->add_option("--out", embed_out, "output prefix (.embedding/.trace)")->required();
  cmd_embed->add_option("--choice", embed_choice, "candidate tie-break: lowest | random");
  cmd_embed->add_option("--choice-seed", embed_choice_seed, "seed for --choice random");
  cmd_embed->add_option("--host-cap", embed_cap, "vertex cap guard");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "re-verify an embedding from files");
  std::string verify_guest, verify_host, verify_embedding_file;
  cmd_verify->add_option("--guest", verify_guest, "guest edge-list file")->required();
  cmd_verify->add_option("--host", verify_host, "host edge-list file")->required();
  cmd_verify->add_option("--embedding", verify_embedding_file, "embedding file")->required();

  // audit
  auto* cmd_audit = app.add_subcommand("audit", "sample hosts and audit per-pair edge counts");
  ModelFlags audit_flags;
  add_model_flags(cmd_audit, audit_flags);
  std::uint64_t audit_seed = 0;
  int audit_trials = 1;
  double audit_threshold = 5.0;
  std::int64_t audit_cap = 50000;
  cmd_audit->add_option("--seed", audit_seed, "base host RNG seed")->required();
  cmd_audit->add_option("--trials", audit_trials, "number of consecutive seeds to audit");
  cmd_audit->add_option("--z-threshold", audit_threshold, "|z| flag threshold");
  cmd_audit->add_option("--host-cap", audit_cap, "vertex cap guard");

  // bounds
  auto* cmd_bounds = app.add_subcommand("bounds", "emit the bound comparison table");
  int bounds_d = 0, bounds_points = 9;
  double bounds_from = 1e4, bounds_to = 1e8;
  std::string bounds_out;
  cmd_bounds->add_option("--d", bounds_d, "degeneracy parameter")->required();
  cmd_bounds->add_option("--n-from", bounds_from, "smallest n");
  cmd_bounds->add_option("--n-to", bounds_to, "largest n");
  cmd_bounds->add_option("--points", bounds_points, "log-spaced sample count (0 = empty table)");
  cmd_bounds->add_option("--out", bounds_out, "CSV file (default stdout)");

  // experiment
  auto* cmd_exp = app.add_subcommand("experiment", "run a seeded embedding sweep from a config");
  std::string exp_config, exp_out, exp_assert;
  cmd_exp->add_option("--config", exp_config, "experiment config JSON")->required();
  cmd_exp->add_option("--out", exp_out, "output directory")->required();
  cmd_exp->add_option("--assert-level", exp_assert,
                      "override the config's assertion level: strict | diagnostic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*cmd_params) {
      auto params = derive_params(params_flags.n, params_flags.d, params_flags.overrides());
      std::cout << params_table(params);
    } else if (*cmd_sample) {
      auto params = derive_params(sample_flags.n, sample_flags.d, sample_flags.overrides());
      SampleOptions opts;
      opts.vertex_cap = sample_cap;
      HostGraph host = sample_host(params, sample_seed, opts);
      write_edge_list_file(host.to_graph(), sample_out + ".edges");
      std::ofstream labels(sample_out + ".labels");
      write_labels(host, labels);
      std::ofstream pj(sample_out + ".params.json");
      pj << params_json(params) << "\n";
      std::cout << "host: " << host.vertex_count() << " vertices, " << host.edge_count()
                << " edges (seed " << sample_seed << ")\n";
    } else if (*cmd_gen) {
      CorpusSpec spec;
      spec.family = family_from_string(gen_family);
      spec.n = gen_n;
      spec.d = gen_d;
      spec.count = gen_count;
      spec.seed = gen_seed;
      if (gen_mode != "full" && gen_mode != "varied")
        throw PreconditionError("gen: --mode must be full or varied");
      spec.mode = gen_mode == "full" ? RandomMode::full : RandomMode::varied;
      fs::create_directories(gen_out);
      nlohmann::json manifest;
      manifest["family"] = gen_family;
      manifest["n"] = gen_n;
      manifest["d"] = gen_d;
      manifest["count"] = gen_count;
      manifest["seed"] = gen_seed;
      manifest["mode"] = gen_mode;
      std::vector<std::string> files;
      for (int i = 0; i < gen_count; ++i) {
        Graph g = corpus_instance(spec, i);
        char name[32];
        std::snprintf(name, sizeof(name), "g_%04d.edges", i);
        write_edge_list_file(g, fs::path(gen_out) / name);
        files.emplace_back(name);
      }
      manifest["files"] = files;
      std::ofstream mout(fs::path(gen_out) / "manifest.json");
      mout << manifest.dump(2) << "\n";
      std::cout << "wrote " << gen_count << " guests to " << gen_out << "\n";
    } else if (*cmd_embed) {
      Graph guest = read_edge_list_file(embed_guest);
      ParamsFile pf = read_params_file(embed_params);
      auto params = derive_params(pf.n, pf.d, pf.overrides);
      SampleOptions opts;
      opts.vertex_cap = embed_cap;
      HostGraph host = sample_host(params, embed_host_seed, opts);
      DegeneracyResult order = degeneracy_order(guest);
      EmbedOptions eopts;
      if (embed_choice == "random")
        eopts.choice = EmbedOptions::Choice::seeded_random;
      else if (embed_choice != "lowest")
        throw PreconditionError("embed: --choice must be lowest or random");
      eopts.choice_seed = embed_choice_seed;
      EmbedResult result = embed(guest, order, host, eopts);
      std::ofstream tout(embed_out + ".trace");
      write_trace(result.trace, tout);
      if (result.success) {
        std::ofstream eout(embed_out + ".embedding");
        write_embedding(result.embedding, eout);
        VerifyResult check = verify_embedding(guest, host.adjacency(), result.embedding);
        if (!check.ok()) throw InternalError("embedding failed re-verification: " + check.message());
        std::cout << "success: " << guest.vertex_count() << " guests embedded (trace "
                  << embed_out << ".trace)\n";
      } else {
        std::cout << "failure: step " << result.failure->step << ", guest vertex "
                  << result.failure->guest << ", band " << result.failure->band
                  << " had no free common neighbour in any sub-block\n";
      }
    } else if (*cmd_verify) {
      Graph guest = read_edge_list_file(verify_guest);
      Graph host = read_edge_list_file(verify_host);
      std::ifstream ein(verify_embedding_file);
      if (!ein) throw PreconditionError("cannot open " + verify_embedding_file);
      EmbeddingMap m = read_embedding(ein, guest.vertex_count());
      VerifyResult result = verify_embedding(guest, host, m);
      std::cout << result.message() << "\n";
      return result.ok() ? 0 : 2;
    } else if (*cmd_audit) {
      if (audit_trials < 1) throw PreconditionError("audit: --trials must be at least 1");
      auto params = derive_params(audit_flags.n, audit_flags.d, audit_flags.overrides());
      SampleOptions opts;
      opts.vertex_cap = audit_cap;
      std::cout << "seed,i,k,observed,expected,z\n";
      double worst_z = 0.0;
      bool any_flagged = false;
      for (int t = 0; t < audit_trials; ++t) {
        const std::uint64_t seed = audit_seed + static_cast<std::uint64_t>(t);
        HostGraph host = sample_host(params, seed, opts);
        EdgeAudit audit = audit_edges(host, audit_threshold);
        for (const auto& pa : audit.pairs) {
          char line[160];
          std::snprintf(line, sizeof(line), "%llu,%d,%d,%lld,%.6f,%.6f\n",
                        static_cast<unsigned long long>(seed), pa.i, pa.k,
                        static_cast<long long>(pa.observed), pa.expected, pa.z);
          std::cout << line;
        }
        worst_z = std::max(worst_z, audit.max_abs_z);
        any_flagged = any_flagged || audit.flagged;
        if (t == audit_trials - 1)
          std::cout << "total edges (last seed): " << audit.total_edges
                    << " (scaled model bound: " << scaled_model_edge_bound(params) << ")\n";
      }
      std::cout << "max |z| over " << audit_trials << " seed(s) = " << worst_z
                << (any_flagged ? "  FLAGGED" : "") << "\n";
    } else if (*cmd_bounds) {
      std::vector<double> ns =
          bounds_points == 0 ? std::vector<double>{} : log_spaced(bounds_from, bounds_to, bounds_points);
      std::string csv = bounds_csv(ns, bounds_d);
      if (bounds_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(bounds_out);
        if (!out) throw PreconditionError("cannot write " + bounds_out);
        out << csv;
      }
    } else if (*cmd_exp) {
      ExperimentConfig config = ExperimentConfig::from_json_file(exp_config);
      if (!exp_assert.empty()) {
        if (exp_assert != "strict" && exp_assert != "diagnostic")
          throw PreconditionError("experiment: --assert-level must be strict or diagnostic");
        config.assert_level =
            exp_assert == "strict" ? AssertLevel::strict : AssertLevel::diagnostic;
      }
      ExperimentSummary summary = run_experiment(config, exp_out);
      int successes = 0;
      for (const auto& row : summary.rows) successes += row.success ? 1 : 0;
      std::cout << "experiment: " << successes << "/" << summary.rows.size()
                << " embeddings succeeded; results in " << exp_out << "\n";
    }
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
