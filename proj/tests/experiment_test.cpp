#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "uniblock/analysis.hpp"
#include "uniblock/edge_list_io.hpp"
#include "uniblock/errors.hpp"
#include "uniblock/experiment.hpp"

using namespace uniblock;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.n = 100;
  cfg.d = 2;
  cfg.overrides.block_constant = 0.5;
  cfg.host_seeds = {3, 1, 2};
  CorpusSpec random_spec;
  random_spec.family = Family::random_degenerate;
  random_spec.n = 100;
  random_spec.d = 2;
  random_spec.count = 5;
  random_spec.seed = 11;
  CorpusSpec stars;
  stars.family = Family::star;
  stars.n = 100;
  stars.d = 1;
  stars.count = 2;
  CorpusSpec trees;
  trees.family = Family::d_ary_tree;
  trees.n = 60;
  trees.d = 3;
  trees.count = 2;
  cfg.corpus = {random_spec, stars, trees};
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("config JSON round trip and hashing") {
  ExperimentConfig cfg = small_config();
  cfg.overrides.prob_boost = 8.0;
  cfg.embed_options.choice = EmbedOptions::Choice::seeded_random;
  cfg.embed_options.choice_seed = 4;
  cfg.save_traces = true;

  ExperimentConfig back = ExperimentConfig::from_json_string(cfg.to_json_string());
  CHECK(back.n == cfg.n);
  CHECK(back.d == cfg.d);
  CHECK(back.overrides.block_constant == cfg.overrides.block_constant);
  CHECK(back.overrides.prob_boost == cfg.overrides.prob_boost);
  CHECK(back.host_seeds == cfg.host_seeds);
  CHECK(back.corpus.size() == cfg.corpus.size());
  CHECK(back.corpus[0].family == Family::random_degenerate);
  CHECK(back.corpus[0].count == 5);
  CHECK(back.embed_options.choice == EmbedOptions::Choice::seeded_random);
  CHECK(back.save_traces == true);
  CHECK(back.config_hash() == cfg.config_hash());

  ExperimentConfig other = cfg;
  other.host_seeds.push_back(99);
  CHECK(other.config_hash() != cfg.config_hash());

  CHECK_THROWS_AS(ExperimentConfig::from_json_string("{"), PreconditionError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_string("{}"), PreconditionError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_string(
                      R"({"n":100,"d":2,"host_seeds":[1],"corpus":[{"family":"bogus"}]})"),
                  PreconditionError);
}

TEST_CASE("run_experiment: full sweep on a dense small host") {
  ExperimentConfig cfg = small_config();
  const fs::path out = fs::temp_directory_path() / "uniblock_exp_test";
  fs::remove_all(out);
  ExperimentSummary summary = run_experiment(cfg, out);

  CHECK(summary.rows.size() == cfg.host_seeds.size() * 9);
  for (const auto& row : summary.rows) {
    CHECK(row.success);
    CHECK(row.verified);
    CHECK(row.fail_step == -1);
  }
  // rows sorted by (seed, guest)
  for (std::size_t i = 1; i < summary.rows.size(); ++i) {
    const auto& a = summary.rows[i - 1];
    const auto& b = summary.rows[i];
    CHECK((a.host_seed < b.host_seed ||
           (a.host_seed == b.host_seed && a.guest_index < b.guest_index)));
  }
  for (const auto& hs : summary.hosts) {
    CHECK(hs.successes == hs.guests);
    CHECK(!hs.audit_flagged);
    CHECK(hs.edges_below_bound);
  }

  // success rows re-verify from serialized artifacts alone
  const auto& row = summary.rows.front();
  Graph guest = read_edge_list_file(out / ("guests/g_000" + std::to_string(row.guest_index) +
                                           ".edges"));
  auto params = derive_params(cfg.n, cfg.d, cfg.overrides);
  HostGraph host = sample_host(params, row.host_seed);
  char name[64];
  std::snprintf(name, sizeof(name), "embeddings/s%llu_g%04d.txt",
                static_cast<unsigned long long>(row.host_seed), row.guest_index);
  std::ifstream ein(out / name);
  REQUIRE(ein);
  EmbeddingMap m = read_embedding(ein, guest.vertex_count());
  CHECK(verify_embedding(guest, host.adjacency(), m).ok());
}

TEST_CASE("run_experiment: reruns are byte-identical") {
  ExperimentConfig cfg = small_config();
  const fs::path out1 = fs::temp_directory_path() / "uniblock_exp_a";
  const fs::path out2 = fs::temp_directory_path() / "uniblock_exp_b";
  fs::remove_all(out1);
  fs::remove_all(out2);
  run_experiment(cfg, out1);
  run_experiment(cfg, out2);
  CHECK(slurp(out1 / "results.csv") == slurp(out2 / "results.csv"));
  CHECK(slurp(out1 / "manifest.json") == slurp(out2 / "manifest.json"));
  CHECK(slurp(out1 / "guests/g_0000.edges") == slurp(out2 / "guests/g_0000.edges"));
  CHECK(slurp(out1 / "results.csv").find("host_seed,guest_index,family") == 0);

  // seeded-random candidate choice is just as reproducible
  cfg.embed_options.choice = EmbedOptions::Choice::seeded_random;
  cfg.embed_options.choice_seed = 77;
  const fs::path out3 = fs::temp_directory_path() / "uniblock_exp_c";
  const fs::path out4 = fs::temp_directory_path() / "uniblock_exp_d";
  fs::remove_all(out3);
  fs::remove_all(out4);
  ExperimentSummary s3 = run_experiment(cfg, out3);
  run_experiment(cfg, out4);
  CHECK(slurp(out3 / "results.csv") == slurp(out4 / "results.csv"));
  // the aggregate rows may coincide across choice rules; the chosen host
  // vertices must not
  CHECK(slurp(out3 / "embeddings/s1_g0000.txt") != slurp(out1 / "embeddings/s1_g0000.txt"));
  CHECK(slurp(out3 / "embeddings/s1_g0000.txt") == slurp(out4 / "embeddings/s1_g0000.txt"));
  for (const auto& row : s3.rows) CHECK(row.success);
}

TEST_CASE("run_experiment: strict level demands default constants") {
  ExperimentConfig cfg = small_config();
  cfg.assert_level = AssertLevel::strict;
  CHECK_THROWS_AS(run_experiment(cfg, fs::temp_directory_path() / "uniblock_exp_strict"),
                  PreconditionError);
}

TEST_CASE("run_experiment: strict run at true constants") {
  ExperimentConfig cfg;
  cfg.n = 50; // single-block model at default constants
  cfg.d = 2;
  cfg.host_seeds = {7};
  CorpusSpec spec;
  spec.family = Family::random_degenerate;
  spec.n = 50;
  spec.d = 2;
  spec.count = 4;
  spec.seed = 5;
  cfg.corpus = {spec};
  cfg.assert_level = AssertLevel::strict;
  const fs::path out = fs::temp_directory_path() / "uniblock_exp_strict_defaults";
  fs::remove_all(out);
  ExperimentSummary summary = run_experiment(cfg, out);
  for (const auto& row : summary.rows) {
    CHECK(row.success);
    CHECK(row.ledger_ok);
    CHECK(row.nb_ok);
  }
}

TEST_CASE("run_experiment: config validation") {
  ExperimentConfig cfg = small_config();
  cfg.host_seeds.clear();
  CHECK_THROWS_AS(run_experiment(cfg, fs::temp_directory_path() / "x"), PreconditionError);
  cfg = small_config();
  cfg.corpus.clear();
  CHECK_THROWS_AS(run_experiment(cfg, fs::temp_directory_path() / "x"), PreconditionError);
  cfg = small_config();
  cfg.corpus[0].d = 3; // degeneracy-3 guests against a d = 2 model
  cfg.corpus[0].seed = 1234;
  CHECK_THROWS_AS(run_experiment(cfg, fs::temp_directory_path() / "x"), PreconditionError);
}

TEST_CASE("run_experiment: stochastic host with p < 1 in the deep block") {
  ExperimentConfig cfg;
  cfg.n = 500;
  cfg.d = 2;
  cfg.overrides.block_constant = 2.0;
  cfg.overrides.prob_boost = 0.5;
  cfg.host_seeds = {1, 2, 3};
  CorpusSpec random_spec;
  random_spec.family = Family::random_degenerate;
  random_spec.n = 500;
  random_spec.d = 2;
  random_spec.count = 10;
  random_spec.seed = 21;
  CorpusSpec stars;
  stars.family = Family::star;
  stars.n = 500;
  stars.d = 1;
  stars.count = 2;
  cfg.corpus = {random_spec, stars};

  const auto params = derive_params(cfg.n, cfg.d, cfg.overrides);
  REQUIRE(params.p(2, 2) == doctest::Approx(0.5)); // genuinely random deep block

  const fs::path out = fs::temp_directory_path() / "uniblock_exp_stoch";
  fs::remove_all(out);
  ExperimentSummary summary = run_experiment(cfg, out);
  int succ = 0;
  for (const auto& row : summary.rows) succ += row.success ? 1 : 0;
  CHECK(succ == static_cast<int>(summary.rows.size()));
  bool some_noise = false;
  for (const auto& hs : summary.hosts) {
    CHECK(!hs.audit_flagged);
    some_noise = some_noise || hs.audit_max_abs_z > 0.0;
  }
  CHECK(some_noise);
}

TEST_CASE("run_experiment: edgeless guests occupy only (N, 1)") {
  ExperimentConfig cfg;
  cfg.n = 100;
  cfg.d = 2;
  cfg.overrides.block_constant = 0.5;
  cfg.host_seeds = {4};
  cfg.save_traces = true;
  CorpusSpec singles; // one-vertex trees are edgeless guests
  singles.family = Family::d_ary_tree;
  singles.n = 1;
  singles.d = 2;
  singles.count = 5;
  cfg.corpus = {singles};
  const fs::path out = fs::temp_directory_path() / "uniblock_exp_edgeless";
  fs::remove_all(out);
  ExperimentSummary summary = run_experiment(cfg, out);
  const auto params = derive_params(cfg.n, cfg.d, cfg.overrides);
  for (const auto& row : summary.rows) CHECK(row.success);
  for (int g = 0; g < 5; ++g) {
    char name[64];
    std::snprintf(name, sizeof(name), "traces/s4_g%04d.txt", g);
    std::istringstream trace(slurp(out / name));
    int step, guest, k, j, hostv;
    long long remaining;
    const bool parsed = static_cast<bool>(trace >> step >> guest >> k >> j >> hostv >> remaining);
    REQUIRE(parsed);
    CHECK(k == params.levels);
    CHECK(j == 1);
  }
}

TEST_CASE("params_table and bounds_csv") {
  auto params = derive_params(1000000, 2);
  std::string table = params_table(params);
  CHECK(table.find("N (blocks)") != std::string::npos);
  CHECK(table.find("delta_2 = 1000") != std::string::npos);
  CHECK(table.find("[pass]") != std::string::npos);
  CHECK(table.find("[FAIL]") == std::string::npos);
  CHECK(table.find("[override]") == std::string::npos);

  BlockModelOverrides o;
  o.block_constant = 4.0;
  std::string overridden = params_table(derive_params(100000, 2, o));
  CHECK(overridden.find("[override]") != std::string::npos);

  CHECK(bounds_csv({}, 2) ==
        "n,lower_bound,budget,model_edge_bound,budget_over_lower,normalized_gap\n");

  std::string csv = bounds_csv({1e6}, 2);
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  double n_col, lower, budget, model, ratio, norm;
  char comma;
  std::istringstream rs(row);
  rs >> n_col >> comma >> lower >> comma >> budget >> comma >> model >> comma >> ratio >> comma >>
      norm;
  CHECK(n_col == doctest::Approx(1e6));
  CHECK(lower == doctest::Approx(lower_bound_edges(1e6, 2)));
  CHECK(budget == doctest::Approx(universality_budget(1e6, 2)));
  CHECK(model == doctest::Approx(model_edge_bound(1e6, 2)));
  CHECK(ratio == doctest::Approx(budget / lower));
}

TEST_CASE("params_json carries the override audit trail") {
  BlockModelOverrides o;
  o.block_constant = 4.0;
  o.prob_boost = 8.0;
  auto params = derive_params(2000, 2, o);
  std::string j = params_json(params);
  CHECK(j.find("\"block_constant\": 4.0") != std::string::npos);
  CHECK(j.find("\"block_constant_overridden\": true") != std::string::npos);
  CHECK(j.find("\"prob_boost_overridden\": true") != std::string::npos);
  CHECK(j.find("\"total_vertices\": 12377") != std::string::npos);
}
