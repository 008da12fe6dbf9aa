#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unistd.h>

#include "escape_lab/config.hpp"
#include "escape_lab/csv.hpp"
#include "escape_lab/errors.hpp"
#include "escape_lab/experiments.hpp"
#include "escape_lab/stats.hpp"

using namespace escape_lab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / ("escape_lab_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string config_error_message(const std::string& json) {
  try {
    parse_config(json);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Stats, WilsonInterval) {
  const auto i = wilson_interval(50, 100);
  EXPECT_NEAR(i.low, 0.4038315, 1e-6);
  EXPECT_NEAR(i.high, 0.5961685, 1e-6);
  EXPECT_EQ(wilson_interval(0, 20).low, 0.0);
  EXPECT_GT(wilson_interval(0, 20).high, 0.1);
  EXPECT_EQ(wilson_interval(20, 20).high, 1.0);
  EXPECT_EQ(wilson_interval(0, 0).low, 0.0);
  EXPECT_EQ(wilson_interval(0, 0).high, 1.0);
}

TEST(Stats, SummaryAndZ) {
  const std::vector<double> xs{1, 2, 3, 4};
  const auto s = summarize(xs);
  EXPECT_EQ(s.count, 4u);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.variance, 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.stderr_mean(), std::sqrt(5.0 / 12.0));
  EXPECT_DOUBLE_EQ(z_score(3.0, 2.0, 0.5), 2.0);
  EXPECT_EQ(z_score(1.0, 1.0, 0.0), 0.0);
  EXPECT_TRUE(std::isinf(z_score(2.0, 1.0, 0.0)));
}

TEST(Csv, NumbersRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 5.828427124746190, 1e-300, -2.5}) {
    EXPECT_EQ(std::stod(format_number(x)), x);
  }
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(std::uint64_t{42}), "42");
}

TEST(Csv, WriteReadAndSidecar) {
  const auto dir = scratch_dir();
  const auto path = dir / "t.csv";
  CsvTable t{{"a", "b"}, {{"1", "x"}, {"2", "y"}}};
  write_csv(path, t);
  EXPECT_FALSE(fs::exists(path.string() + ".tmp"));
  const auto back = read_csv(path);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.column("b"), 1);
  EXPECT_EQ(back.column("zz"), -1);
  EXPECT_EQ(back.missing_columns({"a", "c"}), std::vector<std::string>{"c"});

  RunMetadata meta;
  meta.command = "survival-scan";
  meta.params = {{"d", "2"}};
  meta.seed = 7;
  meta.notes = {"hello"};
  write_metadata(path, meta);
  std::ifstream in(sidecar_path(path));
  const std::string json((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_NE(json.find("\"survival-scan\""), std::string::npos);
  EXPECT_NE(json.find("\"hello\""), std::string::npos);
  EXPECT_NE(json.find(build_version()), std::string::npos);

  std::ofstream(dir / "ragged.csv") << "a,b\n1\n";
  EXPECT_THROW(read_csv(dir / "ragged.csv"), ConfigError);
  std::ofstream(dir / "empty.csv") << "";
  EXPECT_THROW(read_csv(dir / "empty.csv"), ConfigError);
  EXPECT_THROW(read_csv(dir / "missing.csv"), ConfigError);
  fs::remove_all(dir);
}

TEST(Config, ParsesKnownKeys) {
  const auto loaded = parse_config(R"({"d": 3, "lambda": [2.5, 4], "A0": ["root"], "B0": ["0", "1.2"],
      "replicas": 10, "budget": {"max_time": 5.5}, "seed": 9, "prune": false})");
  const auto& c = loaded.config;
  EXPECT_EQ(c.d, 3);
  EXPECT_EQ(c.lambdas, (std::vector<double>{2.5, 4.0}));
  EXPECT_EQ(c.initial.type1, std::vector<VertexId>{VertexId::root()});
  EXPECT_EQ(c.initial.type2.size(), 2u);
  EXPECT_EQ(c.replicas, 10u);
  EXPECT_EQ(c.budget.max_time, 5.5);
  EXPECT_FALSE(c.seed_defaulted);
  EXPECT_FALSE(c.prune);
  EXPECT_TRUE(loaded.keys.count("budget"));
  EXPECT_THROW(c.lambda(), ConfigError);
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_NE(config_error_message(R"({"bogus": 1})").find("bogus"), std::string::npos);
  EXPECT_NE(config_error_message(R"({"replicas": "many"})").find("replicas"), std::string::npos);
  EXPECT_NE(config_error_message(R"({"replicas": -3})").find("replicas"), std::string::npos);
  EXPECT_NE(config_error_message(R"({"budget": {"max_level": -1}})").find("budget.max_level"), std::string::npos);
  EXPECT_NE(config_error_message(R"({"B0": ["7"]})").find("B0"), std::string::npos);
  EXPECT_NE(config_error_message("{not json").size(), 0u);
  EXPECT_THROW(parse_number_list("1,x", "lambdas"), ConfigError);
  EXPECT_EQ(parse_number_list("1, 2.5,4", "k"), (std::vector<double>{1.0, 2.5, 4.0}));
}

TEST(Parallel, KeepsOrderAndPropagatesErrors) {
  const auto v = parallel_map(100, 4, [](std::uint64_t i) { return i * i; });
  for (std::uint64_t i = 0; i < 100; ++i) EXPECT_EQ(v[i], i * i);
  EXPECT_THROW(parallel_map(50, 3,
                            [](std::uint64_t i) {
                              if (i == 17) throw ResourceError("boom");
                              return i;
                            }),
               ResourceError);
  EXPECT_EQ(resolve_workers(8, 3), 3u);
  EXPECT_GE(resolve_workers(0, 100), 1u);
}

TEST(Survival, DeterministicAcrossWorkerCounts) {
  ExperimentConfig cfg;
  cfg.lambdas = {2.0, 8.0};
  cfg.replicas = 40;
  cfg.budget = Budget{std::nullopt, std::size_t{12}, std::nullopt};
  cfg.seed = 3;
  cfg.workers = 1;
  const auto one = to_csv_text(to_table(survival_scan(cfg)));
  cfg.workers = 3;
  const auto three = to_csv_text(to_table(survival_scan(cfg)));
  EXPECT_EQ(one, three);
  cfg.seed = 4;
  EXPECT_NE(one, to_csv_text(to_table(survival_scan(cfg))));
}

TEST(Survival, SurroundedNeverSurvives) {
  ExperimentConfig cfg;
  cfg.initial = InitialConfig{{VertexId::root()}, {VertexId::parse("0"), VertexId::parse("1"), VertexId::parse("2")}};
  cfg.replicas = 30;
  const auto row = survival_at(cfg, 2.0);
  EXPECT_EQ(row.extinct, 30u);
  EXPECT_EQ(row.survival_frequency, 0.0);
  EXPECT_FALSE(row.nontrivial);
}

TEST(Survival, RowCountsAddUp) {
  ExperimentConfig cfg;
  cfg.replicas = 50;
  cfg.budget = Budget{std::nullopt, std::size_t{8}, std::nullopt};
  const auto row = survival_at(cfg, 3.0);
  EXPECT_EQ(row.extinct + row.alive_at_budget + row.escape_declared, 50u);
  EXPECT_LE(row.survival_ci.low, row.survival_frequency);
  EXPECT_GE(row.survival_ci.high, row.survival_frequency);
}

TEST(Critical, BracketMustStraddle) {
  ExperimentConfig cfg;
  cfg.replicas = 10;
  cfg.bracket = std::pair{2.0, 4.0};
  EXPECT_THROW(critical_estimate(cfg), DomainError);
  cfg.bracket.reset();
  EXPECT_THROW(critical_estimate(cfg), ConfigError);
}

TEST(Containment, ResourceGuard) {
  ExperimentConfig cfg;
  cfg.lambdas = {12.0};
  cfg.t_list = {100.0};
  cfg.replicas = 1;
  EXPECT_THROW(containment_experiment(cfg), ResourceError);
}

TEST(Containment, ShortTimesHoldForLargeRate) {
  ExperimentConfig cfg;
  cfg.lambdas = {12.0};
  cfg.t_list = {0.0, 2.0};
  cfg.replicas = 40;
  const auto rows = containment_experiment(cfg);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].violations, 0u);
  EXPECT_LE(rows[1].violations, 2u);
}

TEST(Offspring, RichardsonMatchesOracle) {
  ExperimentConfig cfg;
  cfg.replicas = 300;
  cfg.m = 5;
  cfg.threshold = 0.9;
  const auto row = gw_offspring_richardson(cfg);
  EXPECT_NEAR(row.oracle, 32.0 * 0.4678964236252849, 1e-9);  // d^m * P(Gamma(5,1) <= 4.5)
  EXPECT_LT(std::abs(row.z), 4.0);
}

TEST(ExclusiveCount, MatchesExpectation) {
  ExperimentConfig cfg;
  cfg.replicas = 300;
  cfg.n = 8;
  cfg.c = 1.2;
  const auto r = exclusive_count_experiment(cfg);
  EXPECT_NEAR(r.exact, expected_exclusive(8, 1.2, ModelParams(2, 2.0)), 1e-12);
  EXPECT_LT(std::abs(r.z), 4.0);
}

TEST(CheckpointTable, Columns) {
  RunOptions opts;
  opts.budget.max_time = 3.0;
  opts.checkpoints = {1.0, 2.0};
  const auto out = run(InitialConfig{{VertexId::root()}, {VertexId::parse("0")}}, ModelParams(2, 2.0), 5, opts);
  const auto table = checkpoint_table(0, out);
  EXPECT_TRUE(table
                  .missing_columns({"replica", "t", "n", "M_n", "size_A", "max_level_A", "min_distance_A_to_B"})
                  .empty());
}
