#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sfcedge/csv.hpp"
#include "sfcedge/error.hpp"
#include "sfcedge/harness.hpp"

using namespace sfcedge;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("sfcedge_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig minimal() {
  return experiment_config_from_json(parse_json(R"({
    "seeds": [7],
    "ens": [3],
    "vnfs_per_en": [2],
    "packet_sizes": [100, 5000],
    "methods": ["imla-emsda", "greedy"],
    "convergence": {"seeds": [1, 2]}
  })"));
}

const char* kFigureFiles[] = {"convergence.csv", "delay_vs_packet_size.csv", "delay_vs_vnfs.csv",
                              "resource_usage.csv"};
}  // namespace

TEST(RunExperiment, MinimalConfigWritesFiguresAndReport) {
  const auto dir = scratch("minimal");
  const auto out = run_experiment(minimal(), dir);
  for (const char* f : kFigureFiles) EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
  EXPECT_EQ(out.errors, 0);
  EXPECT_EQ(out.invariant_failures, 0);
  // vnfs sweep: 1 point, packet sweep: 2 points, two methods each
  EXPECT_EQ(out.records.size(), 6u);
  const auto header = slurp(dir / "delay_vs_vnfs.csv");
  EXPECT_EQ(header.rfind("method,seed,n_ens,n_vnfs,mean_delay_slots,makespan_slots\r\n", 0), 0u);
}

TEST(RunExperiment, RerunIsByteIdentical) {
  auto cfg = minimal();
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  (void)run_experiment(cfg, a);
  cfg.workers = 3;
  (void)run_experiment(cfg, b);
  for (const char* f : kFigureFiles) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
  EXPECT_EQ(slurp(a / "manifest.json"), slurp(b / "manifest.json"));
}

TEST(RunExperiment, ReportRoundTrips) {
  const auto dir = scratch("roundtrip");
  const auto out = run_experiment(minimal(), dir);
  const auto back = records_from_json(load_json(dir / "report.json"));
  ASSERT_EQ(back.size(), out.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].method, out.records[i].method);
    EXPECT_EQ(back[i].makespan, out.records[i].makespan);
    EXPECT_EQ(fmt(back[i].mean_delay), fmt(out.records[i].mean_delay));
  }
}

namespace {
std::vector<RunRecord> two_methods() {
  std::vector<RunRecord> recs;
  for (std::uint64_t seed = 1; seed <= 4; ++seed)
    for (const char* m : {"imla-emsda", "greedy"}) {
      RunRecord r;
      r.sweep = "vnfs";
      r.method = m;
      r.seed = seed;
      r.n_ens = 3;
      r.n_vnfs = 6;
      r.ok = true;
      r.makespan = std::string(m) == "greedy" ? 10 : 8 + static_cast<int>(seed);
      r.mean_delay = 1.0 + seed;
      recs.push_back(r);
    }
  return recs;
}
}  // namespace

TEST(Compare, SelfRowHasZeroDeltas) {
  for (const auto& row : compare(two_methods()))
    if (row.method == row.reference) {
      EXPECT_EQ(row.mean_rel_delta, 0.0);
      EXPECT_EQ(row.ties, row.instances);
    }
}

TEST(Compare, CountsWinsAgainstOtherMethod) {
  for (const auto& row : compare(two_methods())) {
    if (row.method != "greedy" || row.metric != "makespan") continue;
    EXPECT_EQ(row.instances, 4);
    EXPECT_EQ(row.reference_wins, 1);  // 9 < 10
    EXPECT_EQ(row.ties, 1);
    EXPECT_EQ(row.reference_losses, 2);
  }
}

TEST(Compare, SingleScenarioGivesOneInstance) {
  auto recs = two_methods();
  recs.resize(2);
  for (const auto& row : compare(recs)) EXPECT_EQ(row.instances, 1);
}

TEST(Compare, MismatchedScenariosRaise) {
  auto recs = two_methods();
  recs.pop_back();
  EXPECT_THROW((void)compare(recs), AlignmentError);
}

TEST(Compare, NeedsTwoMethods) {
  auto recs = two_methods();
  std::erase_if(recs, [](const RunRecord& r) { return r.method == "greedy"; });
  EXPECT_THROW((void)compare(recs), std::invalid_argument);
}

TEST(Config, SyntaxErrorCarriesLine) {
  try {
    (void)parse_json("{\n  \"seeds\": [1,\n  ,]\n}", "cfg.json");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("cfg.json:3:", 0), 0u) << e.what();
  }
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_THROW((void)experiment_config_from_json(parse_json(R"({"seedz": [1]})")), ParseError);
  EXPECT_THROW((void)experiment_config_from_json(parse_json(R"({"ga": {"popsize": 3}})")), ParseError);
  EXPECT_THROW((void)experiment_config_from_json(parse_json(R"({"methods": ["annealing"]})")), ParseError);
}

TEST(Config, DefaultsMatchDocumentedValues) {
  const auto c = experiment_config_from_json(parse_json("{}"));
  EXPECT_EQ(c.pipeline.beta, 1.0);
  EXPECT_EQ(c.pipeline.learning.lambda, 0.05);
  EXPECT_EQ(c.pipeline.learning.max_iterations, 200);
  EXPECT_EQ(c.ga.population, 50);
  EXPECT_EQ(c.ga.generations, 100);
}

TEST(Csv, QuotesPerRfc4180) {
  std::ostringstream out;
  CsvWriter w(out);
  w.row({"plain", "with,comma", "with \"quote\"", "line\nbreak"});
  EXPECT_EQ(out.str(), "plain,\"with,comma\",\"with \"\"quote\"\"\",\"line\nbreak\"\r\n");
}

TEST(Digest, KnownValue) {
  const auto p = scratch("digest");
  fs::create_directories(p);
  std::ofstream(p / "a", std::ios::binary) << "a";
  EXPECT_EQ(file_digest(p / "a"), "af63dc4c8601ec8c");
}
