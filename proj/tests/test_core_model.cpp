#include <gtest/gtest.h>

#include <map>

#include "fixtures.hpp"
#include "sfcedge/error.hpp"
#include "sfcedge/io.hpp"
#include "sfcedge/scenario.hpp"

using namespace sfcedge;

TEST(Admit, BoundaryEqualityFits) { EXPECT_TRUE(admit({4, 4, 4}, {4, 4, 4})); }
TEST(Admit, OneComponentOverRejects) { EXPECT_FALSE(admit({4, 4, 4}, {5, 0, 0})); }
TEST(Admit, ZeroRequirementAlwaysFits) {
  EXPECT_TRUE(admit({0, 0, 0}, {0, 0, 0}));
  EXPECT_TRUE(admit({3, 1, 7}, {0, 0, 0}));
}

namespace {
Scenario triangle() { return fixture::scenario({10, 10, 10}, {{0, 1}, {1, 2}, {2, 0}}, {1, 1}, {{0, 1}}); }

int count_kind(const std::vector<Violation>& vs, const std::string& kind) {
  int n = 0;
  for (const auto& v : vs) n += v.kind == kind;
  return n;
}
}  // namespace

TEST(ValidateScenario, TriangleIsClean) { EXPECT_TRUE(validate_scenario(triangle()).empty()); }

TEST(ValidateScenario, DanglingLinkReported) {
  auto sc = triangle();
  sc.links.push_back({0, 99, 1.0});
  const auto vs = validate_scenario(sc);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(count_kind(vs, vs.front().kind), 1);
  EXPECT_NE(vs.front().detail.find("99"), std::string::npos);
}

TEST(ValidateScenario, ChainSourceMismatchReported) {
  auto sc = triangle();
  sc.sfcs[0].source = 1;
  const auto vs = validate_scenario(sc);
  ASSERT_EQ(vs.size(), 1u);
}

TEST(ValidateScenario, DisconnectedTopologyReported) {
  auto sc = triangle();
  sc.links = {{0, 1, 1.0}};
  EXPECT_FALSE(validate_scenario(sc).empty());
}

TEST(GenerateScenario, SameSeedSameScenario) {
  const GenerationConfig cfg;
  const auto a = scenario_to_json(generate_scenario(cfg, 1)).dump();
  const auto b = scenario_to_json(generate_scenario(cfg, 1)).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, scenario_to_json(generate_scenario(cfg, 2)).dump());
}

TEST(GenerateScenario, CountsFollowConfig) {
  GenerationConfig cfg;
  cfg.n_ens_min = cfg.n_ens_max = 5;
  cfg.vnfs_per_en_min = cfg.vnfs_per_en_max = 10;
  const auto sc = generate_scenario(cfg, 7);
  EXPECT_EQ(sc.node_count(), 5);
  EXPECT_EQ(sc.vnfs.size(), 50u);
  EXPECT_TRUE(validate_scenario(sc).empty());
}

TEST(GenerateScenario, MinimumQuotasAboveVnfCountAreInfeasible) {
  GenerationConfig cfg;
  cfg.n_ens_min = cfg.n_ens_max = 5;
  cfg.vnfs_per_en_min = cfg.vnfs_per_en_max = 1;
  cfg.quota_min = 2;
  EXPECT_THROW((void)generate_scenario(cfg, 1), InfeasibleConfig);
}

TEST(GenerateScenario, QuotaTotalsBracketVnfCount) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto sc = generate_scenario(GenerationConfig{}, seed);
    long qmin = 0, qmax = 0;
    for (const auto& n : sc.nodes) {
      qmin += n.quota_min;
      qmax += n.quota_max;
    }
    const long nv = static_cast<long>(sc.vnfs.size());
    EXPECT_LE(qmin, nv) << "seed " << seed;
    EXPECT_GE(qmax, nv) << "seed " << seed;
    EXPECT_TRUE(validate_scenario(sc).empty()) << "seed " << seed;
  }
}

TEST(SampleArrivals, ZeroMeanGivesNoRequests) {
  auto sc = generate_scenario(GenerationConfig{}, 3);
  for (auto& n : sc.nodes) n.arrival_mean = 0.0;
  EXPECT_TRUE(sample_arrivals(sc, 3).empty());
}

TEST(SampleArrivals, EmpiricalMeanMatchesPerNode) {
  GenerationConfig cfg;
  cfg.n_ens_min = cfg.n_ens_max = 4;
  cfg.vnfs_per_en_min = cfg.vnfs_per_en_max = 2;
  auto sc = generate_scenario(cfg, 5);
  for (auto& n : sc.nodes) n.arrival_mean = 2.0;
  sc.horizon = 10000;
  const auto reqs = sample_arrivals(sc, 11);
  std::map<int, int> per_node;
  for (const auto& r : reqs) {
    ++per_node[r.origin_en];
    EXPECT_GE(r.arrival_slot, 0);
    EXPECT_LT(r.arrival_slot, sc.horizon);
    EXPECT_GE(r.timeout, r.arrival_slot);
  }
  for (int i = 0; i < sc.node_count(); ++i) {
    const double mean = per_node[i] / 10000.0;
    // 3 sigma of the Poisson mean over 10^4 slots is ~0.042
    EXPECT_NEAR(mean, 2.0, 0.1) << "node " << i;
    EXPECT_NEAR(mean, 2.0, 3.0 * std::sqrt(2.0 / 10000.0)) << "node " << i;
  }
}

TEST(SampleArrivals, SameSeedSameSequence) {
  const auto sc = generate_scenario(GenerationConfig{}, 9);
  EXPECT_EQ(sample_arrivals(sc, 4), sample_arrivals(sc, 4));
}

TEST(ScenarioJson, RoundTripPreservesEverything) {
  const auto sc = generate_scenario(GenerationConfig{}, 12);
  const auto j = scenario_to_json(sc);
  EXPECT_EQ(scenario_to_json(scenario_from_json(j)).dump(), j.dump());
}

TEST(CatalogRequests, OnePerChainWithinHorizon) {
  const auto sc = generate_scenario(GenerationConfig{}, 2);
  const auto reqs = catalog_requests(sc, 2);
  ASSERT_EQ(reqs.size(), sc.sfcs.size());
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    EXPECT_EQ(reqs[i].sfc_id, static_cast<int>(i));
    EXPECT_LT(reqs[i].arrival_slot, sc.horizon);
  }
}
