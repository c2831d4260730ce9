#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "fixtures.hpp"
#include "sfcedge/error.hpp"
#include "sfcedge/imla.hpp"
#include "sfcedge/pipeline.hpp"

using namespace sfcedge;

namespace {
MfgParams game(int v, double resource = 100, double gamma = 1) {
  MfgParams p;
  p.players = v;
  p.resource = resource;
  p.delay_cost = gamma;
  return p;
}
LearningConfig learning(double lambda, std::uint64_t seed = 1, int iterations = 200) {
  LearningConfig c;
  c.lambda = lambda;
  c.seed = seed;
  c.max_iterations = iterations;
  return c;
}
}  // namespace

TEST(ImlaLearn, ReachesClosedFormEquilibrium) {
  const auto r = imla_learn(game(10), learning(0.05));
  ASSERT_TRUE(r.converged());
  EXPECT_LE(*r.trace.converged_at, 200);
  EXPECT_LT(std::abs(r.a_star - 9.0) / 9.0, 1e-3);
  EXPECT_EQ(r.trace.iterates.size(), static_cast<std::size_t>(*r.trace.converged_at));
  EXPECT_EQ(r.trace.iterates.front().iteration, 1);
}

TEST(ImlaLearn, NearPureBestResponseStillConverges) {
  const auto r = imla_learn(game(10), learning(0.999));
  ASSERT_TRUE(r.converged());
  EXPECT_NEAR(r.a_star, 9.0, 9e-3);
}

TEST(ImlaLearn, StartingAtEquilibriumStopsImmediately) {
  auto c = learning(0.05);
  c.initial_action = 9.0;
  const auto r = imla_learn(game(10), c);
  ASSERT_EQ(r.trace.converged_at, 1);
  ASSERT_EQ(r.trace.iterates.size(), 1u);
  EXPECT_NEAR(r.trace.iterates[0].action, 9.0, 1e-9);
}

TEST(ImlaLearn, LimitDoesNotDependOnRate) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    std::vector<double> limits;
    for (double lambda : {0.01, 0.05, 0.2, 0.8}) {
      auto c = learning(lambda, seed, 20000);
      c.tolerance = 1e-9;
      const auto r = imla_learn(game(10), c);
      ASSERT_TRUE(r.converged()) << lambda;
      limits.push_back(r.a_star);
    }
    for (double a : limits) EXPECT_LT(std::abs(a - limits.front()) / limits.front(), 1e-4);
  }
}

TEST(ImlaLearn, GapEventuallyShrinksMonotonically) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = imla_learn(game(10), learning(0.05, seed));
    const auto& it = r.trace.iterates;
    ASSERT_FALSE(it.empty());
    // after the first few damped steps the gap never grows again
    for (std::size_t t = 5; t + 1 < it.size(); ++t)
      ASSERT_LE(it[t + 1].gap, it[t].gap * (1 + 1e-9)) << "seed " << seed << " t " << t;
  }
}

TEST(ImlaLearn, SameSeedSameTrace) {
  const auto a = imla_learn(game(10), learning(0.05, 42));
  const auto b = imla_learn(game(10), learning(0.05, 42));
  std::ostringstream sa, sb;
  write_trace_csv(sa, a.trace);
  write_trace_csv(sb, b.trace);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().rfind("iteration,action,payoff,gap\r\n", 0), 0u);
}

TEST(ImlaLearn, UnconvergedIsFlaggedNotThrown) {
  const auto r = imla_learn(game(10), learning(0.05, 1, 3));
  EXPECT_FALSE(r.converged());
  EXPECT_EQ(r.trace.iterates.size(), 3u);
}

TEST(ImlaLearn, RandomRestartsRunUnderFlag) {
  auto c = learning(0.05, 3);
  c.random_restarts = true;
  const auto r = imla_learn(game(10), c);
  EXPECT_EQ(r.trace.iterates.size() <= 200, true);
  for (const auto& row : r.trace.iterates) EXPECT_GE(row.action, 0.0);
}

TEST(LearningConfig, RejectsOutOfRangeRate) {
  EXPECT_THROW(learning(0.0).validate(), std::invalid_argument);
  EXPECT_THROW(learning(1.0).validate(), std::invalid_argument);
}

TEST(ImlaLearnInfinite, LargePopulationMatchesClosedForm) {
  const auto p = game(1000);
  const auto r = imla_learn_infinite(p, learning(0.05, 1));
  ASSERT_TRUE(r.converged());
  EXPECT_LT(std::abs(r.a_star - 0.0999) / 0.0999, 0.01);
  EXPECT_LT(std::abs(r.a_star - ne_closed_form(p)) / ne_closed_form(p), 0.01);
}

TEST(ImlaLearnInfinite, ZeroFieldIsAbsorbing) {
  auto c = learning(0.05);
  c.initial_action = 0.0;
  const auto r = imla_learn_infinite(game(1000), c);
  EXPECT_EQ(r.a_star, 0.0);
  EXPECT_EQ(r.trace.converged_at, 1);
}

TEST(ImlaLearnInfinite, ZeroRateHoldsStill) {
  auto c = learning(0.0);
  c.initial_action = 0.5;
  const auto r = imla_learn_infinite(game(1000), c);
  EXPECT_FALSE(r.converged());
  for (const auto& row : r.trace.iterates) EXPECT_EQ(row.action, 0.5);
}

// ---- placement and routing ----

namespace {
std::vector<NodeGame> games_for(const Workload& wl) { return learn_node_games(wl, 1.0, learning(0.05)); }
}  // namespace

TEST(PlaceVnfs, SingleNodeTakesEverything) {
  const auto sc = fixture::scenario({1000}, {}, {1, 1, 1}, {{0, 1, 2}});
  const Workload wl(sc, {fixture::request(0)});
  const auto pr = place_vnfs(wl, games_for(wl));
  EXPECT_EQ(pr.assignment, (std::vector<int>{0, 0, 0}));
  const auto route = route_sfc(pr, sc.sfcs[0], sc, 1.0);
  EXPECT_EQ(route.path, std::vector<int>{0});
  EXPECT_EQ(route.transmission_delay, 0.0);
  for (const auto& vl : route.allocations) EXPECT_FALSE(vl.cross_node);
}

TEST(PlaceVnfs, HigherPayoffNodeWins) {
  const auto sc = fixture::scenario({500, 1000}, {{0, 1}}, {1}, {{0}});
  const Workload wl(sc, {fixture::request(0, 0, 2000)});
  const auto games = games_for(wl);
  const auto pr = place_vnfs(wl, games);
  EXPECT_EQ(pr.assignment[0], 1);
  EXPECT_GT(games[1].a_star, games[0].a_star);
}

TEST(PlaceVnfs, SplitMatchesExhaustiveMinimumDelay) {
  // each node holds two VNFs (storage), node 0 computes twice as fast
  auto sc = fixture::scenario({2000, 1000}, {{0, 1}}, {1, 1, 1}, {{0, 1, 2}});
  for (auto& n : sc.nodes) n.capacity.storage = n.available.storage = 2.0;
  const Workload wl(sc, {fixture::request(0, 0, 4000)});
  const auto pr = place_vnfs(wl, games_for(wl));

  double best = std::numeric_limits<double>::infinity();
  for (int code = 0; code < 8; ++code) {
    const std::vector<int> p{code & 1, code >> 1 & 1, code >> 2 & 1};
    int on0 = 0;
    for (int e : p) on0 += e == 0;
    if (on0 > 2 || 3 - on0 > 2) continue;
    best = std::min(best, mean_end_to_end_delay(wl, p));
  }
  EXPECT_NEAR(mean_end_to_end_delay(wl, pr.assignment), best, 1e-12);
  for (const auto& avail : pr.available) EXPECT_TRUE(avail.nonnegative());
}

TEST(PlaceVnfs, NoAdmissibleNodeThrows) {
  auto sc = fixture::scenario({1000}, {}, {1}, {{0}});
  sc.nodes[0].available = {0.5, 0.5, 0.5};
  const Workload wl(sc, {fixture::request(0)});
  EXPECT_THROW((void)place_vnfs(wl, games_for(wl)), PlacementError);
}

TEST(PlaceVnfs, DeterministicAndWithinCapacity) {
  GenerationConfig g;
  g.n_ens_min = g.n_ens_max = 6;
  g.vnfs_per_en_min = g.vnfs_per_en_max = 4;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto sc = generate_scenario(g, seed);
    const Workload wl(sc, catalog_requests(sc, seed));
    const auto a = place_vnfs(wl, games_for(wl));
    const auto b = place_vnfs(wl, games_for(wl));
    EXPECT_EQ(a.assignment, b.assignment);
    EXPECT_EQ(a.order, b.order);
    for (const auto& avail : a.available) EXPECT_TRUE(avail.nonnegative()) << seed;
  }
}

TEST(RouteSfc, AdjacentSplitUsesOneLink) {
  const auto sc = fixture::scenario({1000, 1000}, {{0, 1}}, {1, 1}, {{0, 1}});
  const std::vector<int> placement{0, 1};
  const auto route = route_sfc(placement, sc.sfcs[0], sc, Topology(sc), 500.0);
  EXPECT_EQ(route.path, (std::vector<int>{0, 1}));
  ASSERT_EQ(route.allocations.size(), 1u);
  EXPECT_EQ(route.allocations[0].phyl, 0);
}

TEST(RouteSfc, LineOfThreeSumsHops) {
  auto sc = fixture::scenario({1000, 1000, 1000}, {{0, 1}, {1, 2}}, {1, 1, 1}, {{0, 1, 2}}, 1.0, 2.0);
  sc.channel.bandwidth = 3000;
  const std::vector<int> placement{0, 1, 2};
  const double d = 4000;
  const auto route = route_sfc(placement, sc.sfcs[0], sc, Topology(sc), d);
  EXPECT_EQ(route.path, (std::vector<int>{0, 1, 2}));
  ASSERT_EQ(route.allocations.size(), 2u);
  double expect = 0;
  for (const auto& vl : route.allocations) {
    const double cap = hop_rate(sc, *vl.phyl, vl.from_en, vl.to_en, d);
    expect += transmission_delay(d, vl, cap);
  }
  EXPECT_NEAR(route.transmission_delay, expect, 1e-12);
  EXPECT_GT(expect, 0.0);
}

TEST(ImlaLearn, SimultaneousUpdateOvershootsWhereSequentialSettles) {
  // bare damped recurrence: linear rate |1 - lambda*v/2| = 4 here
  auto c = learning(0.999);
  c.update = UpdateOrder::simultaneous;
  EXPECT_FALSE(imla_learn(game(10), c).converged());
  c.update = UpdateOrder::sequential;
  EXPECT_TRUE(imla_learn(game(10), c).converged());
}

TEST(ImlaLearn, SequentialRateMatchesLinearization) {
  // per iteration the gap shrinks by (1 - lambda/2)^v near the equilibrium
  const auto r = imla_learn(game(10), learning(0.05, 5));
  const auto& it = r.trace.iterates;
  ASSERT_GT(it.size(), 40u);
  const double ratio = it[it.size() - 2].gap / it[it.size() - 3].gap;
  EXPECT_NEAR(ratio, std::pow(1 - 0.025, 10), 0.01);
}

TEST(ImlaLearn, LargeRosterConvergesSequentially) {
  for (int v : {80, 100}) {
    const auto p = game(v, 500);
    const auto r = imla_learn(p, learning(0.05, 2));
    ASSERT_TRUE(r.converged()) << v;
    EXPECT_LT(std::abs(r.a_star - ne_closed_form(p)) / ne_closed_form(p), 1e-3);
  }
}
