#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sfcedge/matching.hpp"
#include "sfcedge/pipeline.hpp"
#include "sfcedge/workload.hpp"

namespace sfcedge {

// Each VNF, in order of first request, goes to the admissible node with the
// most available compute; jobs are list-scheduled in request order.
[[nodiscard]] MethodResult greedy_allocate(const Workload& workload);

struct GaConfig {
  int population = 50;
  int generations = 100;
  double crossover_rate = 0.8;
  double mutation_rate = 0.05;
  int tournament = 2;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GaResult {
  MethodResult result;
  std::vector<double> best_fitness;  // per generation, including generation 0
};

// Genetic search over (execution node per VNF, job priority). Priorities are
// random keys decoded by rank. Fitness is makespan with mean end-to-end delay
// as a tie-breaker below one slot; undecodable individuals are penalised.
[[nodiscard]] GaResult ga_allocate(const Workload& workload, const GaConfig& config = {});

struct OracleLimits {
  int max_vnfs = 8;
  int max_ens = 3;
  int max_horizon = 16;
  int max_jobs = 12;
};

struct OracleResult {
  MethodResult result;
  std::size_t explored = 0;  // search nodes visited
};

// Exhaustive branch and bound over execution nodes and list orders. Every
// schedule the list scheduler can produce for any node choice is covered, so
// the returned makespan is optimal for that schedule family. Throws
// LimitError outside the limits and ScheduleError when nothing fits.
[[nodiscard]] OracleResult exact_oracle(const Workload& workload, const OracleLimits& limits = {});

struct EnumeratedMatching {
  Matching matching;
  std::vector<std::pair<int, int>> blocking_pairs;
};

// Every quota-feasible matching (VNFs may stay unmatched) with its blocking
// pairs. Throws LimitError beyond the VNF and node limits.
[[nodiscard]] std::vector<EnumeratedMatching> enumerate_matchings(const PreferenceLists& prefs, const Quotas& quotas,
                                                                  const OracleLimits& limits = {});

}  // namespace sfcedge
