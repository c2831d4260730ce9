#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sfcedge/imla.hpp"
#include "sfcedge/matching.hpp"
#include "sfcedge/schedule.hpp"
#include "sfcedge/workload.hpp"

namespace sfcedge {

// What every method hands back. Matching indices follow Workload::vnfs().
struct MethodResult {
  std::string method;
  std::vector<int> placement;    // by VNF id: where the instance was placed
  std::vector<int> node_of_vnf;  // by VNF id: where it executes
  Matching matching;
  Schedule schedule;
  ConstraintReport report;
  int makespan = 0;
  double mean_delay = 0.0;     // mean end-to-end delay over requests, slots
  double utilization = 0.0;    // busy compute-slots over capacity * makespan
  std::size_t operations = 0;  // deterministic work counter
  std::size_t memory_bytes = 0;  // size of the method's working set
  double place_ms = 0.0;       // wall time; never written to the figure CSVs
  double schedule_ms = 0.0;
  std::vector<NodeGame> games;
};

// Fills report, makespan, mean_delay and utilization from the schedule.
void finalize_result(const Workload& workload, MethodResult& result);

// Mean end-to-end delay (processing, transmission, controller queueing) of the
// workload's requests when VNFs execute at node_of_vnf.
[[nodiscard]] double mean_end_to_end_delay(const Workload& workload, std::span<const int> node_of_vnf);

struct PipelineConfig {
  double beta = 1.0;
  LearningConfig learning;
  ReservationRule reservation = ReservationRule::count;
};

// Quotas for the workload's nodes taken from the scenario and relaxed so that
// sum q_min <= requested VNFs <= sum q_max: minimum quotas of the smallest
// nodes are dropped first, maximum quotas of the largest nodes raised first.
[[nodiscard]] Quotas workload_quotas(const Workload& workload);

// Learning, placement, routing, matching, scheduling.
[[nodiscard]] MethodResult run_pipeline(const Workload& workload, const PipelineConfig& config = {});

}  // namespace sfcedge
