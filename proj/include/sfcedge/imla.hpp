#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "sfcedge/delay.hpp"
#include "sfcedge/mfg.hpp"
#include "sfcedge/scenario.hpp"
#include "sfcedge/workload.hpp"

namespace sfcedge {

// How the v players revise within one learning iteration. sequential: one at a
// time, each moving the mean field by lambda/v of its best-response step
// (stable for every v and lambda). simultaneous: all at once on the symmetric
// profile, the bare damped recurrence; its linear rate is |1 - lambda*v/2| for
// beta = 1, so it diverges once lambda*v >= 4.
enum class UpdateOrder { sequential, simultaneous };

struct LearningConfig {
  double lambda = 0.05;
  int max_iterations = 200;
  double tolerance = 1e-6;  // absolute, on the iterate gap
  std::uint64_t seed = 0;
  std::optional<double> initial_action;  // overrides the seeded draw
  bool random_restarts = false;          // re-draw the best-response argument every iteration
  UpdateOrder update = UpdateOrder::sequential;

  // lambda in (0,1), max_iterations > 0, tolerance > 0.
  void validate() const;
};

struct TracePoint {
  int iteration = 0;
  double action = 0.0;
  double payoff = 0.0;
  double gap = 0.0;  // |a_t - a_{t-1}|; 0 for the initial row
};

struct ConvergenceTrace {
  std::vector<TracePoint> iterates;
  std::optional<int> converged_at;
};

struct LearningResult {
  double a_star = 0.0;
  ConvergenceTrace trace;
  [[nodiscard]] bool converged() const { return trace.converged_at.has_value(); }
};

// Damped best-response iteration a <- lambda*BRC(a) + (1-lambda)*a on the
// symmetric profile, ordered per config.update. Row t of the trace holds a_t for t >= 1; stops at the
// first gap below tolerance.
[[nodiscard]] LearningResult imla_learn(const MfgParams& params, const LearningConfig& config);

// Large-population variant on the mean-field term m, always sequential; lambda
// may be 0 here (the trace then stays at m0).
[[nodiscard]] LearningResult imla_learn_infinite(const MfgParams& params, const LearningConfig& config);

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace);

// The game one edge node plays, and its learned equilibrium demand.
struct NodeGame {
  MfgParams params;
  double a_star = 0.0;
  double reference_delay = 1.0;  // delay that priced params.delay_cost
  LearningResult learning;
};

// One game per node: resource = compute capacity over the fleet mean, players =
// requested VNFs (at least 2), delay cost scaled by the node's mean processing
// delay relative to the fleet. Nodes learn independently; seeds are config.seed + node id.
[[nodiscard]] std::vector<NodeGame> learn_node_games(const Workload& workload, double beta,
                                                     const LearningConfig& config);

struct PlacementResult {
  std::vector<int> assignment;        // by VNF id; -1 when not requested
  std::vector<double> demand;         // by VNF id; a* of the hosting node
  std::vector<int> order;             // VNF ids in placement order
  std::vector<ResourceVector> available;  // per node, after placement
};

// Places every requested VNF in request order at the admissible node with the
// highest equilibrium payoff, pricing each node by the VNF's delay there
// (processing plus transmission from the predecessor's node). Throws
// PlacementError when no node admits a VNF.
[[nodiscard]] PlacementResult place_vnfs(const Workload& workload, std::span<const NodeGame> games);

struct RouteResult {
  std::vector<int> path;  // nodes visited in chain order, consecutive repeats collapsed
  std::vector<VirtualLinkAllocation> allocations;
  double transmission_delay = 0.0;
};

[[nodiscard]] RouteResult route_sfc(const PlacementResult& placement, const Sfc& sfc, const Scenario& scenario,
                                    double packet_size);
[[nodiscard]] RouteResult route_sfc(std::span<const int> assignment, const Sfc& sfc, const Scenario& scenario,
                                    const Topology& topo, double packet_size);

}  // namespace sfcedge
