#pragma once

#include <span>
#include <vector>

#include "sfcedge/delay.hpp"
#include "sfcedge/scenario.hpp"

namespace sfcedge {

// One packet processed by one VNF of a request's chain.
struct Job {
  int request = 0;
  int position = 0;  // index in the SFC chain
  int vnf = 0;       // VnfSpec id
  int pred = -1;     // job index of the previous chain element
  int succ = -1;
};

// A batch of requests against a scenario, expanded into jobs, with the slot
// timing model shared by every scheduler and oracle:
//   processing slots of a job on node e = max(p_v, ceil(d / compute_e))
//   forwarding slots from e to e'       = 0 if e == e', else max(1, ceil(route transmission delay))
// VNFs are the distinct catalog entries the batch requests; a VNF serves every
// job that names it.
class Workload {
 public:
  Workload(const Scenario& scenario, std::vector<ServiceRequest> requests);

  [[nodiscard]] const Scenario& scenario() const { return *scenario_; }
  [[nodiscard]] const Topology& topology() const { return topo_; }
  [[nodiscard]] const std::vector<ServiceRequest>& requests() const { return requests_; }
  [[nodiscard]] const std::vector<Job>& jobs() const { return jobs_; }
  // Requested VNF ids, ascending.
  [[nodiscard]] const std::vector<int>& vnfs() const { return vnfs_; }
  // Position of a VNF id in vnfs(), or -1 if the batch never requests it.
  [[nodiscard]] int vnf_index(int vnf_id) const { return vnf_index_.at(vnf_id); }
  [[nodiscard]] const std::vector<int>& jobs_of_vnf(int vnf_id) const { return jobs_of_vnf_.at(vnf_id); }
  [[nodiscard]] int node_count() const { return scenario_->node_count(); }

  [[nodiscard]] int processing_slots(int job, int en) const;
  [[nodiscard]] int forward_slots(int job, int from_en, int to_en) const;
  // Fractional transmission delay along the route; 0 when from == to.
  [[nodiscard]] double transmission_delay(int job, int from_en, int to_en) const;
  [[nodiscard]] int release(int job) const { return requests_[jobs_[job].request].arrival_slot; }
  [[nodiscard]] int timeout(int job) const { return requests_[jobs_[job].request].timeout; }
  // Largest request timeout; slot indices of any valid schedule stay below it.
  [[nodiscard]] int horizon() const { return horizon_; }
  // Whether the VNF's requirement fits the node's capacity at all.
  [[nodiscard]] bool fits(int vnf_id, int en) const;

 private:
  struct Hop {
    double inv_packet_rate;  // 1 / link capacity (slots per packet)
    double inv_shannon;      // 1 / Shannon capacity (slots per data unit)
  };

  const Scenario* scenario_;
  Topology topo_;
  std::vector<ServiceRequest> requests_;
  std::vector<Job> jobs_;
  std::vector<int> vnfs_;
  std::vector<int> vnf_index_;
  std::vector<std::vector<int>> jobs_of_vnf_;
  std::vector<std::vector<std::vector<Hop>>> routes_;
  int horizon_ = 0;
};

}  // namespace sfcedge
