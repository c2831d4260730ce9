#pragma once

#include <array>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sfcedge/workload.hpp"

namespace sfcedge {

// Placement of one job in time. Processing occupies [start, start + length)
// on `en`; forwarding to the successor's node occupies
// [fwd_start, fwd_start + fwd_length). The last job of a chain forwards nothing.
struct ScheduledJob {
  int job = 0;
  int en = -1;
  int start = 0;
  int length = 0;
  int fwd_start = 0;
  int fwd_length = 0;

  [[nodiscard]] int end() const { return start + length; }
  [[nodiscard]] int fwd_end() const { return fwd_start + fwd_length; }
};

struct Schedule {
  std::vector<ScheduledJob> jobs;  // indexed like Workload::jobs()
  std::vector<int> node_of_vnf;    // by VNF id; -1 when not requested
  int horizon = 0;
};

// Serial list scheduling: repeatedly takes the ready job (predecessor already
// placed) with the smallest priority value and starts it at the earliest slot
// that respects its release, its predecessor's forwarding, and per-slot node
// capacity. job_priority is indexed by job. Throws ScheduleError naming the
// request when a completion would pass its timeout.
[[nodiscard]] Schedule build_schedule_by_priority(const Workload& workload, std::span<const int> node_of_vnf,
                                                  std::span<const long> job_priority);

// Priority from a VNF order (e.g. matching finalization order), then request
// arrival, then chain position.
[[nodiscard]] Schedule build_schedule(const Workload& workload, std::span<const int> node_of_vnf,
                                      std::span<const int> vnf_order);

// Latest processing end over all jobs. Throws std::invalid_argument when empty.
[[nodiscard]] int makespan(const Schedule& schedule);

struct ConstraintResult {
  std::string name;
  std::vector<std::string> violations;
  [[nodiscard]] bool passed() const { return violations.empty(); }
};

struct ConstraintReport {
  std::array<ConstraintResult, 7> constraints;  // c1 .. c7
  [[nodiscard]] bool valid() const;
  [[nodiscard]] const ConstraintResult& operator[](int k) const { return constraints.at(k - 1); }
};

// c1 chain start order, c2 enough contiguous processing on the matched node
// inside the horizon, c3 no start before arrival, c4 completion by timeout,
// c5 forwarding only after processing, c6 successor waits for forwarding,
// c7 requirement coverage and per-slot node capacity.
[[nodiscard]] ConstraintReport check_schedule(const Workload& workload, const Schedule& schedule);

// constraint,pass,violation_count
void write_report_csv(std::ostream& out, const ConstraintReport& report);

}  // namespace sfcedge
