#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "sfcedge/scenario.hpp"
#include "sfcedge/workload.hpp"

namespace sfcedge {

// VNFs are numbered 0..vnf_count-1 and nodes 0..en_count-1 inside a matching
// instance. vnf_prefs[f] lists nodes best first; a node missing from the list
// is unacceptable to f. en_prefs is the single ranking every node applies,
// best first, and must list every VNF once.
struct PreferenceLists {
  std::vector<std::vector<int>> vnf_prefs;
  std::vector<int> en_prefs;
  bool shared = true;
  int en_count = 0;

  [[nodiscard]] int vnf_count() const { return static_cast<int>(vnf_prefs.size()); }
  // Throws std::invalid_argument on out-of-range ids, repeats, or an en_prefs
  // that is not a permutation of the VNFs.
  void validate() const;
  // Position of each VNF in en_prefs (0 = most preferred).
  [[nodiscard]] std::vector<int> en_rank() const;
};

struct Quotas {
  std::vector<int> q_min;
  std::vector<int> q_max;
};

struct Matching {
  std::vector<int> assignment;         // by VNF; -1 when unmatched
  std::vector<std::vector<int>> held;  // by node, ascending VNF ids
  std::vector<int> finalization_order; // matched VNFs in the order they were fixed

  [[nodiscard]] static Matching from_assignment(std::vector<int> assignment, int en_count);
  [[nodiscard]] int count(int en) const { return static_cast<int>(held[en].size()); }
  friend bool operator==(const Matching& a, const Matching& b) { return a.assignment == b.assignment; }
};

// Ranks, for each requested VNF of the workload (in workload.vnfs() order),
// every node by ascending predicted completion delay there: processing plus
// transmission to the node its successors are placed on. Nodes the VNF cannot
// fit go last; ties go to the lower node id.
[[nodiscard]] std::vector<std::vector<int>> build_vnf_preferences(const Workload& workload,
                                                                  std::span<const int> placement);

// Shared node-side ranking of the given VNF ids by ascending requirement
// magnitude: the sum of the three components, each divided by the fleet mean
// capacity of that component. Ties go to the lower VNF id. Returns positions
// into vnf_ids.
[[nodiscard]] std::vector<int> build_en_preferences(const Scenario& scenario, std::span<const int> vnf_ids);
// Same over the whole catalog (positions are VNF ids).
[[nodiscard]] std::vector<int> build_en_preferences(const Scenario& scenario);

// VNF-proposing deferred acceptance; node e holds at most q_max[e] proposals.
[[nodiscard]] Matching classic_daa(const PreferenceLists& prefs, std::span<const int> q_max);

enum class ReservationRule {
  count,         // reserve the Q least-preferred pending VNFs
  resource_sum,  // reserve least-preferred VNFs while their summed weight stays <= Q
};

struct EmsdaOptions {
  ReservationRule rule = ReservationRule::count;
  std::vector<double> weights;  // per VNF, used by resource_sum
  // Whether a tentative (vnf, node) match may be fixed now; unfixed VNFs stay
  // pending for the next stage. Null means always.
  std::function<bool(int vnf, int en)> can_finalize;
};

// Staged deferred acceptance with minimum quotas. Throws MatchingError when
// the minimum quotas exceed the number of VNFs, or when a stage fixes nothing
// (the message lists the pending VNFs).
[[nodiscard]] Matching emsda(const PreferenceLists& prefs, const Quotas& quotas, const EmsdaOptions& options = {});

[[nodiscard]] bool is_feasible(const Matching& matching, const Quotas& quotas);

// Pairs (f, e) where f strictly prefers e to its partner and either
//  - e is below q_max and f's current node stays at or above q_min without f, or
//  - e holds some VNF it ranks below f.
[[nodiscard]] std::vector<std::pair<int, int>> find_blocking_pairs(const Matching& matching,
                                                                  const PreferenceLists& prefs, const Quotas& quotas);

}  // namespace sfcedge
