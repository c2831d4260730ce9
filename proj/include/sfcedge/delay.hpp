#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sfcedge/scenario.hpp"

namespace sfcedge {

// Delays are expressed in slots (possibly fractional).

// packet_size / node_available.compute; throws DelayError on a node with no compute.
[[nodiscard]] double processing_delay(double packet_size, const ResourceVector& node_available);

// Shannon capacity of the from->to channel, with the listed nodes interfering
// at the receiver. Throws std::invalid_argument if from == to or the
// transmitter is listed as an interferer.
[[nodiscard]] double link_capacity(const ChannelModel& channel, int from, int to, std::span<const int> interferers);

// Every node other than the transmitter and the receiver.
[[nodiscard]] std::vector<int> default_interferers(int node_count, int from, int to);

// One hop of a virtual link. Same-node virtual links carry no physical link.
struct VirtualLinkAllocation {
  int vl_id = 0;                // index of the consecutive chain pair
  std::optional<int> phyl;      // index into Scenario::links
  bool cross_node = false;
  int from_en = 0;
  int to_en = 0;
};

// 0 for a same-node link, packet_size / capacity otherwise. Throws DelayError
// when a cross-node link has no capacity.
[[nodiscard]] double transmission_delay(double packet_size, const VirtualLinkAllocation& vl, double capacity);

// Mean M/M/1 sojourn time 1 / (service - arrival). Throws DelayError unless
// service_rate > arrival_rate >= 0.
[[nodiscard]] double queueing_delay(double arrival_rate, double service_rate);

// All-pairs hop routing over the physical topology. Shortest paths by hop
// count; among equal-length paths the lexicographically smallest node
// sequence wins.
class Topology {
 public:
  explicit Topology(const Scenario& scenario);

  [[nodiscard]] int node_count() const { return n_; }
  [[nodiscard]] bool connected(int from, int to) const { return dist_[from][to] >= 0; }
  [[nodiscard]] int hops(int from, int to) const { return dist_[from][to]; }
  // Node sequence from -> to inclusive. Throws RoutingError if unreachable.
  [[nodiscard]] std::vector<int> path(int from, int to) const;
  // Index into Scenario::links of the link joining adjacent nodes a and b.
  [[nodiscard]] int link_between(int a, int b) const { return link_[a][b]; }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<int>> dist_;
  std::vector<std::vector<int>> link_;
};

// Data units per slot on one physical hop: the smaller of the link's packet
// rate times the packet size and the Shannon capacity with every other node
// interfering.
[[nodiscard]] double hop_rate(const Scenario& scenario, int link_index, int from, int to, double packet_size);

// Sum of per-hop transmission delays between two nodes (0 if equal).
[[nodiscard]] double route_transmission_delay(const Scenario& scenario, const Topology& topo, int from, int to,
                                              double packet_size);

// One allocation per consecutive chain pair placed on the same node; one per
// hop along the shortest path for pairs on different nodes. placement maps
// VNF id -> node id (negative = unplaced).
[[nodiscard]] std::vector<VirtualLinkAllocation> allocate_virtual_links(std::span<const int> placement, const Sfc& sfc,
                                                                        const Scenario& scenario);
[[nodiscard]] std::vector<VirtualLinkAllocation> allocate_virtual_links(std::span<const int> placement, const Sfc& sfc,
                                                                        const Scenario& scenario,
                                                                        const Topology& topo);

struct DelayBreakdown {
  double processing = 0.0;
  double transmission = 0.0;
  double queueing = 0.0;
  double total = 0.0;
};

struct QueueState {
  double arrival_rate = 0.0;
  double service_rate = 1.0;
};

struct DelayOptions {
  // Multiply the processing sum by the origin node's arrival mean.
  bool scale_processing_by_arrival = true;
};

// sigma_origin * sum of processing delays + sum of hop transmission delays +
// controller queueing delay.
[[nodiscard]] DelayBreakdown end_to_end_delay(const Scenario& scenario, const ServiceRequest& request,
                                              std::span<const int> placement,
                                              std::span<const VirtualLinkAllocation> allocations,
                                              const QueueState& queue, const DelayOptions& options = {});

}  // namespace sfcedge
