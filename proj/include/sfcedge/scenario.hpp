#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfcedge/resource.hpp"

namespace sfcedge {

// Identifiers of nodes, VNFs and SFCs are their positions in the scenario
// vectors; validate_scenario reports any entry whose id disagrees.

struct EdgeNode {
  int id = 0;
  ResourceVector capacity;
  ResourceVector available;
  double arrival_mean = 0.0;  // mean requests per slot originating here
  int quota_min = 0;
  int quota_max = 0;
};

// Undirected physical link; capacity in packets per slot.
struct PhysicalLink {
  int from = 0;
  int to = 0;
  double capacity = 1.0;
};

struct VnfSpec {
  int id = 0;
  ResourceVector requirement;
  int processing_time = 1;  // slots
};

struct Sfc {
  int id = 0;
  std::vector<int> chain;          // VNF ids in traversal order
  int source = 0;                  // first VNF of the chain
  int destination = 0;             // last VNF of the chain
  std::vector<int> virtual_links;  // one id per consecutive pair

  // Builds a chain with source/destination/virtual links filled in.
  static Sfc from_chain(int id, std::vector<int> chain);
};

struct ServiceRequest {
  int user_id = 0;
  int origin_en = 0;
  int sfc_id = 0;
  double packet_size = 1.0;  // data units
  int timeout = 1;           // absolute slot by which the chain must complete
  int arrival_slot = 0;

  friend bool operator==(const ServiceRequest&, const ServiceRequest&) = default;
};

// Wireless inter-EN channel. gain holds squared magnitudes |g_(i,i')|^2.
struct ChannelModel {
  double bandwidth = 1.0;
  std::vector<double> tx_power;
  std::vector<std::vector<double>> gain;
  double noise_var = 1.0;
};

struct ArrivalModel {
  double packet_size_min = 100.0;
  double packet_size_max = 10000.0;
  int timeout_slots = 10000;   // relative deadline added to the arrival slot
  double service_rate = 0.0;   // controller M/M/1 service rate; 0 means 2 * max arrival mean
};

struct Scenario {
  std::vector<EdgeNode> nodes;
  std::vector<PhysicalLink> links;
  std::vector<VnfSpec> vnfs;
  std::vector<Sfc> sfcs;
  ChannelModel channel;
  ArrivalModel arrivals;
  int horizon = 1;
  std::uint64_t seed = 0;

  [[nodiscard]] int node_count() const { return static_cast<int>(nodes.size()); }
  [[nodiscard]] double queue_service_rate() const;
};

struct Violation {
  std::string kind;
  std::string detail;
};

// Returns every invariant violation; an empty report means the scenario is
// well formed and its topology is connected.
[[nodiscard]] std::vector<Violation> validate_scenario(const Scenario& scenario);

struct GenerationConfig {
  int n_ens_min = 3;
  int n_ens_max = 15;
  int vnfs_per_en_min = 1;
  int vnfs_per_en_max = 1000;
  int n_sfcs = 8;
  int chain_len_min = 1;
  int chain_len_max = 4;
  double packet_size_min = 100.0;
  double packet_size_max = 10000.0;
  double arrival_mean_min = 0.1;
  double arrival_mean_max = 1.0;
  // VNF requirement ranges, per component.
  ResourceVector requirement_min{50.0, 10.0, 10.0};
  ResourceVector requirement_max{150.0, 100.0, 100.0};
  // EN capacity = headroom * (VNFs sized for the EN) * mean requirement.
  double headroom_min = 1.5;
  double headroom_max = 3.0;
  int processing_time_min = 1;
  int processing_time_max = 4;
  double link_capacity_min = 1.0;
  double link_capacity_max = 4.0;
  double extra_link_probability = 0.3;
  double bandwidth = 2000.0;
  double noise_var = 1e-3;
  int horizon = 10;
  int timeout_slots = 10000;
  std::optional<int> quota_min;  // default 1
  std::optional<int> quota_max;  // default floor(capacity.compute / mean VNF compute)
};

// Deterministic in (config, seed). Throws InfeasibleConfig when the minimum
// quotas cannot be met by the generated VNF count, or the ranges are empty.
[[nodiscard]] Scenario generate_scenario(const GenerationConfig& config, std::uint64_t seed);

// Poisson(arrival_mean) requests per EN per slot over the scenario horizon,
// SFC uniform over the catalog, packet size uniform over the arrival range.
[[nodiscard]] std::vector<ServiceRequest> sample_arrivals(const Scenario& scenario, std::uint64_t seed);

// One request per SFC, so every VNF the chains cover is requested: origin
// uniform over nodes, arrival uniform over the horizon, packet size uniform.
[[nodiscard]] std::vector<ServiceRequest> catalog_requests(const Scenario& scenario, std::uint64_t seed);

}  // namespace sfcedge
