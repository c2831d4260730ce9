#pragma once

#include <utility>
#include <vector>

#include "sfcedge/scenario.hpp"

namespace fixture {

// Hand-sized scenario: node i has compute[i] and generous storage/transmit;
// every VNF needs <need_compute, 1, 1>. The channel is effectively unlimited so
// forwarding costs one slot per hop.
inline sfcedge::Scenario scenario(std::vector<double> compute, std::vector<std::pair<int, int>> links,
                                  std::vector<int> processing, std::vector<std::vector<int>> chains,
                                  double need_compute = 1.0, double link_capacity = 1e9) {
  using namespace sfcedge;
  Scenario sc;
  const int n = static_cast<int>(compute.size());
  for (int i = 0; i < n; ++i) {
    EdgeNode e;
    e.id = i;
    e.capacity = {compute[i], 1e6, 1e6};
    e.available = e.capacity;
    e.arrival_mean = 1.0;
    e.quota_min = 0;
    e.quota_max = 1 << 30;
    sc.nodes.push_back(e);
  }
  for (auto [a, b] : links) sc.links.push_back({a, b, link_capacity});
  for (std::size_t v = 0; v < processing.size(); ++v)
    sc.vnfs.push_back({static_cast<int>(v), {need_compute, 1.0, 1.0}, processing[v]});
  for (std::size_t s = 0; s < chains.size(); ++s) sc.sfcs.push_back(Sfc::from_chain(static_cast<int>(s), chains[s]));
  sc.channel.bandwidth = 1e12;
  sc.channel.noise_var = 1.0;
  sc.channel.tx_power.assign(n, 1.0);
  sc.channel.gain.assign(n, std::vector<double>(n, 1.0));
  sc.horizon = 16;
  return sc;
}

inline sfcedge::ServiceRequest request(int sfc, int origin = 0, double size = 1.0, int arrival = 0,
                                       int timeout = 1000) {
  sfcedge::ServiceRequest r;
  r.user_id = sfc;
  r.origin_en = origin;
  r.sfc_id = sfc;
  r.packet_size = size;
  r.arrival_slot = arrival;
  r.timeout = timeout;
  return r;
}

}  // namespace fixture
