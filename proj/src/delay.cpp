#include "sfcedge/delay.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

#include "sfcedge/error.hpp"

namespace sfcedge {

double processing_delay(double packet_size, const ResourceVector& node_available) {
  if (!(node_available.compute > 0.0)) throw DelayError("processing on a node with no compute available");
  return packet_size / node_available.compute;
}

double link_capacity(const ChannelModel& ch, int from, int to, std::span<const int> interferers) {
  if (from == to) throw std::invalid_argument("link capacity needs distinct endpoints");
  double interference = 0.0;
  for (int k : interferers) {
    if (k == from) throw std::invalid_argument("transmitter listed as its own interferer");
    interference += ch.tx_power.at(k) * ch.gain.at(k).at(to);
  }
  const double sinr = ch.tx_power.at(from) * ch.gain.at(from).at(to) / (ch.noise_var + interference);
  return ch.bandwidth * std::log2(1.0 + sinr);
}

std::vector<int> default_interferers(int node_count, int from, int to) {
  std::vector<int> out;
  for (int k = 0; k < node_count; ++k)
    if (k != from && k != to) out.push_back(k);
  return out;
}

double transmission_delay(double packet_size, const VirtualLinkAllocation& vl, double capacity) {
  if (!vl.cross_node || packet_size == 0.0) return 0.0;
  if (!(capacity > 0.0)) throw DelayError("cross-node virtual link with zero capacity");
  return packet_size / capacity;
}

double queueing_delay(double arrival_rate, double service_rate) {
  if (arrival_rate < 0.0 || !(service_rate > arrival_rate))
    throw DelayError("unstable queue: arrival rate " + std::to_string(arrival_rate) + " >= service rate " +
                     std::to_string(service_rate));
  return 1.0 / (service_rate - arrival_rate);
}

Topology::Topology(const Scenario& sc) : n_(sc.node_count()) {
  adj_.assign(n_, {});
  link_.assign(n_, std::vector<int>(n_, -1));
  for (std::size_t l = 0; l < sc.links.size(); ++l) {
    const auto& link = sc.links[l];
    if (link.from < 0 || link.from >= n_ || link.to < 0 || link.to >= n_ || link.from == link.to) continue;
    if (link_[link.from][link.to] >= 0) continue;
    link_[link.from][link.to] = static_cast<int>(l);
    link_[link.to][link.from] = static_cast<int>(l);
    adj_[link.from].push_back(link.to);
    adj_[link.to].push_back(link.from);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
  dist_.assign(n_, std::vector<int>(n_, -1));
  for (int s = 0; s < n_; ++s) {
    auto& d = dist_[s];
    std::queue<int> q;
    d[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int w : adj_[u])
        if (d[w] < 0) {
          d[w] = d[u] + 1;
          q.push(w);
        }
    }
  }
}

std::vector<int> Topology::path(int from, int to) const {
  if (dist_[from][to] < 0)
    throw RoutingError("no path from node " + std::to_string(from) + " to node " + std::to_string(to));
  std::vector<int> p{from};
  int u = from;
  while (u != to) {
    // adj_ is sorted, so the first neighbour one hop closer has the lowest id.
    for (int w : adj_[u])
      if (dist_[w][to] == dist_[u][to] - 1) {
        u = w;
        break;
      }
    p.push_back(u);
  }
  return p;
}

double hop_rate(const Scenario& sc, int link_index, int from, int to, double packet_size) {
  const auto interferers = default_interferers(sc.node_count(), from, to);
  const double shannon = link_capacity(sc.channel, from, to, interferers);
  const double packet_rate = sc.links.at(link_index).capacity * packet_size;
  return std::min(packet_rate, shannon);
}

double route_transmission_delay(const Scenario& sc, const Topology& topo, int from, int to, double packet_size) {
  if (from == to) return 0.0;
  const auto p = topo.path(from, to);
  double total = 0.0;
  for (std::size_t h = 0; h + 1 < p.size(); ++h) {
    VirtualLinkAllocation vl{0, topo.link_between(p[h], p[h + 1]), true, p[h], p[h + 1]};
    total += transmission_delay(packet_size, vl, hop_rate(sc, *vl.phyl, p[h], p[h + 1], packet_size));
  }
  return total;
}

std::vector<VirtualLinkAllocation> allocate_virtual_links(std::span<const int> placement, const Sfc& sfc,
                                                          const Scenario& sc) {
  return allocate_virtual_links(placement, sfc, sc, Topology(sc));
}

std::vector<VirtualLinkAllocation> allocate_virtual_links(std::span<const int> placement, const Sfc& sfc,
                                                          const Scenario& sc, const Topology& topo) {
  auto node_of = [&](int vnf) {
    if (vnf < 0 || vnf >= static_cast<int>(placement.size()) || placement[vnf] < 0 || placement[vnf] >= sc.node_count())
      throw PlacementError("VNF " + std::to_string(vnf) + " of SFC " + std::to_string(sfc.id) + " is not placed");
    return placement[vnf];
  };
  std::vector<VirtualLinkAllocation> out;
  for (std::size_t k = 0; k + 1 < sfc.chain.size(); ++k) {
    const int a = node_of(sfc.chain[k]);
    const int b = node_of(sfc.chain[k + 1]);
    const int vl = static_cast<int>(k);
    if (a == b) {
      out.push_back({vl, std::nullopt, false, a, b});
      continue;
    }
    const auto p = topo.path(a, b);
    for (std::size_t h = 0; h + 1 < p.size(); ++h)
      out.push_back({vl, topo.link_between(p[h], p[h + 1]), true, p[h], p[h + 1]});
  }
  // Last VNF still needs to be checked as placed.
  if (!sfc.chain.empty()) (void)node_of(sfc.chain.back());
  return out;
}

DelayBreakdown end_to_end_delay(const Scenario& sc, const ServiceRequest& req, std::span<const int> placement,
                                std::span<const VirtualLinkAllocation> allocations, const QueueState& queue,
                                const DelayOptions& opt) {
  const Sfc& sfc = sc.sfcs.at(req.sfc_id);
  DelayBreakdown d;
  for (int vnf : sfc.chain) {
    if (vnf < 0 || vnf >= static_cast<int>(placement.size()) || placement[vnf] < 0)
      throw PlacementError("VNF " + std::to_string(vnf) + " is not placed");
    d.processing += processing_delay(req.packet_size, sc.nodes.at(placement[vnf]).available);
  }
  if (opt.scale_processing_by_arrival) d.processing *= sc.nodes.at(req.origin_en).arrival_mean;
  for (const auto& vl : allocations) {
    if (!vl.cross_node) continue;
    d.transmission += transmission_delay(req.packet_size, vl, hop_rate(sc, *vl.phyl, vl.from_en, vl.to_en, req.packet_size));
  }
  d.queueing = queueing_delay(queue.arrival_rate, queue.service_rate);
  d.total = d.processing + d.transmission + d.queueing;
  return d;
}

}  // namespace sfcedge
