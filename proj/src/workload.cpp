#include "sfcedge/workload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sfcedge/error.hpp"

namespace sfcedge {

namespace {

// Guards ceil() against representation noise on exact integers.
int ceil_slots(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }

}  // namespace

Workload::Workload(const Scenario& sc, std::vector<ServiceRequest> requests)
    : scenario_(&sc), topo_(sc), requests_(std::move(requests)) {
  const int nv = static_cast<int>(sc.vnfs.size());
  vnf_index_.assign(nv, -1);
  jobs_of_vnf_.assign(nv, {});
  for (int r = 0; r < static_cast<int>(requests_.size()); ++r) {
    const auto& req = requests_[r];
    if (req.sfc_id < 0 || req.sfc_id >= static_cast<int>(sc.sfcs.size()))
      throw std::invalid_argument("request " + std::to_string(r) + " names unknown SFC " + std::to_string(req.sfc_id));
    if (req.origin_en < 0 || req.origin_en >= sc.node_count())
      throw std::invalid_argument("request " + std::to_string(r) + " names unknown node " + std::to_string(req.origin_en));
    const auto& chain = sc.sfcs[req.sfc_id].chain;
    for (int k = 0; k < static_cast<int>(chain.size()); ++k) {
      Job j{r, k, chain[k], -1, -1};
      if (k > 0) {
        j.pred = static_cast<int>(jobs_.size()) - 1;
        jobs_.back().succ = static_cast<int>(jobs_.size());
      }
      jobs_of_vnf_.at(chain[k]).push_back(static_cast<int>(jobs_.size()));
      jobs_.push_back(j);
    }
    horizon_ = std::max(horizon_, req.timeout);
  }
  for (int v = 0; v < nv; ++v)
    if (!jobs_of_vnf_[v].empty()) {
      vnf_index_[v] = static_cast<int>(vnfs_.size());
      vnfs_.push_back(v);
    }

  const int n = sc.node_count();
  routes_.assign(n, std::vector<std::vector<Hop>>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b || !topo_.connected(a, b)) continue;
      const auto p = topo_.path(a, b);
      for (std::size_t h = 0; h + 1 < p.size(); ++h) {
        const int link = topo_.link_between(p[h], p[h + 1]);
        const auto interferers = default_interferers(n, p[h], p[h + 1]);
        const double shannon = link_capacity(sc.channel, p[h], p[h + 1], interferers);
        routes_[a][b].push_back({1.0 / sc.links[link].capacity,
                                 shannon > 0.0 ? 1.0 / shannon : std::numeric_limits<double>::infinity()});
      }
    }
}

int Workload::processing_slots(int job, int en) const {
  const auto& j = jobs_[job];
  const double compute = scenario_->nodes[en].capacity.compute;
  if (!(compute > 0.0)) throw DelayError("node " + std::to_string(en) + " has no compute");
  const int base = scenario_->vnfs[j.vnf].processing_time;
  return std::max(base, ceil_slots(requests_[j.request].packet_size / compute));
}

double Workload::transmission_delay(int job, int from_en, int to_en) const {
  if (from_en == to_en) return 0.0;
  if (!topo_.connected(from_en, to_en))
    throw RoutingError("no path from node " + std::to_string(from_en) + " to node " + std::to_string(to_en));
  const double d = requests_[jobs_[job].request].packet_size;
  double total = 0.0;
  // d / min(L*d, C) == max(1/L, d/C)
  for (const auto& h : routes_[from_en][to_en]) total += std::max(h.inv_packet_rate, d * h.inv_shannon);
  return total;
}

int Workload::forward_slots(int job, int from_en, int to_en) const {
  if (from_en == to_en) return 0;
  const double t = transmission_delay(job, from_en, to_en);
  if (!std::isfinite(t)) throw DelayError("cross-node virtual link with zero capacity");
  return std::max(1, ceil_slots(t));
}

bool Workload::fits(int vnf_id, int en) const {
  return scenario_->vnfs[vnf_id].requirement.fits_within(scenario_->nodes[en].capacity) &&
         scenario_->nodes[en].capacity.compute > 0.0;
}

}  // namespace sfcedge
