#include "sfcedge/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sfcedge/delay.hpp"
#include "sfcedge/error.hpp"

namespace sfcedge {

void PreferenceLists::validate() const {
  const int nv = vnf_count();
  for (int f = 0; f < nv; ++f) {
    std::vector<char> seen(en_count, 0);
    for (int e : vnf_prefs[f]) {
      if (e < 0 || e >= en_count)
        throw std::invalid_argument("VNF " + std::to_string(f) + " ranks unknown node " + std::to_string(e));
      if (seen[e]++) throw std::invalid_argument("VNF " + std::to_string(f) + " ranks node " + std::to_string(e) + " twice");
    }
  }
  if (static_cast<int>(en_prefs.size()) != nv) throw std::invalid_argument("node ranking must list every VNF once");
  std::vector<char> seen(nv, 0);
  for (int f : en_prefs) {
    if (f < 0 || f >= nv || seen[f]++) throw std::invalid_argument("node ranking is not a permutation of the VNFs");
  }
}

std::vector<int> PreferenceLists::en_rank() const {
  std::vector<int> rank(vnf_count(), 0);
  for (int k = 0; k < static_cast<int>(en_prefs.size()); ++k) rank[en_prefs[k]] = k;
  return rank;
}

Matching Matching::from_assignment(std::vector<int> assignment, int en_count) {
  Matching m;
  m.assignment = std::move(assignment);
  m.held.assign(en_count, {});
  for (int f = 0; f < static_cast<int>(m.assignment.size()); ++f)
    if (m.assignment[f] >= 0) m.held.at(m.assignment[f]).push_back(f);
  return m;
}

std::vector<std::vector<int>> build_vnf_preferences(const Workload& wl, std::span<const int> placement) {
  const auto& sc = wl.scenario();
  const int n = sc.node_count();
  const auto& jobs = wl.jobs();
  std::vector<std::vector<int>> prefs;
  prefs.reserve(wl.vnfs().size());
  std::vector<double> delay(n);
  std::vector<int> order(n);
  for (int vnf : wl.vnfs()) {
    const auto& served = wl.jobs_of_vnf(vnf);
    for (int e = 0; e < n; ++e) {
      if (!wl.fits(vnf, e)) {
        delay[e] = std::numeric_limits<double>::infinity();
        continue;
      }
      double s = 0.0;
      for (int k : served) {
        s += processing_delay(wl.requests()[jobs[k].request].packet_size, sc.nodes[e].capacity);
        const int succ = jobs[k].succ;
        if (succ >= 0) {
          const int sv = jobs[succ].vnf;
          if (sv < static_cast<int>(placement.size()) && placement[sv] >= 0) s += wl.transmission_delay(k, e, placement[sv]);
        }
      }
      delay[e] = s / static_cast<double>(served.size());
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return delay[a] < delay[b]; });
    prefs.push_back(order);
  }
  return prefs;
}

std::vector<int> build_en_preferences(const Scenario& sc, std::span<const int> vnf_ids) {
  ResourceVector mean;
  for (const auto& node : sc.nodes) mean += node.capacity;
  const double n = std::max(1, sc.node_count());
  const auto scale = [n](double total) { return total > 0.0 ? n / total : 0.0; };
  const double kc = scale(mean.compute), ks = scale(mean.storage), kw = scale(mean.transmit);

  std::vector<double> magnitude(vnf_ids.size());
  for (std::size_t k = 0; k < vnf_ids.size(); ++k) {
    const auto& r = sc.vnfs.at(vnf_ids[k]).requirement;
    magnitude[k] = r.compute * kc + r.storage * ks + r.transmit * kw;
  }
  std::vector<int> order(vnf_ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (magnitude[a] != magnitude[b]) return magnitude[a] < magnitude[b];
    return vnf_ids[a] < vnf_ids[b];
  });
  return order;
}

std::vector<int> build_en_preferences(const Scenario& sc) {
  std::vector<int> ids(sc.vnfs.size());
  std::iota(ids.begin(), ids.end(), 0);
  return build_en_preferences(sc, ids);
}

namespace {

// Deferred acceptance restricted to `group`; returns node per VNF (-1 for
// rejected or not in the group).
std::vector<int> deferred_acceptance(const PreferenceLists& prefs, const std::vector<int>& rank,
                                     const std::vector<int>& group, std::span<const int> caps) {
  const int nv = prefs.vnf_count();
  std::vector<int> match(nv, -1);
  std::vector<std::size_t> next(nv, 0);
  std::vector<std::vector<int>> held(prefs.en_count);
  std::deque<int> free(group.begin(), group.end());
  while (!free.empty()) {
    const int f = free.front();
    free.pop_front();
    const auto& list = prefs.vnf_prefs[f];
    if (next[f] >= list.size()) continue;
    const int e = list[next[f]++];
    auto& h = held[e];
    if (static_cast<int>(h.size()) < caps[e]) {
      h.push_back(f);
      match[f] = e;
      continue;
    }
    if (h.empty()) {
      free.push_back(f);
      continue;
    }
    auto worst = std::max_element(h.begin(), h.end(), [&](int a, int b) { return rank[a] < rank[b]; });
    if (rank[f] < rank[*worst]) {
      match[*worst] = -1;
      free.push_back(*worst);
      *worst = f;
      match[f] = e;
    } else {
      free.push_back(f);
    }
  }
  return match;
}

}  // namespace

Matching classic_daa(const PreferenceLists& prefs, std::span<const int> q_max) {
  prefs.validate();
  if (static_cast<int>(q_max.size()) != prefs.en_count) throw std::invalid_argument("one maximum quota per node");
  std::vector<int> all(prefs.vnf_count());
  std::iota(all.begin(), all.end(), 0);
  auto m = Matching::from_assignment(deferred_acceptance(prefs, prefs.en_rank(), all, q_max), prefs.en_count);
  for (int f : prefs.en_prefs)
    if (m.assignment[f] >= 0) m.finalization_order.push_back(f);
  return m;
}

Matching emsda(const PreferenceLists& prefs, const Quotas& quotas, const EmsdaOptions& opt) {
  prefs.validate();
  const int ne = prefs.en_count;
  const int nv = prefs.vnf_count();
  if (static_cast<int>(quotas.q_min.size()) != ne || static_cast<int>(quotas.q_max.size()) != ne)
    throw std::invalid_argument("one quota pair per node");
  for (int e = 0; e < ne; ++e)
    if (quotas.q_min[e] < 0 || quotas.q_min[e] > quotas.q_max[e])
      throw std::invalid_argument("node " + std::to_string(e) + " needs 0 <= q_min <= q_max");
  const long total_min = std::accumulate(quotas.q_min.begin(), quotas.q_min.end(), 0L);
  if (total_min > nv)
    throw MatchingError("minimum quotas (" + std::to_string(total_min) + ") exceed the " + std::to_string(nv) + " VNFs");
  if (opt.rule == ReservationRule::resource_sum && static_cast<int>(opt.weights.size()) != nv)
    throw std::invalid_argument("resource-sum reservation needs one weight per VNF");

  const auto rank = prefs.en_rank();
  std::vector<int> qmin = quotas.q_min, qmax = quotas.q_max;
  std::vector<int> pending = prefs.en_prefs;
  std::vector<int> result(nv, -1);
  std::vector<int> fixed_order;

  while (!pending.empty()) {
    const long q = std::accumulate(qmin.begin(), qmin.end(), 0L);
    if (q > static_cast<long>(pending.size()))
      throw MatchingError("minimum quotas can no longer be met by the pending VNFs");
    std::size_t reserved = 0;
    if (opt.rule == ReservationRule::count) {
      reserved = static_cast<std::size_t>(q);
    } else {
      double sum = 0.0;
      for (auto it = pending.rbegin(); it != pending.rend(); ++it) {
        sum += opt.weights[*it];
        if (sum > static_cast<double>(q)) break;
        ++reserved;
      }
    }
    const std::size_t split = pending.size() - reserved;
    const bool open_stage = split > 0;
    std::vector<int> group = open_stage ? std::vector<int>(pending.begin(), pending.begin() + split)
                                        : pending;
    const auto tentative = deferred_acceptance(prefs, rank, group, open_stage ? qmax : qmin);

    std::vector<char> fixed(nv, 0);
    int fixed_count = 0;
    for (int f : group) {
      const int e = tentative[f];
      if (e >= 0) {
        if (opt.can_finalize && !opt.can_finalize(f, e)) continue;
        result[f] = e;
        fixed_order.push_back(f);
        qmin[e] = std::max(qmin[e] - 1, 0);
        --qmax[e];
      } else if (!open_stage) {
        continue;
      }
      fixed[f] = 1;
      ++fixed_count;
    }
    if (fixed_count == 0) {
      std::string names;
      for (int f : pending) names += (names.empty() ? "" : ",") + std::to_string(f);
      throw MatchingError("matching deadlock: no pending VNF can be fixed {" + names + "}");
    }
    std::erase_if(pending, [&](int f) { return fixed[f] != 0; });
  }
  auto m = Matching::from_assignment(std::move(result), ne);
  m.finalization_order = std::move(fixed_order);
  return m;
}

bool is_feasible(const Matching& m, const Quotas& quotas) {
  const int ne = static_cast<int>(m.held.size());
  if (static_cast<int>(quotas.q_min.size()) != ne || static_cast<int>(quotas.q_max.size()) != ne) return false;
  for (int e = 0; e < ne; ++e)
    if (m.count(e) < quotas.q_min[e] || m.count(e) > quotas.q_max[e]) return false;
  return true;
}

std::vector<std::pair<int, int>> find_blocking_pairs(const Matching& m, const PreferenceLists& prefs,
                                                    const Quotas& quotas) {
  const auto rank = prefs.en_rank();
  std::vector<std::pair<int, int>> out;
  for (int f = 0; f < prefs.vnf_count(); ++f) {
    const int cur = m.assignment[f];
    const auto& list = prefs.vnf_prefs[f];
    const auto cur_it = cur >= 0 ? std::find(list.begin(), list.end(), cur) : list.end();
    const bool can_leave = cur < 0 || m.count(cur) - 1 >= quotas.q_min[cur];
    for (auto it = list.begin(); it != cur_it; ++it) {
      const int e = *it;
      const bool slack = m.count(e) < quotas.q_max[e] && can_leave;
      const bool displaces =
          std::any_of(m.held[e].begin(), m.held[e].end(), [&](int g) { return rank[f] < rank[g]; });
      if (slack || displaces) out.emplace_back(f, e);
    }
  }
  return out;
}

}  // namespace sfcedge
