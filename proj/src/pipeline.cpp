#include "sfcedge/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "sfcedge/delay.hpp"
#include "sfcedge/error.hpp"

namespace sfcedge {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double mean_end_to_end_delay(const Workload& wl, std::span<const int> node_of_vnf) {
  const auto& sc = wl.scenario();
  const auto& reqs = wl.requests();
  if (reqs.empty()) return 0.0;
  const double mu = sc.queue_service_rate();
  double total = 0.0;
  for (const auto& r : reqs) {
    const auto& sfc = sc.sfcs.at(r.sfc_id);
    const auto vls = allocate_virtual_links(node_of_vnf, sfc, sc, wl.topology());
    total += end_to_end_delay(sc, r, node_of_vnf, vls, {sc.nodes.at(r.origin_en).arrival_mean, mu}).total;
  }
  return total / static_cast<double>(reqs.size());
}

void finalize_result(const Workload& wl, MethodResult& res) {
  res.report = check_schedule(wl, res.schedule);
  res.makespan = res.schedule.jobs.empty() ? 0 : makespan(res.schedule);
  res.mean_delay = mean_end_to_end_delay(wl, res.node_of_vnf);
  const auto& sc = wl.scenario();
  double busy = 0.0, cap = 0.0;
  for (const auto& sj : res.schedule.jobs) busy += sc.vnfs[wl.jobs()[sj.job].vnf].requirement.compute * sj.length;
  for (const auto& n : sc.nodes) cap += n.capacity.compute;
  res.utilization = res.makespan > 0 && cap > 0.0 ? busy / (cap * res.makespan) : 0.0;
}

Quotas workload_quotas(const Workload& wl) {
  const auto& sc = wl.scenario();
  const int n = sc.node_count();
  const int f = static_cast<int>(wl.vnfs().size());
  Quotas q;
  for (const auto& node : sc.nodes) {
    q.q_min.push_back(std::clamp(node.quota_min, 0, f));
    q.q_max.push_back(std::max(node.quota_max, q.q_min.back()));
  }
  std::vector<int> by_size(n);
  std::iota(by_size.begin(), by_size.end(), 0);
  std::stable_sort(by_size.begin(), by_size.end(),
                   [&](int a, int b) { return sc.nodes[a].capacity.compute < sc.nodes[b].capacity.compute; });
  int total_min = std::accumulate(q.q_min.begin(), q.q_min.end(), 0);
  for (int e : by_size) {
    if (total_min <= f) break;
    const int cut = std::min(q.q_min[e], total_min - f);
    q.q_min[e] -= cut;
    total_min -= cut;
  }
  long total_max = std::accumulate(q.q_max.begin(), q.q_max.end(), 0L);
  if (total_max < f && n > 0) q.q_max[by_size.back()] += static_cast<int>(f - total_max);
  return q;
}

MethodResult run_pipeline(const Workload& wl, const PipelineConfig& cfg) {
  using clock = std::chrono::steady_clock;
  const auto& sc = wl.scenario();
  const int n = sc.node_count();
  const auto& vnfs = wl.vnfs();
  const int f = static_cast<int>(vnfs.size());
  MethodResult res;
  res.method = "imla-emsda";

  auto t0 = clock::now();
  res.games = learn_node_games(wl, cfg.beta, cfg.learning);
  const auto placed = place_vnfs(wl, res.games);
  res.placement = placed.assignment;
  res.place_ms = ms_since(t0);

  t0 = clock::now();
  PreferenceLists prefs;
  prefs.en_count = n;
  prefs.vnf_prefs = build_vnf_preferences(wl, placed.assignment);
  prefs.en_prefs = build_en_preferences(sc, vnfs);
  EmsdaOptions opt;
  opt.rule = cfg.reservation;
  if (opt.rule == ReservationRule::resource_sum) {
    // Same normalisation as the node-side ranking, so one unit is one mean-sized VNF.
    ResourceVector total;
    for (int v : vnfs) total += sc.vnfs[v].requirement;
    const double mean_c = f > 0 ? total.compute / f : 1.0;
    for (int v : vnfs) opt.weights.push_back(mean_c > 0.0 ? sc.vnfs[v].requirement.compute / mean_c : 1.0);
  }
  opt.can_finalize = [&](int local, int en) {
    const int v = vnfs[local];
    if (!wl.fits(v, en)) return false;
    for (int k : wl.jobs_of_vnf(v))
      if (wl.release(k) + wl.processing_slots(k, en) > wl.timeout(k)) return false;
    return true;
  };
  res.matching = emsda(prefs, workload_quotas(wl), opt);

  res.node_of_vnf.assign(sc.vnfs.size(), -1);
  for (int k = 0; k < f; ++k) {
    if (res.matching.assignment[k] < 0) throw MatchingError("VNF " + std::to_string(vnfs[k]) + " left unmatched");
    res.node_of_vnf[vnfs[k]] = res.matching.assignment[k];
  }
  std::vector<int> order;
  order.reserve(f);
  for (int k : res.matching.finalization_order) order.push_back(vnfs[k]);
  res.schedule = build_schedule(wl, res.node_of_vnf, order);
  res.schedule_ms = ms_since(t0);

  std::size_t iterations = 0;
  for (const auto& g : res.games) iterations += g.learning.trace.iterates.size();
  const std::size_t jobs = wl.jobs().size();
  res.operations = iterations + 2 * static_cast<std::size_t>(f) * n + jobs;
  res.memory_bytes = iterations * sizeof(TracePoint) + static_cast<std::size_t>(f) * n * sizeof(int) +
                     jobs * sizeof(ScheduledJob);
  finalize_result(wl, res);
  return res;
}

}  // namespace sfcedge
