#include "sfcedge/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>

#include "sfcedge/error.hpp"

namespace sfcedge {

namespace {

// Per-node, per-slot resource usage.
class UsageGrid {
 public:
  explicit UsageGrid(int nodes) : use_(nodes) {}

  [[nodiscard]] bool fits(int en, int slot, const ResourceVector& need, const ResourceVector& cap) const {
    const auto& row = use_[en];
    const ResourceVector used = slot < static_cast<int>(row.size()) ? row[slot] : ResourceVector{};
    return (used + need).fits_within(cap);
  }
  void add(int en, int from, int to, const ResourceVector& need) {
    auto& row = use_[en];
    if (static_cast<int>(row.size()) < to) row.resize(to);
    for (int s = from; s < to; ++s) row[s] += need;
  }
  [[nodiscard]] const std::vector<ResourceVector>& row(int en) const { return use_[en]; }

 private:
  std::vector<std::vector<ResourceVector>> use_;
};

std::string describe(const Workload& wl, int j) {
  const auto& job = wl.jobs()[j];
  return "job=" + std::to_string(j) + " request=" + std::to_string(job.request) + " vnf=" + std::to_string(job.vnf);
}

}  // namespace

Schedule build_schedule_by_priority(const Workload& wl, std::span<const int> node_of_vnf,
                                    std::span<const long> job_priority) {
  const auto& sc = wl.scenario();
  const auto& jobs = wl.jobs();
  const int nj = static_cast<int>(jobs.size());
  if (static_cast<int>(job_priority.size()) != nj) throw std::invalid_argument("one priority per job");

  Schedule out;
  out.horizon = wl.horizon();
  out.node_of_vnf.assign(node_of_vnf.begin(), node_of_vnf.end());
  out.jobs.resize(nj);
  auto node = [&](int j) {
    const int v = jobs[j].vnf;
    if (v >= static_cast<int>(node_of_vnf.size()) || node_of_vnf[v] < 0 || node_of_vnf[v] >= sc.node_count())
      throw ScheduleError("VNF " + std::to_string(v) + " has no execution node");
    return node_of_vnf[v];
  };

  using Key = std::pair<long, int>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  for (int j = 0; j < nj; ++j)
    if (jobs[j].pred < 0) ready.emplace(job_priority[j], j);

  UsageGrid usage(sc.node_count());
  while (!ready.empty()) {
    const int j = ready.top().second;
    ready.pop();
    const auto& job = jobs[j];
    const int en = node(j);
    const auto& need = sc.vnfs[job.vnf].requirement;
    const auto& cap = sc.nodes[en].capacity;
    const int r = job.request;
    if (!wl.fits(job.vnf, en))
      throw ScheduleError("request " + std::to_string(r) + ": VNF " + std::to_string(job.vnf) +
                          " does not fit node " + std::to_string(en));
    const int len = wl.processing_slots(j, en);
    int t = wl.release(j);
    if (job.pred >= 0) t = std::max(t, out.jobs[job.pred].fwd_end());
    const int latest = wl.timeout(j) - len;
    for (;;) {
      if (t > latest)
        throw ScheduleError("request " + std::to_string(r) + " cannot complete by its timeout slot " +
                            std::to_string(wl.timeout(j)));
      int blocked = -1;
      for (int s = t; s < t + len; ++s)
        if (!usage.fits(en, s, need, cap)) {
          blocked = s;
          break;
        }
      if (blocked < 0) break;
      t = blocked + 1;
    }
    usage.add(en, t, t + len, need);
    auto& sj = out.jobs[j];
    sj = {j, en, t, len, t + len, 0};
    if (job.succ >= 0) {
      sj.fwd_length = wl.forward_slots(j, en, node(job.succ));
      ready.emplace(job_priority[job.succ], job.succ);
    }
  }
  return out;
}

Schedule build_schedule(const Workload& wl, std::span<const int> node_of_vnf, std::span<const int> vnf_order) {
  const auto& jobs = wl.jobs();
  const int nj = static_cast<int>(jobs.size());
  std::vector<int> vnf_rank(wl.scenario().vnfs.size(), static_cast<int>(vnf_order.size()));
  for (int k = 0; k < static_cast<int>(vnf_order.size()); ++k) vnf_rank.at(vnf_order[k]) = k;

  std::vector<int> req_order(wl.requests().size());
  std::iota(req_order.begin(), req_order.end(), 0);
  std::stable_sort(req_order.begin(), req_order.end(), [&](int a, int b) {
    return wl.requests()[a].arrival_slot < wl.requests()[b].arrival_slot;
  });
  std::vector<int> req_rank(req_order.size());
  for (int k = 0; k < static_cast<int>(req_order.size()); ++k) req_rank[req_order[k]] = k;

  std::vector<int> idx(nj);
  std::iota(idx.begin(), idx.end(), 0);
  auto key = [&](int j) { return std::tuple(vnf_rank[jobs[j].vnf], req_rank[jobs[j].request], jobs[j].position); };
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return key(a) < key(b); });
  std::vector<long> priority(nj);
  for (int k = 0; k < nj; ++k) priority[idx[k]] = k;
  return build_schedule_by_priority(wl, node_of_vnf, priority);
}

int makespan(const Schedule& s) {
  if (s.jobs.empty()) throw std::invalid_argument("makespan of an empty schedule");
  int m = 0;
  for (const auto& j : s.jobs) m = std::max(m, j.end());
  return m;
}

bool ConstraintReport::valid() const {
  return std::all_of(constraints.begin(), constraints.end(), [](const auto& c) { return c.passed(); });
}

ConstraintReport check_schedule(const Workload& wl, const Schedule& s) {
  ConstraintReport rep;
  for (int k = 0; k < 7; ++k) rep.constraints[k].name = "c" + std::to_string(k + 1);
  auto& c1 = rep.constraints[0].violations;
  auto& c2 = rep.constraints[1].violations;
  auto& c3 = rep.constraints[2].violations;
  auto& c4 = rep.constraints[3].violations;
  auto& c5 = rep.constraints[4].violations;
  auto& c6 = rep.constraints[5].violations;
  auto& c7 = rep.constraints[6].violations;

  const auto& sc = wl.scenario();
  const auto& jobs = wl.jobs();
  const int nj = static_cast<int>(jobs.size());
  if (static_cast<int>(s.jobs.size()) != nj) {
    c2.push_back("schedule covers " + std::to_string(s.jobs.size()) + " of " + std::to_string(nj) + " jobs");
    return rep;
  }

  for (int j = 0; j < nj; ++j) {
    const auto& job = jobs[j];
    const auto& sj = s.jobs[j];
    const std::string who = describe(wl, j);
    const bool node_ok = sj.en >= 0 && sj.en < sc.node_count();
    const int matched = job.vnf < static_cast<int>(s.node_of_vnf.size()) ? s.node_of_vnf[job.vnf] : -1;

    // c2
    if (!node_ok || sj.en != matched) {
      c2.push_back(who + " runs on node " + std::to_string(sj.en) + " but is matched to " + std::to_string(matched));
    } else if (sj.length < wl.processing_slots(j, sj.en)) {
      c2.push_back(who + " has " + std::to_string(sj.length) + " processing slots, needs " +
                   std::to_string(wl.processing_slots(j, sj.en)));
    }
    if (sj.start < 0 || sj.end() > s.horizon)
      c2.push_back(who + " processes outside [0," + std::to_string(s.horizon) + ")");

    // c3
    if (sj.start < wl.release(j))
      c3.push_back(who + " starts at " + std::to_string(sj.start) + " before arrival " + std::to_string(wl.release(j)));
    if (job.pred >= 0 && sj.start < s.jobs[job.pred].end())
      c3.push_back(who + " starts before its predecessor finishes");

    // c4
    if (job.succ < 0 && sj.end() > wl.timeout(j))
      c4.push_back(who + " completes at " + std::to_string(sj.end()) + " after timeout " + std::to_string(wl.timeout(j)));

    if (job.succ >= 0) {
      const auto& sw = s.jobs[job.succ];
      // c1
      if (sj.end() > sw.start) c1.push_back(who + " overlaps its successor");
      // c5
      if (sj.fwd_length < 0 || sj.fwd_start < sj.end())
        c5.push_back(who + " forwards at " + std::to_string(sj.fwd_start) + " before processing ends at " +
                     std::to_string(sj.end()));
      // c6
      if (sw.start < sj.fwd_end())
        c6.push_back(describe(wl, job.succ) + " starts before forwarding from " + who + " ends");
      if (node_ok && sw.en >= 0 && sw.en < sc.node_count() && sj.fwd_length < wl.forward_slots(j, sj.en, sw.en))
        c6.push_back(who + " forwards for " + std::to_string(sj.fwd_length) + " slots, needs " +
                     std::to_string(wl.forward_slots(j, sj.en, sw.en)));
    } else if (sj.fwd_length != 0) {
      c5.push_back(who + " forwards although it ends the chain");
    }

    // c7: requirement coverage
    if (node_ok) {
      const double d = wl.requests()[job.request].packet_size;
      const int need = static_cast<int>(std::ceil(d / sc.nodes[sj.en].capacity.compute - 1e-9));
      if (sj.length + sj.fwd_length < need) c7.push_back(who + " gets fewer slots than its packet needs");
    }
  }

  // c7: per-slot node capacity
  UsageGrid usage(sc.node_count());
  for (int j = 0; j < nj; ++j) {
    const auto& sj = s.jobs[j];
    if (sj.en < 0 || sj.en >= sc.node_count() || sj.start < 0 || sj.length < 0) continue;
    usage.add(sj.en, sj.start, sj.end(), sc.vnfs[jobs[j].vnf].requirement);
  }
  for (int e = 0; e < sc.node_count(); ++e) {
    const auto& row = usage.row(e);
    for (int t = 0; t < static_cast<int>(row.size()); ++t)
      if (!row[t].fits_within(sc.nodes[e].capacity))
        c7.push_back("node=" + std::to_string(e) + " slot=" + std::to_string(t) + " exceeds capacity");
  }
  return rep;
}

void write_report_csv(std::ostream& out, const ConstraintReport& rep) {
  out << "constraint,pass,violation_count\r\n";
  for (const auto& c : rep.constraints)
    out << c.name << ',' << (c.passed() ? "true" : "false") << ',' << c.violations.size() << "\r\n";
}

}  // namespace sfcedge
