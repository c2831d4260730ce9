#include "sfcedge/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "sfcedge/error.hpp"

namespace sfcedge {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<int> requests_by_arrival(const Workload& wl) {
  std::vector<int> order(wl.requests().size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return wl.requests()[a].arrival_slot < wl.requests()[b].arrival_slot;
  });
  return order;
}

Matching matching_from_nodes(const Workload& wl, std::span<const int> node_of_vnf) {
  std::vector<int> local;
  for (int v : wl.vnfs()) local.push_back(node_of_vnf[v]);
  return Matching::from_assignment(std::move(local), wl.node_count());
}

}  // namespace

MethodResult greedy_allocate(const Workload& wl) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& sc = wl.scenario();
  const auto& jobs = wl.jobs();
  MethodResult res;
  res.method = "greedy";
  res.placement.assign(sc.vnfs.size(), -1);
  std::vector<ResourceVector> avail;
  for (const auto& n : sc.nodes) avail.push_back(n.available);

  std::vector<int> first_job(wl.requests().size(), -1);
  for (int j = static_cast<int>(jobs.size()) - 1; j >= 0; --j)
    if (jobs[j].position == 0) first_job[jobs[j].request] = j;
  for (int r : requests_by_arrival(wl))
    for (int j = first_job[r]; j >= 0; j = jobs[j].succ) {
      const int v = jobs[j].vnf;
      if (res.placement[v] >= 0) continue;
      const auto& need = sc.vnfs[v].requirement;
      int best = -1;
      for (int e = 0; e < sc.node_count(); ++e)
        if (admit(avail[e], need) && (best < 0 || avail[e].compute > avail[best].compute)) best = e;
      if (best < 0) throw PlacementError("no node admits VNF " + std::to_string(v));
      res.placement[v] = best;
      avail[best] -= need;
    }
  res.place_ms = ms_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  res.node_of_vnf = res.placement;
  res.matching = matching_from_nodes(wl, res.node_of_vnf);
  res.schedule = build_schedule(wl, res.node_of_vnf, {});
  res.schedule_ms = ms_since(t1);
  res.operations = wl.vnfs().size() * static_cast<std::size_t>(sc.node_count()) + jobs.size();
  res.memory_bytes = sc.vnfs.size() * sizeof(int) + jobs.size() * sizeof(ScheduledJob);
  finalize_result(wl, res);
  return res;
}

void GaConfig::validate() const {
  if (population < 2) throw std::invalid_argument("GA population must be at least 2");
  if (generations < 0) throw std::invalid_argument("GA generations must be nonnegative");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw std::invalid_argument("crossover rate must lie in [0,1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw std::invalid_argument("mutation rate must lie in [0,1]");
  if (tournament < 1) throw std::invalid_argument("tournament size must be positive");
}

namespace {

struct Individual {
  std::vector<int> nodes;    // by local VNF index
  std::vector<double> keys;  // by job
  double fitness = 0.0;
  bool feasible = false;
};

constexpr double kInfeasible = 1e12;

class GaDecoder {
 public:
  explicit GaDecoder(const Workload& wl) : wl_(wl), node_of_vnf_(wl.scenario().vnfs.size(), -1) {}

  // Writes the decoded schedule to `out` when asked.
  void evaluate(Individual& ind, Schedule* out = nullptr) {
    const auto& vnfs = wl_.vnfs();
    for (std::size_t k = 0; k < vnfs.size(); ++k) node_of_vnf_[vnfs[k]] = ind.nodes[k];
    const int nj = static_cast<int>(ind.keys.size());
    idx_.resize(nj);
    std::iota(idx_.begin(), idx_.end(), 0);
    std::stable_sort(idx_.begin(), idx_.end(), [&](int a, int b) { return ind.keys[a] < ind.keys[b]; });
    prio_.resize(nj);
    for (int k = 0; k < nj; ++k) prio_[idx_[k]] = k;
    try {
      Schedule s = build_schedule_by_priority(wl_, node_of_vnf_, prio_);
      const double d = mean_end_to_end_delay(wl_, node_of_vnf_);
      ind.fitness = makespan(s) + d / (1.0 + d);
      ind.feasible = true;
      if (out) *out = std::move(s);
    } catch (const ScheduleError&) {
      ind.fitness = kInfeasible;
      ind.feasible = false;
    }
    ++evaluations;
  }

  [[nodiscard]] const std::vector<int>& node_of_vnf() const { return node_of_vnf_; }
  std::size_t evaluations = 0;

 private:
  const Workload& wl_;
  std::vector<int> node_of_vnf_;
  std::vector<int> idx_;
  std::vector<long> prio_;
};

}  // namespace

GaResult ga_allocate(const Workload& wl, const GaConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto& vnfs = wl.vnfs();
  const int nf = static_cast<int>(vnfs.size());
  const int nj = static_cast<int>(wl.jobs().size());
  std::vector<std::vector<int>> fitting(nf);
  for (int k = 0; k < nf; ++k) {
    for (int e = 0; e < wl.node_count(); ++e)
      if (wl.fits(vnfs[k], e)) fitting[k].push_back(e);
    if (fitting[k].empty()) throw PlacementError("no node admits VNF " + std::to_string(vnfs[k]));
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto pick_node = [&](int k) {
    return fitting[k][std::uniform_int_distribution<std::size_t>(0, fitting[k].size() - 1)(rng)];
  };
  GaDecoder decoder(wl);

  std::vector<Individual> pop(cfg.population);
  for (auto& ind : pop) {
    ind.nodes.resize(nf);
    ind.keys.resize(nj);
    for (int k = 0; k < nf; ++k) ind.nodes[k] = pick_node(k);
    for (auto& x : ind.keys) x = unit(rng);
    decoder.evaluate(ind);
  }
  auto better = [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; };
  GaResult out;
  out.best_fitness.push_back(std::min_element(pop.begin(), pop.end(), better)->fitness);

  auto tournament = [&]() -> const Individual& {
    std::uniform_int_distribution<int> any(0, cfg.population - 1);
    const Individual* best = &pop[any(rng)];
    for (int k = 1; k < cfg.tournament; ++k) {
      const Individual& c = pop[any(rng)];
      if (c.fitness < best->fitness) best = &c;
    }
    return *best;
  };

  const int genes = nf + nj;
  for (int g = 0; g < cfg.generations; ++g) {
    std::vector<Individual> next;
    next.reserve(cfg.population);
    next.push_back(*std::min_element(pop.begin(), pop.end(), better));
    while (static_cast<int>(next.size()) < cfg.population) {
      const Individual& p1 = tournament();
      const Individual& p2 = tournament();
      Individual child = p1;
      if (genes > 1 && unit(rng) < cfg.crossover_rate) {
        const int cut = std::uniform_int_distribution<int>(1, genes - 1)(rng);
        for (int i = cut; i < genes; ++i) {
          if (i < nf) child.nodes[i] = p2.nodes[i];
          else child.keys[i - nf] = p2.keys[i - nf];
        }
      }
      for (int k = 0; k < nf; ++k)
        if (unit(rng) < cfg.mutation_rate) child.nodes[k] = pick_node(k);
      for (auto& x : child.keys)
        if (unit(rng) < cfg.mutation_rate) x = unit(rng);
      // Repair: every gene names a node the VNF fits on.
      for (int k = 0; k < nf; ++k)
        if (!std::binary_search(fitting[k].begin(), fitting[k].end(), child.nodes[k])) child.nodes[k] = pick_node(k);
      decoder.evaluate(child);
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    out.best_fitness.push_back(std::min_element(pop.begin(), pop.end(), better)->fitness);
  }

  Individual best = *std::min_element(pop.begin(), pop.end(), better);
  auto& res = out.result;
  res.method = "ga";
  decoder.evaluate(best, &res.schedule);
  if (!best.feasible) throw ScheduleError("GA found no individual meeting every timeout");
  res.node_of_vnf = decoder.node_of_vnf();
  res.placement = res.node_of_vnf;
  res.matching = matching_from_nodes(wl, res.node_of_vnf);
  res.place_ms = ms_since(t0);
  res.operations = decoder.evaluations * static_cast<std::size_t>(nj);
  res.memory_bytes = static_cast<std::size_t>(cfg.population) * (nf * sizeof(int) + nj * sizeof(double)) +
                     nj * sizeof(ScheduledJob);
  finalize_result(wl, res);
  return out;
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const Workload& wl, int horizon)
      : wl_(wl),
        sc_(wl.scenario()),
        jobs_(wl.jobs()),
        n_(wl.node_count()),
        h_(horizon),
        node_(sc_.vnfs.size(), -1),
        done_(jobs_.size(), 0),
        sched_(jobs_.size()),
        usage_(static_cast<std::size_t>(n_) * h_),
        best_(horizon + 1) {
    for (int v : wl.vnfs()) {
      fitting_[v];
      for (int e = 0; e < n_; ++e)
        if (wl.fits(v, e)) fitting_[v].push_back(e);
    }
    min_proc_.resize(jobs_.size(), std::numeric_limits<int>::max());
    for (int j = 0; j < static_cast<int>(jobs_.size()); ++j)
      for (int e : fitting_[jobs_[j].vnf]) min_proc_[j] = std::min(min_proc_[j], wl.processing_slots(j, e));
  }

  void run() { dfs(0, 0); }

  [[nodiscard]] bool found() const { return !best_nodes_.empty() || jobs_.empty(); }
  [[nodiscard]] const std::vector<int>& best_nodes() const { return best_nodes_; }
  [[nodiscard]] const std::vector<int>& best_sequence() const { return best_seq_; }
  std::size_t explored = 0;

 private:
  bool fits_at(int en, int from, int len, const ResourceVector& need) const {
    for (int s = from; s < from + len; ++s)
      if (!(usage_[en * h_ + s] + need).fits_within(sc_.nodes[en].capacity)) return false;
    return true;
  }
  void occupy(int en, int from, int len, const ResourceVector& need, bool add) {
    for (int s = from; s < from + len; ++s) {
      if (add) usage_[en * h_ + s] += need;
      else usage_[en * h_ + s] -= need;
    }
  }

  int lower_bound(int current) const {
    int lb = current;
    for (int j = 0; j < static_cast<int>(jobs_.size()); ++j) {
      if (done_[j] || (jobs_[j].pred >= 0 && !done_[jobs_[j].pred])) continue;
      int t = jobs_[j].pred >= 0 ? sched_[jobs_[j].pred].end() : wl_.release(j);
      t = std::max(t, wl_.release(j));
      for (int k = j; k >= 0; k = jobs_[k].succ) t += min_proc_[k];
      lb = std::max(lb, t);
    }
    return lb;
  }

  void dfs(int depth, int current) {
    ++explored;
    if (depth == static_cast<int>(jobs_.size())) {
      if (current < best_) {
        best_ = current;
        best_nodes_ = node_;
        best_seq_ = seq_;
      }
      return;
    }
    if (lower_bound(current) >= best_) return;
    // Identical partial schedules reached through different orders are explored once.
    if (!seen_.insert(fingerprint()).second) return;

    for (int j = 0; j < static_cast<int>(jobs_.size()); ++j) {
      if (done_[j]) continue;
      const auto& job = jobs_[j];
      if (job.pred >= 0 && !done_[job.pred]) continue;
      const bool fixed = node_[job.vnf] >= 0;
      std::vector<int> choices = fixed ? std::vector<int>{node_[job.vnf]} : fitting_[job.vnf];
      for (int en : choices) {
        const int len = wl_.processing_slots(j, en);
        int fwd = 0;
        int t = wl_.release(j);
        if (job.pred >= 0) {
          const auto& p = sched_[job.pred];
          fwd = wl_.forward_slots(job.pred, p.en, en);
          t = std::max(t, p.end() + fwd);
        }
        const int latest = std::min(wl_.timeout(j), h_) - len;
        const auto& need = sc_.vnfs[job.vnf].requirement;
        while (t <= latest && !fits_at(en, t, len, need)) ++t;
        if (t > latest) continue;
        if (!fixed) node_[job.vnf] = en;
        occupy(en, t, len, need, true);
        done_[j] = 1;
        sched_[j] = {j, en, t, len, 0, 0};
        if (job.pred >= 0) sched_[job.pred].fwd_length = fwd;
        seq_.push_back(j);
        dfs(depth + 1, std::max(current, t + len));
        seq_.pop_back();
        if (job.pred >= 0) sched_[job.pred].fwd_length = 0;
        done_[j] = 0;
        occupy(en, t, len, need, false);
        if (!fixed) node_[job.vnf] = -1;
      }
    }
  }

  std::string fingerprint() const {
    std::string key;
    key.reserve(jobs_.size() * 3 + node_.size());
    for (std::size_t j = 0; j < jobs_.size(); ++j) {
      key.push_back(static_cast<char>(done_[j] ? sched_[j].start : -1));
      key.push_back(static_cast<char>(done_[j] ? sched_[j].en : -1));
    }
    for (int v : wl_.vnfs()) key.push_back(static_cast<char>(node_[v]));
    return key;
  }

  const Workload& wl_;
  const Scenario& sc_;
  const std::vector<Job>& jobs_;
  int n_;
  int h_;
  std::vector<int> node_;
  std::vector<char> done_;
  std::vector<ScheduledJob> sched_;
  std::vector<ResourceVector> usage_;
  std::unordered_map<int, std::vector<int>> fitting_;
  std::vector<int> min_proc_;
  std::vector<int> seq_;
  std::unordered_set<std::string> seen_;
  int best_;
  std::vector<int> best_nodes_;
  std::vector<int> best_seq_;
};

}  // namespace

OracleResult exact_oracle(const Workload& wl, const OracleLimits& lim) {
  const int nf = static_cast<int>(wl.vnfs().size());
  const int nj = static_cast<int>(wl.jobs().size());
  if (nf > lim.max_vnfs || wl.node_count() > lim.max_ens || wl.horizon() > lim.max_horizon || nj > lim.max_jobs)
    throw LimitError("instance exceeds oracle limits: " + std::to_string(nf) + " VNFs, " +
                     std::to_string(wl.node_count()) + " nodes, horizon " + std::to_string(wl.horizon()) + ", " +
                     std::to_string(nj) + " jobs");
  const auto t0 = std::chrono::steady_clock::now();
  BranchAndBound bb(wl, wl.horizon());
  bb.run();
  if (!bb.found()) throw ScheduleError("no schedule meets every timeout");

  OracleResult out;
  out.explored = bb.explored;
  auto& res = out.result;
  res.method = "oracle";
  res.node_of_vnf = bb.best_nodes();
  if (res.node_of_vnf.empty()) res.node_of_vnf.assign(wl.scenario().vnfs.size(), -1);
  res.placement = res.node_of_vnf;
  res.matching = matching_from_nodes(wl, res.node_of_vnf);
  std::vector<long> priority(nj, 0);
  const auto& seq = bb.best_sequence();
  for (int k = 0; k < static_cast<int>(seq.size()); ++k) priority[seq[k]] = k;
  res.schedule = build_schedule_by_priority(wl, res.node_of_vnf, priority);
  res.place_ms = ms_since(t0);
  res.operations = out.explored;
  res.memory_bytes = static_cast<std::size_t>(nj) * sizeof(ScheduledJob) * 2;
  finalize_result(wl, res);
  return out;
}

std::vector<EnumeratedMatching> enumerate_matchings(const PreferenceLists& prefs, const Quotas& quotas,
                                                    const OracleLimits& lim) {
  prefs.validate();
  const int nv = prefs.vnf_count();
  const int ne = prefs.en_count;
  if (nv > lim.max_vnfs || ne > lim.max_ens)
    throw LimitError("matching enumeration limited to " + std::to_string(lim.max_vnfs) + " VNFs and " +
                     std::to_string(lim.max_ens) + " nodes");
  std::vector<EnumeratedMatching> out;
  std::vector<int> a(nv, -1);
  // Odometer over {-1, 0, .., ne-1}^nv.
  for (;;) {
    auto m = Matching::from_assignment(a, ne);
    if (is_feasible(m, quotas)) {
      auto bp = find_blocking_pairs(m, prefs, quotas);
      out.push_back({std::move(m), std::move(bp)});
    }
    int k = 0;
    while (k < nv && a[k] == ne - 1) a[k++] = -1;
    if (k == nv) break;
    ++a[k];
  }
  return out;
}

}  // namespace sfcedge
