#include "sfcedge/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <thread>
#include <tuple>

#include "sfcedge/csv.hpp"
#include "sfcedge/error.hpp"

namespace sfcedge {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <typename T>
T opt(const Json& j, const char* key, T fallback, const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ctx + "." + key + ": " + e.what());
  }
}

}  // namespace

bool known_method(const std::string& m) {
  return m == "imla-emsda" || m == "greedy" || m == "ga" || m == "oracle";
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  const std::string c = "experiment";
  reject_unknown_keys(j,
                      {"seeds", "generation", "ens", "vnfs_per_en", "packet_sizes", "methods", "workload", "beta",
                       "learning", "reservation", "ga", "oracle", "convergence", "workers"},
                      c);
  ExperimentConfig cfg;
  cfg.seeds = opt(j, "seeds", cfg.seeds, c);
  if (j.contains("generation")) {
    const bool sfcs_given = j.at("generation").is_object() && j.at("generation").contains("n_sfcs");
    cfg.generation = generation_config_from_json(j.at("generation"));
    if (!sfcs_given) cfg.generation.n_sfcs = 0;
  }
  cfg.ens = opt(j, "ens", cfg.ens, c);
  cfg.vnfs_per_en = opt(j, "vnfs_per_en", cfg.vnfs_per_en, c);
  cfg.packet_sizes = opt(j, "packet_sizes", cfg.packet_sizes, c);
  cfg.methods = opt(j, "methods", cfg.methods, c);
  cfg.workload = opt(j, "workload", cfg.workload, c);
  cfg.pipeline.beta = opt(j, "beta", cfg.pipeline.beta, c);
  cfg.workers = opt(j, "workers", cfg.workers, c);
  if (j.contains("learning")) {
    const auto& l = j.at("learning");
    reject_unknown_keys(l, {"lambda", "max_iterations", "tolerance", "seed", "update"}, c + ".learning");
    auto& lc = cfg.pipeline.learning;
    lc.lambda = opt(l, "lambda", lc.lambda, c + ".learning");
    lc.max_iterations = opt(l, "max_iterations", lc.max_iterations, c + ".learning");
    lc.tolerance = opt(l, "tolerance", lc.tolerance, c + ".learning");
    lc.seed = opt(l, "seed", lc.seed, c + ".learning");
    if (l.contains("update")) {
      const auto u = opt<std::string>(l, "update", "sequential", c + ".learning");
      if (u == "sequential") lc.update = UpdateOrder::sequential;
      else if (u == "simultaneous") lc.update = UpdateOrder::simultaneous;
      else throw ParseError(c + ".learning.update: expected \"sequential\" or \"simultaneous\"");
    }
  }
  if (j.contains("reservation")) {
    const auto r = opt<std::string>(j, "reservation", "count", c);
    if (r == "count") cfg.pipeline.reservation = ReservationRule::count;
    else if (r == "resource_sum") cfg.pipeline.reservation = ReservationRule::resource_sum;
    else throw ParseError(c + ".reservation: expected \"count\" or \"resource_sum\"");
  }
  if (j.contains("ga")) {
    const auto& g = j.at("ga");
    reject_unknown_keys(g, {"population", "generations", "crossover_rate", "mutation_rate", "tournament", "seed"},
                        c + ".ga");
    cfg.ga.population = opt(g, "population", cfg.ga.population, c + ".ga");
    cfg.ga.generations = opt(g, "generations", cfg.ga.generations, c + ".ga");
    cfg.ga.crossover_rate = opt(g, "crossover_rate", cfg.ga.crossover_rate, c + ".ga");
    cfg.ga.mutation_rate = opt(g, "mutation_rate", cfg.ga.mutation_rate, c + ".ga");
    cfg.ga.tournament = opt(g, "tournament", cfg.ga.tournament, c + ".ga");
    cfg.ga.seed = opt(g, "seed", cfg.ga.seed, c + ".ga");
  }
  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    reject_unknown_keys(o, {"max_vnfs", "max_ens", "max_horizon", "max_jobs"}, c + ".oracle");
    cfg.oracle.max_vnfs = opt(o, "max_vnfs", cfg.oracle.max_vnfs, c + ".oracle");
    cfg.oracle.max_ens = opt(o, "max_ens", cfg.oracle.max_ens, c + ".oracle");
    cfg.oracle.max_horizon = opt(o, "max_horizon", cfg.oracle.max_horizon, c + ".oracle");
    cfg.oracle.max_jobs = opt(o, "max_jobs", cfg.oracle.max_jobs, c + ".oracle");
  }
  if (j.contains("convergence")) {
    const auto& v = j.at("convergence");
    reject_unknown_keys(v, {"players", "resource", "delay_cost", "beta", "seeds"}, c + ".convergence");
    auto& cv = cfg.convergence;
    cv.players = opt(v, "players", cv.players, c + ".convergence");
    cv.resource = opt(v, "resource", cv.resource, c + ".convergence");
    cv.delay_cost = opt(v, "delay_cost", cv.delay_cost, c + ".convergence");
    cv.beta = opt(v, "beta", cv.beta, c + ".convergence");
    cv.seeds = opt(v, "seeds", cv.seeds, c + ".convergence");
  }

  if (cfg.seeds.empty()) throw ParseError(c + ".seeds: at least one seed is required");
  for (const auto& m : cfg.methods)
    if (!known_method(m)) throw ParseError(c + ".methods: unknown method \"" + m + "\"");
  if (cfg.workload != "catalog" && cfg.workload != "arrivals")
    throw ParseError(c + ".workload: expected \"catalog\" or \"arrivals\"");
  if (cfg.workers < 1) throw ParseError(c + ".workers: must be positive");
  try {
    cfg.pipeline.learning.validate();
    cfg.ga.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(c + ": " + e.what());
  }
  return cfg;
}

MethodResult run_method(const std::string& method, const Workload& wl, const PipelineConfig& pipeline,
                        const GaConfig& ga, const OracleLimits& oracle) {
  if (method == "imla-emsda") return run_pipeline(wl, pipeline);
  if (method == "greedy") return greedy_allocate(wl);
  if (method == "ga") return ga_allocate(wl, ga).result;
  if (method == "oracle") return exact_oracle(wl, oracle).result;
  throw std::invalid_argument("unknown method " + method);
}

Scenario sweep_scenario(const ExperimentConfig& cfg, std::uint64_t seed, int n_ens, int vnfs_per_en) {
  GenerationConfig g = cfg.generation;
  g.n_ens_min = g.n_ens_max = n_ens;
  g.vnfs_per_en_min = g.vnfs_per_en_max = vnfs_per_en;
  const std::uint64_t mixed = splitmix(seed ^ splitmix((static_cast<std::uint64_t>(n_ens) << 32) ^
                                                       static_cast<std::uint64_t>(vnfs_per_en)));
  return generate_scenario(g, mixed);
}

std::vector<ServiceRequest> sweep_requests(const ExperimentConfig& cfg, const Scenario& sc, std::uint64_t seed) {
  const std::uint64_t s = splitmix(sc.seed ^ seed);
  return cfg.workload == "catalog" ? catalog_requests(sc, s) : sample_arrivals(sc, s);
}

namespace {

struct Task {
  std::string sweep;
  std::uint64_t seed;
  int n_ens;
  int vnfs_per_en;
  double packet_size;  // 0: keep sampled sizes
};

std::vector<RunRecord> run_task(const ExperimentConfig& cfg, const Task& t) {
  std::vector<RunRecord> out;
  RunRecord base;
  base.sweep = t.sweep;
  base.seed = t.seed;
  base.n_ens = t.n_ens;
  base.packet_size = t.packet_size;
  Scenario sc;
  std::vector<ServiceRequest> reqs;
  try {
    sc = sweep_scenario(cfg, t.seed, t.n_ens, t.vnfs_per_en);
    reqs = sweep_requests(cfg, sc, t.seed);
    if (t.packet_size > 0.0)
      for (auto& r : reqs) r.packet_size = t.packet_size;
  } catch (const std::exception& e) {
    for (const auto& m : cfg.methods) {
      RunRecord r = base;
      r.method = m;
      r.error = e.what();
      out.push_back(r);
    }
    return out;
  }
  const Workload wl(sc, reqs);
  base.n_vnfs = static_cast<int>(wl.vnfs().size());
  for (const auto& m : cfg.methods) {
    RunRecord r = base;
    r.method = m;
    try {
      if (wl.jobs().empty()) throw ScheduleError("scenario produced no requests");
      const auto res = run_method(m, wl, cfg.pipeline, cfg.ga, cfg.oracle);
      r.mean_delay = res.mean_delay;
      r.makespan = res.makespan;
      r.operations = res.operations;
      r.memory_bytes = res.memory_bytes;
      r.utilization = res.utilization;
      r.place_ms = res.place_ms;
      r.schedule_ms = res.schedule_ms;
      for (const auto& c : res.report.constraints)
        if (!c.passed()) r.failed_constraints.push_back(c.name);
      r.ok = r.failed_constraints.empty();
      if (!r.ok) r.error = "schedule failed constraint check";
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    out.push_back(r);
  }
  return out;
}

void write_file(const std::filesystem::path& dir, const std::string& name, ExperimentOutcome& outcome,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream f(dir / name, std::ios::binary);
  if (!f) throw std::runtime_error((dir / name).string() + ": cannot write");
  body(f);
  outcome.files.push_back(name);
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<Task> tasks;
  for (auto seed : cfg.seeds)
    for (int n : cfg.ens)
      for (int k : cfg.vnfs_per_en) tasks.push_back({"vnfs", seed, n, k, 0.0});
  if (!cfg.vnfs_per_en.empty())
    for (auto seed : cfg.seeds)
      for (int n : cfg.ens)
        for (double d : cfg.packet_sizes) tasks.push_back({"packet_size", seed, n, cfg.vnfs_per_en.front(), d});

  std::vector<std::vector<RunRecord>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) results[i] = run_task(cfg, tasks[i]);
  };
  {
    std::vector<std::jthread> pool;
    const int n = std::max(1, std::min<int>(cfg.workers, static_cast<int>(tasks.size())));
    for (int k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
  }

  ExperimentOutcome outcome;
  for (auto& r : results)
    for (auto& rec : r) {
      if (!rec.failed_constraints.empty()) ++outcome.invariant_failures;
      else if (!rec.ok) ++outcome.errors;
      outcome.records.push_back(std::move(rec));
    }

  // Convergence of the single-node game.
  const auto& cv = cfg.convergence;
  MfgParams game{cv.beta, cv.resource, cv.delay_cost, cv.players};
  const auto& conv_seeds = cv.seeds.empty() ? cfg.seeds : cv.seeds;
  std::vector<std::pair<std::uint64_t, LearningResult>> learned;
  for (auto s : conv_seeds) {
    LearningConfig lc = cfg.pipeline.learning;
    lc.seed = s;
    learned.emplace_back(s, imla_learn(game, lc));
  }

  write_file(dir, "convergence.csv", outcome, [&](std::ostream& o) {
    CsvWriter w(o);
    w.row({"seed", "iteration", "action", "payoff", "gap", "converged_at"});
    for (const auto& [s, lr] : learned) {
      const std::string conv = lr.trace.converged_at ? std::to_string(*lr.trace.converged_at) : "";
      for (const auto& p : lr.trace.iterates)
        w.row({std::to_string(s), std::to_string(p.iteration), fmt(p.action), fmt(p.payoff), fmt(p.gap), conv});
    }
  });
  write_file(dir, "delay_vs_packet_size.csv", outcome, [&](std::ostream& o) {
    CsvWriter w(o);
    w.row({"method", "seed", "n_ens", "n_vnfs", "packet_size", "mean_delay_slots", "makespan_slots"});
    for (const auto& r : outcome.records)
      if (r.ok && r.sweep == "packet_size")
        w.row({r.method, std::to_string(r.seed), std::to_string(r.n_ens), std::to_string(r.n_vnfs), fmt(r.packet_size),
               fmt(r.mean_delay), std::to_string(r.makespan)});
  });
  write_file(dir, "delay_vs_vnfs.csv", outcome, [&](std::ostream& o) {
    CsvWriter w(o);
    w.row({"method", "seed", "n_ens", "n_vnfs", "mean_delay_slots", "makespan_slots"});
    for (const auto& r : outcome.records)
      if (r.ok && r.sweep == "vnfs")
        w.row({r.method, std::to_string(r.seed), std::to_string(r.n_ens), std::to_string(r.n_vnfs), fmt(r.mean_delay),
               std::to_string(r.makespan)});
  });
  write_file(dir, "resource_usage.csv", outcome, [&](std::ostream& o) {
    CsvWriter w(o);
    w.row({"method", "seed", "n_ens", "n_vnfs", "operations", "memory_bytes", "utilization"});
    for (const auto& r : outcome.records)
      if (r.ok && r.sweep == "vnfs")
        w.row({r.method, std::to_string(r.seed), std::to_string(r.n_ens), std::to_string(r.n_vnfs),
               std::to_string(r.operations), std::to_string(r.memory_bytes), fmt(r.utilization)});
  });
  write_file(dir, "timings.csv", outcome, [&](std::ostream& o) {
    CsvWriter w(o);
    w.row({"sweep", "method", "seed", "n_ens", "n_vnfs", "packet_size", "place_ms", "schedule_ms"});
    for (const auto& r : outcome.records)
      if (r.ok)
        w.row({r.sweep, r.method, std::to_string(r.seed), std::to_string(r.n_ens), std::to_string(r.n_vnfs),
               fmt(r.packet_size), fmt(r.place_ms), fmt(r.schedule_ms)});
  });

  Json report;
  report["invariant_failures"] = outcome.invariant_failures;
  report["errors"] = outcome.errors;
  Json conv = Json::array();
  for (const auto& [s, lr] : learned) {
    Json row{{"seed", s}, {"a_star", lr.a_star}};
    row["converged_at"] = lr.trace.converged_at ? Json(*lr.trace.converged_at) : Json(nullptr);
    conv.push_back(row);
  }
  report["convergence"] = conv;
  report["ne_closed_form"] = ne_closed_form(game);
  report["records"] = records_to_json(outcome.records);
  save_json(dir / "report.json", report);
  outcome.files.push_back("report.json");

  Json manifest;
  manifest["tool"] = "sfcedge";
  manifest["seeds"] = cfg.seeds;
  manifest["methods"] = cfg.methods;
  Json files = Json::array();
  for (const auto& f : outcome.files) {
    Json entry{{"name", f}};
    // Timings vary between runs; every other file is reproducible.
    if (f != "timings.csv") {
      entry["bytes"] = std::filesystem::file_size(dir / f);
      entry["fnv1a"] = file_digest(dir / f);
    }
    files.push_back(entry);
  }
  manifest["files"] = files;
  save_json(dir / "manifest.json", manifest);
  outcome.files.push_back("manifest.json");
  return outcome;
}

Json records_to_json(const std::vector<RunRecord>& records) {
  Json out = Json::array();
  for (const auto& r : records) {
    Json j{{"sweep", r.sweep},         {"method", r.method},         {"seed", r.seed},
           {"n_ens", r.n_ens},         {"n_vnfs", r.n_vnfs},         {"packet_size", r.packet_size},
           {"ok", r.ok},               {"error", r.error},           {"mean_delay", r.mean_delay},
           {"makespan", r.makespan},   {"operations", r.operations}, {"memory_bytes", r.memory_bytes},
           {"utilization", r.utilization}, {"failed_constraints", r.failed_constraints}};
    out.push_back(j);
  }
  return out;
}

std::vector<RunRecord> records_from_json(const Json& j) {
  const Json& arr = j.is_object() && j.contains("records") ? j.at("records") : j;
  if (!arr.is_array()) throw ParseError("report: expected a records array");
  std::vector<RunRecord> out;
  try {
    for (const auto& x : arr) {
      RunRecord r;
      r.sweep = x.at("sweep").get<std::string>();
      r.method = x.at("method").get<std::string>();
      r.seed = x.at("seed").get<std::uint64_t>();
      r.n_ens = x.at("n_ens").get<int>();
      r.n_vnfs = x.at("n_vnfs").get<int>();
      r.packet_size = x.at("packet_size").get<double>();
      r.ok = x.at("ok").get<bool>();
      r.error = x.value("error", "");
      r.mean_delay = x.at("mean_delay").get<double>();
      r.makespan = x.at("makespan").get<int>();
      r.operations = x.value("operations", std::size_t{0});
      r.memory_bytes = x.value("memory_bytes", std::size_t{0});
      r.utilization = x.value("utilization", 0.0);
      r.failed_constraints = x.value("failed_constraints", std::vector<std::string>{});
      out.push_back(r);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report record: ") + e.what());
  }
  return out;
}

std::vector<ComparisonRow> compare(const std::vector<RunRecord>& records, const std::string& reference) {
  using Key = std::tuple<std::string, std::uint64_t, int, int, double>;
  std::map<std::string, std::map<Key, const RunRecord*>> by_method;
  for (const auto& r : records)
    if (r.ok) by_method[r.method][{r.sweep, r.seed, r.n_ens, r.n_vnfs, r.packet_size}] = &r;
  if (by_method.size() < 2) throw std::invalid_argument("comparison needs at least two methods");
  const auto ref_it = by_method.find(reference);
  if (ref_it == by_method.end()) throw AlignmentError("reference method " + reference + " has no successful runs");
  const auto& ref = ref_it->second;

  std::vector<ComparisonRow> rows;
  for (const auto& [method, runs] : by_method) {
    std::set<Key> a, b;
    for (const auto& kv : ref) a.insert(kv.first);
    for (const auto& kv : runs) b.insert(kv.first);
    if (a != b)
      throw AlignmentError("method " + method + " covers " + std::to_string(b.size()) + " scenarios, reference " +
                           reference + " covers " + std::to_string(a.size()));
    for (const std::string metric : {"mean_delay", "makespan"}) {
      ComparisonRow row{reference, method, metric, 0, 0.0, 0, 0, 0};
      for (const auto& [key, rr] : ref) {
        const RunRecord* mr = runs.at(key);
        const double rv = metric == "makespan" ? rr->makespan : rr->mean_delay;
        const double mv = metric == "makespan" ? mr->makespan : mr->mean_delay;
        row.mean_rel_delta += rv != 0.0 ? (mv - rv) / rv : (mv == rv ? 0.0 : 1.0);
        if (rv < mv) ++row.reference_wins;
        else if (rv == mv) ++row.ties;
        else ++row.reference_losses;
        ++row.instances;
      }
      if (row.instances > 0) row.mean_rel_delta /= row.instances;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  CsvWriter w(out);
  w.row({"reference", "method", "metric", "instances", "mean_rel_delta", "reference_wins", "ties",
         "reference_losses"});
  for (const auto& r : rows)
    w.row({r.reference, r.method, r.metric, std::to_string(r.instances), fmt(r.mean_rel_delta),
           std::to_string(r.reference_wins), std::to_string(r.ties), std::to_string(r.reference_losses)});
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot read");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace sfcedge
