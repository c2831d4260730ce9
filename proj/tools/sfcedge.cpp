// Command-line front end: scenario generation, single games, matching
// instances, single-scenario runs, sweeps and comparisons.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sfcedge/baselines.hpp"
#include "sfcedge/csv.hpp"
#include "sfcedge/error.hpp"
#include "sfcedge/harness.hpp"
#include "sfcedge/imla.hpp"
#include "sfcedge/io.hpp"
#include "sfcedge/pipeline.hpp"

namespace fs = std::filesystem;
using namespace sfcedge;

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 1;
  std::string out = "out";
  int workers = 1;
  std::string method = "imla-emsda";
};

void write_manifest(const fs::path& dir, const std::string& command, const Common& c,
                    const std::vector<std::string>& files) {
  Json m;
  m["tool"] = "sfcedge";
  m["command"] = command;
  m["seed"] = c.seed;
  if (!c.config.empty()) m["config"] = fs::path(c.config).filename().string();
  Json list = Json::array();
  for (const auto& f : files)
    list.push_back({{"name", f}, {"bytes", fs::file_size(dir / f)}, {"fnv1a", file_digest(dir / f)}});
  m["files"] = list;
  save_json(dir / "manifest.json", m);
}

int cmd_generate(const Common& c) {
  GenerationConfig g;
  if (!c.config.empty()) g = generation_config_from_json(load_json(c.config));
  const auto sc = generate_scenario(g, c.seed);
  const auto reqs = sample_arrivals(sc, c.seed);
  fs::create_directories(c.out);
  save_json(fs::path(c.out) / "scenario.json", scenario_to_json(sc));
  save_json(fs::path(c.out) / "requests.json", requests_to_json(reqs));
  write_manifest(c.out, "generate", c, {"scenario.json", "requests.json"});
  std::cout << "nodes " << sc.node_count() << ", vnfs " << sc.vnfs.size() << ", sfcs " << sc.sfcs.size()
            << ", requests " << reqs.size() << '\n';
  return 0;
}

int cmd_equilibrium(const Common& c, bool infinite) {
  MfgParams p;
  p.resource = 100.0;
  p.players = 10;
  LearningConfig lc;
  if (!c.config.empty()) {
    const auto j = load_json(c.config);
    reject_unknown_keys(j, {"beta", "resource", "delay_cost", "players", "lambda", "max_iterations", "tolerance",
                            "initial_action", "update"},
                        "game");
    p.beta = j.value("beta", p.beta);
    p.resource = j.value("resource", p.resource);
    p.delay_cost = j.value("delay_cost", p.delay_cost);
    p.players = j.value("players", p.players);
    lc.lambda = j.value("lambda", lc.lambda);
    lc.max_iterations = j.value("max_iterations", lc.max_iterations);
    lc.tolerance = j.value("tolerance", lc.tolerance);
    if (j.contains("initial_action")) lc.initial_action = j.at("initial_action").get<double>();
    if (j.value("update", std::string("sequential")) == "simultaneous") lc.update = UpdateOrder::simultaneous;
  }
  lc.seed = c.seed;
  const auto r = infinite ? imla_learn_infinite(p, lc) : imla_learn(p, lc);
  fs::create_directories(c.out);
  {
    std::ofstream f(fs::path(c.out) / "trace.csv", std::ios::binary);
    write_trace_csv(f, r.trace);
  }
  write_manifest(c.out, "equilibrium", c, {"trace.csv"});
  std::cout << "a_star " << fmt(r.a_star) << ", closed form " << fmt(ne_closed_form(p)) << ", converged_at "
            << (r.trace.converged_at ? std::to_string(*r.trace.converged_at) : "none") << '\n';
  return 0;
}

int cmd_match(const Common& c) {
  if (c.config.empty()) throw ParseError("match needs --config <instance.json>");
  const auto inst = matching_instance_from_json(load_json(c.config));
  const auto daa = classic_daa(inst.prefs, inst.quotas.q_max);
  const auto m = emsda(inst.prefs, inst.quotas);
  Json out;
  auto describe = [&](const Matching& x) {
    Json pairs = Json::array();
    for (const auto& [f, e] : find_blocking_pairs(x, inst.prefs, inst.quotas)) pairs.push_back({f, e});
    return Json{{"assignment", x.assignment},
                {"held", x.held},
                {"feasible", is_feasible(x, inst.quotas)},
                {"blocking_pairs", pairs}};
  };
  out["emsda"] = describe(m);
  out["classic_daa"] = describe(daa);
  fs::create_directories(c.out);
  save_json(fs::path(c.out) / "matching.json", out);
  write_manifest(c.out, "match", c, {"matching.json"});
  std::cout << out["emsda"].dump() << '\n';
  return 0;
}

int cmd_schedule(const Common& c, const std::string& requests_path) {
  if (c.config.empty()) throw ParseError("schedule needs --config <scenario.json>");
  const auto sc = scenario_from_json(load_json(c.config));
  if (const auto v = validate_scenario(sc); !v.empty())
    throw InfeasibleConfig("invalid scenario: " + v.front().kind + ": " + v.front().detail);
  const auto reqs = requests_path.empty() ? sample_arrivals(sc, c.seed) : requests_from_json(load_json(requests_path));
  const Workload wl(sc, reqs);
  PipelineConfig pc;
  pc.learning.seed = c.seed;
  GaConfig ga;
  ga.seed = c.seed;
  const auto res = run_method(c.method, wl, pc, ga, {});

  fs::create_directories(c.out);
  {
    std::ofstream f(fs::path(c.out) / "schedule.csv", std::ios::binary);
    CsvWriter w(f);
    w.row({"job", "request", "vnf", "node", "start", "length", "fwd_start", "fwd_length"});
    for (const auto& sj : res.schedule.jobs) {
      const auto& job = wl.jobs()[sj.job];
      w.row({std::to_string(sj.job), std::to_string(job.request), std::to_string(job.vnf), std::to_string(sj.en),
             std::to_string(sj.start), std::to_string(sj.length), std::to_string(sj.fwd_start),
             std::to_string(sj.fwd_length)});
    }
  }
  {
    std::ofstream f(fs::path(c.out) / "constraints.csv", std::ios::binary);
    write_report_csv(f, res.report);
  }
  Json summary{{"method", res.method},
               {"makespan", res.makespan},
               {"mean_delay", res.mean_delay},
               {"utilization", res.utilization},
               {"valid", res.report.valid()},
               {"node_of_vnf", res.node_of_vnf}};
  save_json(fs::path(c.out) / "result.json", summary);
  write_manifest(c.out, "schedule", c, {"schedule.csv", "constraints.csv", "result.json"});
  std::cout << res.method << ": makespan " << res.makespan << ", mean delay " << fmt(res.mean_delay)
            << (res.report.valid() ? ", all constraints hold" : ", CONSTRAINT VIOLATIONS") << '\n';
  return res.report.valid() ? 0 : 1;
}

int cmd_experiment(const Common& c, bool workers_given) {
  ExperimentConfig cfg;
  if (!c.config.empty()) cfg = experiment_config_from_json(load_json(c.config));
  if (workers_given) cfg.workers = c.workers;
  const auto outcome = run_experiment(cfg, c.out);
  std::cout << outcome.records.size() << " runs, " << outcome.errors << " errors, " << outcome.invariant_failures
            << " invariant failures\n";
  return outcome.invariant_failures == 0 ? 0 : 1;
}

int cmd_compare(const Common& c, const std::vector<std::string>& reports, const std::string& reference) {
  std::vector<RunRecord> all;
  for (const auto& r : reports) {
    auto recs = records_from_json(load_json(r));
    all.insert(all.end(), recs.begin(), recs.end());
  }
  const auto rows = compare(all, reference);
  fs::create_directories(c.out);
  {
    std::ofstream f(fs::path(c.out) / "comparison.csv", std::ios::binary);
    write_comparison_csv(f, rows);
  }
  write_comparison_csv(std::cout, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge SFC placement and scheduling toolkit"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config, "Input file (JSON)");
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--out", c.out, "Output directory");
  };

  auto* gen = app.add_subcommand("generate", "Generate a scenario and sampled requests");
  add_common(gen);
  auto* eq = app.add_subcommand("equilibrium", "Learn one node's equilibrium demand and write its trace");
  add_common(eq);
  bool infinite = false;
  eq->add_flag("--infinite", infinite, "Use the large-population regime");
  auto* match = app.add_subcommand("match", "Match a preference instance with minimum and maximum quotas");
  add_common(match);
  auto* sched = app.add_subcommand("schedule", "Run one method on one scenario");
  add_common(sched);
  std::string requests_path;
  sched->add_option("--requests", requests_path, "Request file (JSON); sampled from the scenario when omitted");
  sched->add_option("--method", c.method, "Method")
      ->check(CLI::IsMember({"imla-emsda", "greedy", "ga", "oracle"}));
  auto* exp = app.add_subcommand("experiment", "Run a sweep and write the figure CSVs");
  add_common(exp);
  auto* workers_opt = exp->add_option("--workers", c.workers, "Scenarios run concurrently")->check(CLI::PositiveNumber);
  auto* cmp = app.add_subcommand("compare", "Compare methods across experiment reports");
  add_common(cmp);
  std::vector<std::string> reports;
  std::string reference = "imla-emsda";
  cmp->add_option("reports", reports, "report.json files")->required();
  cmp->add_option("--method", reference, "Reference method");

  CLI11_PARSE(app, argc, argv);
  try {
    if (gen->parsed()) return cmd_generate(c);
    if (eq->parsed()) return cmd_equilibrium(c, infinite);
    if (match->parsed()) return cmd_match(c);
    if (sched->parsed()) return cmd_schedule(c, requests_path);
    if (exp->parsed()) return cmd_experiment(c, workers_opt->count() > 0);
    if (cmp->parsed()) return cmd_compare(c, reports, reference);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
