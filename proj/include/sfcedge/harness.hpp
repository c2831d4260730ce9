#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "sfcedge/baselines.hpp"
#include "sfcedge/io.hpp"
#include "sfcedge/pipeline.hpp"
#include "sfcedge/scenario.hpp"

namespace sfcedge {

struct ConvergenceSetup {
  int players = 10;
  double resource = 100.0;
  double delay_cost = 1.0;
  double beta = 1.0;
  std::vector<std::uint64_t> seeds;  // empty: reuse the experiment seeds
};

struct ExperimentConfig {
  std::vector<std::uint64_t> seeds{1};
  GenerationConfig generation = [] {
    GenerationConfig g;
    g.n_sfcs = 0;  // partition the catalog so every VNF is requested
    return g;
  }();
  std::vector<int> ens{5};
  std::vector<int> vnfs_per_en{2};
  std::vector<double> packet_sizes{100, 1000, 2500, 5000, 7500, 10000};
  std::vector<std::string> methods{"imla-emsda", "greedy", "ga"};
  std::string workload = "catalog";  // "catalog": one request per SFC; "arrivals": Poisson sampling
  PipelineConfig pipeline;
  GaConfig ga;
  OracleLimits oracle;
  ConvergenceSetup convergence;
  int workers = 1;
};

// Reads the experiment file format (see README). Unknown keys are rejected.
[[nodiscard]] ExperimentConfig experiment_config_from_json(const Json& j);

// Valid method names: imla-emsda, greedy, ga, oracle.
[[nodiscard]] bool known_method(const std::string& name);
// Runs one method; throws on failure like the method itself.
[[nodiscard]] MethodResult run_method(const std::string& method, const Workload& workload,
                                      const PipelineConfig& pipeline, const GaConfig& ga, const OracleLimits& oracle);

struct RunRecord {
  std::string sweep;  // "vnfs" or "packet_size"
  std::string method;
  std::uint64_t seed = 0;
  int n_ens = 0;
  int n_vnfs = 0;           // requested VNFs
  double packet_size = 0;   // 0 in the VNF sweep (sizes are sampled)
  bool ok = false;
  std::string error;        // set when the method failed or a check did not pass
  double mean_delay = 0.0;
  int makespan = 0;
  std::size_t operations = 0;
  std::size_t memory_bytes = 0;
  double utilization = 0.0;
  double place_ms = 0.0;
  double schedule_ms = 0.0;
  std::vector<std::string> failed_constraints;
};

struct ExperimentOutcome {
  std::vector<RunRecord> records;  // ordered by (sweep, seed, n_ens, n_vnfs, packet_size, method)
  int invariant_failures = 0;      // schedules that failed check_schedule
  int errors = 0;                  // methods that threw
  std::vector<std::string> files;  // written, relative to the output directory
};

// Scenario of the sweep point; the seed mixes the experiment seed with the point.
[[nodiscard]] Scenario sweep_scenario(const ExperimentConfig& cfg, std::uint64_t seed, int n_ens, int vnfs_per_en);
[[nodiscard]] std::vector<ServiceRequest> sweep_requests(const ExperimentConfig& cfg, const Scenario& sc,
                                                         std::uint64_t seed);

// Runs the sweep with up to cfg.workers scenarios in flight and writes
// convergence.csv, delay_vs_packet_size.csv, delay_vs_vnfs.csv,
// resource_usage.csv, timings.csv, report.json and manifest.json to out_dir.
// Everything except timings.csv depends only on the configuration.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

[[nodiscard]] Json records_to_json(const std::vector<RunRecord>& records);
[[nodiscard]] std::vector<RunRecord> records_from_json(const Json& j);

struct ComparisonRow {
  std::string reference;
  std::string method;
  std::string metric;        // mean_delay or makespan
  int instances = 0;
  double mean_rel_delta = 0.0;  // mean of (method - reference) / reference
  int reference_wins = 0;
  int ties = 0;
  int reference_losses = 0;
};

// Aligns successful records of every method with the reference method on
// (sweep, seed, n_ens, n_vnfs, packet_size). Throws AlignmentError when a
// method misses a scenario the reference has or vice versa, and
// std::invalid_argument with fewer than two methods.
[[nodiscard]] std::vector<ComparisonRow> compare(const std::vector<RunRecord>& records,
                                                 const std::string& reference = "imla-emsda");
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

// 64-bit FNV-1a of a file's bytes, as 16 hex digits.
[[nodiscard]] std::string file_digest(const std::filesystem::path& path);

}  // namespace sfcedge
