// Seeded experiment sweeps: a declarative config expands into a
// (sync_rate x cap x solver x seed) matrix, runs with a worker pool, and
// emits raw rows plus per-cell summaries (mean and 95% confidence
// half-width over seeds). Output order is deterministic regardless of
// thread count.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "staterep/scenario.hpp"

namespace staterep {

struct TopologySpec {
  std::string type;  // "manhattan" | "ws"
  int rows = 0, cols = 0;
  int n = 0, k = 0;
  double p = 0.0;
  double capacity = kUnboundedCapacity;
};

struct TrafficSpec {
  std::string model = "uniform";  // "uniform" | "clustered"
  double demand = 1.0;
};

struct ExperimentConfig {
  std::string name;
  TopologySpec topology;
  TrafficSpec traffic;
  std::string state_id = "s0";
  std::vector<double> sync_rates;
  std::vector<int> caps;              // distinct caps (exact) / replica budgets (pmr)
  std::vector<std::string> solvers;   // "exact", "pmr"
  int seed_count = 100;
  std::uint64_t base_seed = 1;
  int pmr_iters = 1000;
  int pmr_partition_iters = 10;
  bool lower_bound = true;            // add the shortest-path series
  long long exact_budget = 10'000'000;
  std::map<std::string, std::string> svg;  // chart kind -> output filename
};

ExperimentConfig experiment_config_from_json(const std::string& text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ResultRow {
  std::string experiment;
  std::string topology;
  int n = 0;
  std::string traffic;
  double sync_rate = 0.0;
  std::string solver;  // e.g. "exact/cap=7", "pmr/cs=2", "lower_bound"
  std::uint64_t seed = 0;
  double objective = 0.0;
  double data_total = 0.0;
  double sync_total = 0.0;
  int distinct_replicas = 0;
  double max_link_load = 0.0;
  double runtime_ms = 0.0;
  std::string status = "ok";

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

std::string result_csv_header();
std::string to_csv(const ResultRow& row);

struct SummaryRow {
  std::string experiment;
  std::string topology;
  int n = 0;
  std::string traffic;
  double sync_rate = 0.0;
  int cap = 0;  // 0 for the lower bound series
  std::string solver;
  int seeds = 0;
  double objective_mean = 0.0;
  double objective_ci95 = 0.0;
  double objective_per_flow_mean = 0.0;
  double data_mean = 0.0;
  double sync_mean = 0.0;
  double distinct_mean = 0.0;
  double distinct_ci95 = 0.0;
  double max_link_load_mean = 0.0;
  bool has_ratio = false;  // PMR cells paired with exact runs
  double ratio_mean = 0.0;
  double ratio_ci95 = 0.0;
};

std::string summary_csv_header();
std::string to_csv(const SummaryRow& row);

struct ExperimentOutput {
  std::vector<ResultRow> rows;
  std::vector<SummaryRow> summary;
};

ExperimentOutput run_experiment(const ExperimentConfig& cfg, int threads);

// Writes raw.csv, summary.csv and any charts requested by cfg.svg
// ("objective_vs_sync", "distinct_vs_sync", "normalized_vs_cap") into
// out_dir.
void write_experiment_outputs(const ExperimentConfig& cfg, const ExperimentOutput& output,
                              const std::filesystem::path& out_dir);

// Scenario for one run of the sweep; exposed for tests and the CLI.
Scenario build_experiment_scenario(const ExperimentConfig& cfg, double sync_rate, int cap,
                                   std::uint64_t seed);

// Mean and 95% normal-approximation half-width.
struct MeanCi {
  double mean = 0.0;
  double ci95 = 0.0;
};
MeanCi mean_ci(const std::vector<double>& values);

}  // namespace staterep
