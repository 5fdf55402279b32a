#include "staterep/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "staterep/csv.hpp"
#include "staterep/exact_solver.hpp"
#include "staterep/pmr.hpp"
#include "staterep/rng.hpp"
#include "staterep/svg.hpp"

namespace staterep {

namespace {

using nlohmann::json;

double capacity_from_json(const json& v) {
  if (v.is_string() && v.get<std::string>() == "inf") return kUnboundedCapacity;
  return v.get<double>();
}

}  // namespace

ExperimentConfig experiment_config_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("experiment config: ") + e.what());
  }
  ExperimentConfig cfg;
  cfg.name = root.at("experiment").get<std::string>();

  const json& topo = root.at("topology");
  cfg.topology.type = topo.at("type").get<std::string>();
  if (cfg.topology.type == "manhattan") {
    cfg.topology.rows = topo.at("rows").get<int>();
    cfg.topology.cols = topo.at("cols").get<int>();
  } else if (cfg.topology.type == "ws") {
    cfg.topology.n = topo.at("n").get<int>();
    cfg.topology.k = topo.at("k").get<int>();
    cfg.topology.p = topo.at("p").get<double>();
  } else {
    throw std::runtime_error("experiment config: unknown topology '" + cfg.topology.type + "'");
  }
  if (topo.contains("capacity")) cfg.topology.capacity = capacity_from_json(topo.at("capacity"));

  const json& traffic = root.at("traffic");
  cfg.traffic.model = traffic.at("model").get<std::string>();
  if (cfg.traffic.model != "uniform" && cfg.traffic.model != "clustered") {
    throw std::runtime_error("experiment config: unknown traffic model '" + cfg.traffic.model + "'");
  }
  if (traffic.contains("demand")) cfg.traffic.demand = traffic.at("demand").get<double>();

  if (root.contains("state_id")) cfg.state_id = root.at("state_id").get<std::string>();
  cfg.sync_rates = root.at("sync_rates").get<std::vector<double>>();
  cfg.caps = root.at("caps").get<std::vector<int>>();
  cfg.solvers = root.at("solvers").get<std::vector<std::string>>();
  for (const std::string& solver : cfg.solvers) {
    if (solver != "exact" && solver != "pmr") {
      throw std::runtime_error("experiment config: unknown solver '" + solver + "'");
    }
  }
  cfg.seed_count = root.at("seeds").get<int>();
  if (cfg.seed_count < 1) throw std::runtime_error("experiment config: seeds must be >= 1");
  for (double rate : cfg.sync_rates) {
    if (rate < 0) throw std::runtime_error("experiment config: sync rates must be >= 0");
  }
  if (root.contains("base_seed")) cfg.base_seed = root.at("base_seed").get<std::uint64_t>();
  if (root.contains("pmr")) {
    const json& pmr = root.at("pmr");
    if (pmr.contains("iters")) cfg.pmr_iters = pmr.at("iters").get<int>();
    if (pmr.contains("partition_iters")) cfg.pmr_partition_iters = pmr.at("partition_iters").get<int>();
  }
  if (root.contains("lower_bound")) cfg.lower_bound = root.at("lower_bound").get<bool>();
  if (root.contains("exact_budget")) cfg.exact_budget = root.at("exact_budget").get<long long>();
  if (root.contains("svg")) {
    for (const auto& [kind, path] : root.at("svg").items()) cfg.svg[kind] = path.get<std::string>();
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open experiment config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return experiment_config_from_json(buf.str());
}

std::string result_csv_header() {
  return "experiment,topology,n,traffic,sync_rate,solver,seed,objective,data_total,sync_total,"
         "distinct_replicas,max_link_load,runtime_ms,status";
}

std::string to_csv(const ResultRow& r) {
  std::ostringstream os;
  os << r.experiment << ',' << r.topology << ',' << r.n << ',' << r.traffic << ','
     << format_double(r.sync_rate) << ',' << r.solver << ',' << r.seed << ','
     << format_double(r.objective) << ',' << format_double(r.data_total) << ','
     << format_double(r.sync_total) << ',' << r.distinct_replicas << ','
     << format_double(r.max_link_load) << ',' << format_double(r.runtime_ms) << ',' << r.status;
  return os.str();
}

std::string summary_csv_header() {
  return "experiment,topology,n,traffic,sync_rate,cap,solver,seeds,objective_mean,objective_ci95,"
         "objective_per_flow_mean,data_mean,sync_mean,distinct_mean,distinct_ci95,"
         "max_link_load_mean,ratio_mean,ratio_ci95";
}

std::string to_csv(const SummaryRow& r) {
  std::ostringstream os;
  os << r.experiment << ',' << r.topology << ',' << r.n << ',' << r.traffic << ','
     << format_double(r.sync_rate) << ',';
  if (r.cap > 0) os << r.cap;
  os << ',' << r.solver << ',' << r.seeds << ',' << format_double(r.objective_mean) << ','
     << format_double(r.objective_ci95) << ',' << format_double(r.objective_per_flow_mean) << ','
     << format_double(r.data_mean) << ',' << format_double(r.sync_mean) << ','
     << format_double(r.distinct_mean) << ',' << format_double(r.distinct_ci95) << ','
     << format_double(r.max_link_load_mean) << ',';
  if (r.has_ratio) os << format_double(r.ratio_mean);
  os << ',';
  if (r.has_ratio) os << format_double(r.ratio_ci95);
  return os.str();
}

MeanCi mean_ci(const std::vector<double>& values) {
  MeanCi out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    const double sd = std::sqrt(ss / (static_cast<double>(values.size()) - 1.0));
    out.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
  }
  return out;
}

Scenario build_experiment_scenario(const ExperimentConfig& cfg, double sync_rate, int cap,
                                   std::uint64_t seed) {
  Scenario scenario{
      cfg.topology.type == "manhattan"
          ? gen_manhattan(cfg.topology.rows, cfg.topology.cols, cfg.topology.capacity)
          : gen_watts_strogatz(cfg.topology.n, cfg.topology.k, cfg.topology.p,
                               derive_seed(seed, 0x70B0ULL), nullptr, cfg.topology.capacity),
      {},
      {},
      {}};
  scenario.states.push_back({cfg.state_id, cap, sync_rate});
  const std::vector<std::string> sequence{cfg.state_id};
  scenario.flows = cfg.traffic.model == "uniform"
                       ? gen_uniform_traffic(scenario.graph, cfg.traffic.demand, sequence, seed)
                       : gen_clustered_traffic(scenario.graph, cfg.traffic.demand, sequence, seed);
  scenario.meta["experiment"] = cfg.name;
  scenario.meta["seed"] = std::to_string(seed);
  return scenario;
}

namespace {

struct Task {
  double sync_rate;
  int cap;         // 0 for lower bound
  std::string solver;
  std::uint64_t seed;
};

ResultRow run_task(const ExperimentConfig& cfg, const Task& task) {
  ResultRow row;
  row.experiment = cfg.name;
  row.topology = cfg.topology.type;
  row.traffic = cfg.traffic.model;
  row.sync_rate = task.sync_rate;
  row.seed = task.seed;
  const auto started = std::chrono::steady_clock::now();
  try {
    if (task.solver == "lower_bound") {
      row.solver = "lower_bound";
      const Scenario scenario = build_experiment_scenario(cfg, task.sync_rate, 1, task.seed);
      row.n = scenario.graph.node_count();
      const DistanceTables dt = all_pairs_shortest_paths(scenario.graph);
      for (const FlowSpec& flow : scenario.flows) {
        row.data_total += flow.demand * dt.distance(flow.src, flow.dst);
      }
      row.objective = row.data_total;
    } else if (task.solver == "exact") {
      row.solver = "exact/cap=" + std::to_string(task.cap);
      const Scenario scenario = build_experiment_scenario(cfg, task.sync_rate, task.cap, task.seed);
      row.n = scenario.graph.node_count();
      const ExactResult solved = solve_exact(scenario, task.cap, cfg.exact_budget);
      row.objective = solved.best_report.objective_total;
      row.data_total = solved.best_report.data_total;
      row.sync_total = solved.best_report.sync_total;
      row.distinct_replicas = solved.best_placement.total_distinct();
      row.max_link_load = solved.best_report.max_link_load;
    } else {
      row.solver = "pmr/cs=" + std::to_string(task.cap);
      const Scenario scenario = build_experiment_scenario(cfg, task.sync_rate, task.cap, task.seed);
      row.n = scenario.graph.node_count();
      PmrConfig pmr_cfg;
      pmr_cfg.local_search_iters = cfg.pmr_iters;
      pmr_cfg.partition_iters = cfg.pmr_partition_iters;
      pmr_cfg.rng_seed = derive_seed(task.seed, 0x9412ULL);
      const PmrResult solved = place_multi_replicas(scenario, cfg.state_id, task.cap, pmr_cfg);
      row.objective = solved.report.objective_total;
      row.data_total = solved.report.data_total;
      row.sync_total = solved.report.sync_total;
      row.distinct_replicas = solved.distinct_count;
      row.max_link_load = solved.report.max_link_load;
    }
  } catch (const std::exception& e) {
    std::string message = e.what();
    for (char& c : message) {
      if (c == ',' || c == '\n') c = ';';
    }
    row.status = message;
  }
  row.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return row;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& cfg, int threads) {
  std::vector<Task> tasks;
  for (double sync_rate : cfg.sync_rates) {
    for (int cap : cfg.caps) {
      for (const std::string& solver : cfg.solvers) {
        for (int i = 0; i < cfg.seed_count; ++i) {
          tasks.push_back({sync_rate, cap, solver, cfg.base_seed + static_cast<std::uint64_t>(i)});
        }
      }
    }
    if (cfg.lower_bound) {
      for (int i = 0; i < cfg.seed_count; ++i) {
        tasks.push_back({sync_rate, 0, "lower_bound", cfg.base_seed + static_cast<std::uint64_t>(i)});
      }
    }
  }

  ExperimentOutput output;
  output.rows.resize(tasks.size());
  const int workers = std::max(1, threads);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) return;
      output.rows[i] = run_task(cfg, tasks[i]);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Per-cell summaries, in (sync_rate, cap, solver) task order.
  struct CellKey {
    double sync_rate;
    int cap;
    std::string solver;
    bool operator<(const CellKey& o) const {
      return std::tie(sync_rate, cap, solver) < std::tie(o.sync_rate, o.cap, o.solver);
    }
  };
  std::map<CellKey, std::vector<const ResultRow*>> cells;
  for (const ResultRow& row : output.rows) {
    const int cap = row.solver == "lower_bound" ? 0 : std::stoi(row.solver.substr(row.solver.find('=') + 1));
    cells[{row.sync_rate, cap, row.solver}].push_back(&row);
  }
  std::map<std::tuple<double, int, std::uint64_t>, double> exact_objectives;
  for (const ResultRow& row : output.rows) {
    if (row.status == "ok" && row.solver.rfind("exact", 0) == 0) {
      const int cap = std::stoi(row.solver.substr(row.solver.find('=') + 1));
      exact_objectives[{row.sync_rate, cap, row.seed}] = row.objective;
    }
  }

  for (const auto& [key, rows] : cells) {
    SummaryRow summary;
    summary.experiment = cfg.name;
    summary.topology = cfg.topology.type;
    summary.traffic = cfg.traffic.model;
    summary.sync_rate = key.sync_rate;
    summary.cap = key.cap;
    summary.solver = key.solver;
    std::vector<double> objective, data, sync, distinct, load, ratio;
    int flow_count = 0;
    for (const ResultRow* row : rows) {
      if (row->status != "ok") continue;
      summary.n = row->n;
      flow_count = row->n;  // |F| = N for both traffic models
      objective.push_back(row->objective);
      data.push_back(row->data_total);
      sync.push_back(row->sync_total);
      distinct.push_back(row->distinct_replicas);
      load.push_back(row->max_link_load);
      if (row->solver.rfind("pmr", 0) == 0) {
        const auto it = exact_objectives.find({row->sync_rate, key.cap, row->seed});
        if (it != exact_objectives.end()) ratio.push_back(row->objective / it->second);
      }
    }
    summary.seeds = static_cast<int>(objective.size());
    const MeanCi obj = mean_ci(objective);
    summary.objective_mean = obj.mean;
    summary.objective_ci95 = obj.ci95;
    summary.objective_per_flow_mean = flow_count > 0 ? obj.mean / flow_count : 0.0;
    summary.data_mean = mean_ci(data).mean;
    summary.sync_mean = mean_ci(sync).mean;
    const MeanCi dist = mean_ci(distinct);
    summary.distinct_mean = dist.mean;
    summary.distinct_ci95 = dist.ci95;
    summary.max_link_load_mean = mean_ci(load).mean;
    if (!ratio.empty()) {
      summary.has_ratio = true;
      const MeanCi r = mean_ci(ratio);
      summary.ratio_mean = r.mean;
      summary.ratio_ci95 = r.ci95;
    }
    output.summary.push_back(std::move(summary));
  }
  return output;
}

void write_experiment_outputs(const ExperimentConfig& cfg, const ExperimentOutput& output,
                              const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream raw(out_dir / "raw.csv");
    raw << result_csv_header() << "\n";
    for (const ResultRow& row : output.rows) raw << to_csv(row) << "\n";
  }
  {
    std::ofstream summary(out_dir / "summary.csv");
    summary << summary_csv_header() << "\n";
    for (const SummaryRow& row : output.summary) summary << to_csv(row) << "\n";
  }

  auto series_label = [](const SummaryRow& row) {
    return row.solver;
  };
  for (const auto& [kind, filename] : cfg.svg) {
    if (kind == "objective_vs_sync" || kind == "distinct_vs_sync") {
      const bool distinct = kind == "distinct_vs_sync";
      LineChart chart(cfg.name, "sync rate", distinct ? "mean distinct replicas" : "mean objective");
      std::map<std::string, std::vector<std::pair<double, double>>> by_series;
      for (const SummaryRow& row : output.summary) {
        by_series[series_label(row)].emplace_back(row.sync_rate,
                                                  distinct ? row.distinct_mean : row.objective_mean);
      }
      for (auto& [name, points] : by_series) chart.add_series(name, std::move(points));
      chart.save(out_dir / filename);
    } else if (kind == "normalized_vs_cap") {
      LineChart chart(cfg.name, "replica budget", "mean objective per flow");
      std::map<std::string, std::vector<std::pair<double, double>>> by_series;
      for (const SummaryRow& row : output.summary) {
        if (row.solver == "lower_bound") continue;
        const std::string base = row.solver.substr(0, row.solver.find('/'));
        by_series[base + " sync=" + format_double(row.sync_rate)].emplace_back(
            row.cap, row.objective_per_flow_mean);
      }
      for (const SummaryRow& row : output.summary) {
        if (row.solver != "lower_bound") continue;
        // Horizontal reference across the cap range.
        std::vector<std::pair<double, double>> line;
        for (int cap : cfg.caps) line.emplace_back(cap, row.objective_per_flow_mean);
        by_series["lower_bound sync=" + format_double(row.sync_rate)] = std::move(line);
      }
      for (auto& [name, points] : by_series) chart.add_series(name, std::move(points));
      chart.save(out_dir / filename);
    } else {
      throw std::runtime_error("unknown chart kind '" + kind + "'");
    }
  }
}

}  // namespace staterep
