// staterep CLI: scenario generation, exact/PMR solving, seeded experiment
// sweeps and the unit-square analysis.
//
//   staterep generate --topology manhattan --rows 4 --cols 4 --traffic uniform --seed 7 --out s.json
//   staterep solve --scenario s.json --solver exact --cap 2 --out solution.json
//   staterep solve --scenario s.json --solver pmr --cs 2 --iters 1000 --seed 1
//   staterep experiment --config configs/fig3_replica_collapse.json --out-dir out/fig3
//   staterep asymptotic --dcurves --cmax 400 --out dcurves.csv
//   staterep asymptotic --fit
//   staterep fit --input points.csv
//
// Exit codes: 0 success, 2 usage/validation error, 3 infeasible or
// enumeration budget exceeded, 1 anything else.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "staterep/asymptotic.hpp"
#include "staterep/csv.hpp"
#include "staterep/exact_solver.hpp"
#include "staterep/experiment.hpp"
#include "staterep/pmr.hpp"
#include "staterep/report_io.hpp"
#include "staterep/rng.hpp"
#include "staterep/scenario_io.hpp"
#include "staterep/svg.hpp"

namespace {

using namespace staterep;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

double parse_capacity_flag(const std::string& text) {
  if (text == "inf") return kUnboundedCapacity;
  return std::stod(text);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

struct GenerateArgs {
  std::string topology = "manhattan";
  int rows = 4, cols = 4;
  int n = 100, k = 8;
  double p = 0.1;
  std::string capacity = "inf";
  std::string traffic = "uniform";
  double demand = 1.0;
  std::string state_id = "s0";
  int max_replicas = 3;
  double sync_rate = 0.5;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_generate(const GenerateArgs& args) {
  Scenario scenario{gen_manhattan(1, 2), {}, {}, {}};
  const double capacity = parse_capacity_flag(args.capacity);
  if (args.topology == "manhattan") {
    scenario.graph = gen_manhattan(args.rows, args.cols, capacity);
    scenario.meta["rows"] = std::to_string(args.rows);
    scenario.meta["cols"] = std::to_string(args.cols);
  } else if (args.topology == "ws") {
    int attempts = 0;
    scenario.graph =
        gen_watts_strogatz(args.n, args.k, args.p, args.seed, &attempts, capacity);
    scenario.meta["ws_k"] = std::to_string(args.k);
    scenario.meta["ws_p"] = format_double(args.p);
    scenario.meta["ws_attempts"] = std::to_string(attempts);
    // Disconnected draws are regenerated with a derived seed; record the
    // one that produced this graph.
    scenario.meta["ws_effective_seed"] =
        std::to_string(attempts == 1 ? args.seed : derive_seed(args.seed, attempts - 1));
  } else {
    throw std::invalid_argument("unknown topology '" + args.topology + "'");
  }
  scenario.meta["topology"] = args.topology;
  scenario.meta["traffic"] = args.traffic;
  scenario.meta["seed"] = std::to_string(args.seed);

  scenario.states.push_back({args.state_id, args.max_replicas, args.sync_rate});
  const std::vector<std::string> sequence{args.state_id};
  if (args.traffic == "uniform") {
    scenario.flows = gen_uniform_traffic(scenario.graph, args.demand, sequence, args.seed);
  } else if (args.traffic == "clustered") {
    scenario.flows = gen_clustered_traffic(scenario.graph, args.demand, sequence, args.seed);
  } else {
    throw std::invalid_argument("unknown traffic model '" + args.traffic + "'");
  }

  validate_scenario(scenario);
  write_text(args.out, scenario_to_json(scenario));
  return kExitOk;
}

struct SolveArgs {
  std::string scenario_path;
  std::string solver = "exact";
  int cap = 0;  // 0: min(C_s, N) per state
  int cs = 0;   // 0: state's max_replicas
  int iters = 1000;
  int partition_iters = 10;
  std::uint64_t seed = 1;
  long long budget = kDefaultPlacementBudget;
  std::string out;
  std::string csv_path;
  std::string trace_path;
  std::string format = "json";
};

int cmd_solve(const SolveArgs& args) {
  const Scenario scenario = load_scenario(args.scenario_path);
  const auto started = std::chrono::steady_clock::now();

  Placement placement;
  TrafficReport report;
  EvalResult eval;
  int distinct = 0;
  std::string solver_label;

  if (args.solver == "exact") {
    // Per state the effective cap is min(--cap, max_replicas, N); without
    // --cap each state gets its own max_replicas.
    const int cap = args.cap != 0 ? args.cap : scenario.graph.node_count();
    if (cap < 1) throw std::invalid_argument("--cap must be >= 1");
    ExactResult result = solve_exact(scenario, cap, args.budget);
    placement = std::move(result.best_placement);
    report = result.best_report;
    eval.report = std::move(result.best_report);
    eval.solution = std::move(result.best_solution);
    distinct = placement.total_distinct();
    int effective_cap = 0;
    for (const StateSpec& state : scenario.states) {
      effective_cap = std::max(effective_cap,
                               std::min({cap, state.max_replicas, scenario.graph.node_count()}));
    }
    solver_label = "exact/cap=" + std::to_string(effective_cap);
  } else if (args.solver == "pmr") {
    if (scenario.states.size() != 1) throw std::invalid_argument("PMR supports a single state");
    const StateSpec& state = scenario.states[0];
    const int budget_replicas = args.cs != 0 ? args.cs : state.max_replicas;
    PmrConfig cfg;
    cfg.local_search_iters = args.iters;
    cfg.partition_iters = args.partition_iters;
    cfg.rng_seed = args.seed;
    cfg.record_trace = !args.trace_path.empty();
    PmrResult result = place_multi_replicas(scenario, state.state_id, budget_replicas, cfg);
    placement = std::move(result.placement);
    report = result.report;
    eval.report = std::move(result.report);
    eval.solution = std::move(result.solution);
    distinct = result.distinct_count;
    solver_label = "pmr/cs=" + std::to_string(budget_replicas);
    if (!args.trace_path.empty()) {
      std::ofstream trace(args.trace_path);
      trace << "iteration,objective\n";
      for (const auto& [iteration, objective] : result.trace) {
        trace << iteration << ',' << format_double(objective) << "\n";
      }
    }
  } else {
    throw std::invalid_argument("unknown solver '" + args.solver + "'");
  }

  const double runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();

  write_text(args.out, solution_to_json(scenario, placement, eval));

  ResultRow row;
  row.experiment = "solve";
  row.topology = scenario.meta.count("topology") ? scenario.meta.at("topology") : "custom";
  row.n = scenario.graph.node_count();
  row.traffic = scenario.meta.count("traffic") ? scenario.meta.at("traffic") : "custom";
  row.sync_rate = scenario.states.empty() ? 0.0 : scenario.states[0].sync_rate;
  row.solver = solver_label;
  row.seed = args.seed;
  row.objective = report.objective_total;
  row.data_total = report.data_total;
  row.sync_total = report.sync_total;
  row.distinct_replicas = distinct;
  row.max_link_load = report.max_link_load;
  row.runtime_ms = runtime_ms;
  if (!args.csv_path.empty()) {
    const bool fresh = !std::filesystem::exists(args.csv_path);
    std::ofstream csv(args.csv_path, std::ios::app);
    if (fresh) csv << result_csv_header() << "\n";
    csv << to_csv(row) << "\n";
  }
  if (args.format == "csv") {
    std::cerr << result_csv_header() << "\n" << to_csv(row) << "\n";
  } else {
    std::cerr << "objective=" << format_double(report.objective_total)
              << " data=" << format_double(report.data_total)
              << " sync=" << format_double(report.sync_total) << " distinct=" << distinct << "\n";
  }

  if (!report.capacity_feasible) {
    std::cerr << "solution exceeds link capacities\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

struct AsymptoticArgs {
  bool dcurves = false;
  bool copt = false;
  bool fit = false;
  bool error_vs_formula = false;
  int cmax = 400;
  long long samples = 1'000'000;
  std::uint64_t seed = 1;
  std::string nset;    // comma list; default: perfect squares 9..4096
  std::string ratios = "0.1,0.25,0.5,1";
  std::string cache_path;
  std::string out;
  std::string svg_path;
};

std::vector<int> default_square_ns(int lo, int hi) {
  std::vector<int> out;
  for (int root = 2; root * root <= hi; ++root) {
    if (root * root >= lo) out.push_back(root * root);
  }
  return out;
}

int cmd_asymptotic(const AsymptoticArgs& args) {
  const int modes = int(args.dcurves) + int(args.copt) + int(args.fit) + int(args.error_vs_formula);
  if (modes != 1) {
    throw std::invalid_argument(
        "pick exactly one of --dcurves, --copt, --fit, --error-vs-formula");
  }
  DistanceCache cache = args.cache_path.empty() ? DistanceCache() : DistanceCache(args.cache_path);
  const std::vector<double> ratios = parse_double_list(args.ratios);
  const std::vector<int> ns =
      args.nset.empty() ? default_square_ns(9, 4096) : parse_int_list(args.nset);

  std::ostringstream csv;
  if (args.dcurves) {
    csv << "c,d_data,d_data_stderr,d_sync\n";
    std::vector<std::pair<double, double>> data_curve, sync_curve;
    for (int root = 1; root * root <= args.cmax; ++root) {
      const int c = root * root;
      const UnitSquareModel& m = cache.get(c, args.samples, args.seed);
      csv << c << ',' << format_double(m.d_data) << ',' << format_double(m.d_data_stderr) << ','
          << format_double(m.d_sync) << "\n";
      data_curve.emplace_back(c, m.d_data);
      if (c > 1) sync_curve.emplace_back(c, m.d_sync);
    }
    if (!args.svg_path.empty()) {
      LineChart chart("unit-square distances", "replicas", "mean distance");
      chart.set_log_x(true);
      chart.add_series("d_data", std::move(data_curve));
      chart.add_series("d_sync", std::move(sync_curve));
      chart.save(args.svg_path);
    }
  } else if (args.copt) {
    csv << "n,ratio,c_opt,c_formula\n";
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    for (int n : ns) {
      for (double ratio : ratios) {
        const int c_opt =
            optimal_replicas_search(n, 1.0, ratio, default_c_max(n), args.samples, args.seed, cache);
        csv << n << ',' << format_double(ratio) << ',' << c_opt << ','
            << approx_optimal_replicas(n, 1.0, ratio) << "\n";
        series["ratio=" + format_double(ratio)].emplace_back(n, c_opt);
      }
    }
    if (!args.svg_path.empty()) {
      LineChart chart("optimal replicas", "N", "C_opt");
      chart.set_log_x(true);
      chart.set_log_y(true);
      for (auto& [name, points] : series) chart.add_series(name, std::move(points));
      chart.save(args.svg_path);
    }
  } else if (args.fit) {
    std::vector<FitPoint> points;
    for (int n : ns) {
      for (double ratio : ratios) {
        points.push_back(
            {n, ratio,
             optimal_replicas_search(n, 1.0, ratio, default_c_max(n), args.samples, args.seed, cache)});
      }
    }
    const AsymptoticFit fit = fit_property2(points);
    nlohmann::json out{{"x", fit.x},
                       {"y", fit.y},
                       {"z", fit.z},
                       {"ten_pow_x", std::pow(10.0, fit.x)},
                       {"residual_norm", fit.residual_norm},
                       {"points", points.size()}};
    csv << out.dump(2) << "\n";
  } else {  // error-vs-formula
    csv << "n,ratio,c_opt,c_formula,error\n";
    int max_error = 0;
    for (int n : ns) {
      for (double ratio : ratios) {
        const int c_opt =
            optimal_replicas_search(n, 1.0, ratio, default_c_max(n), args.samples, args.seed, cache);
        const int c_formula = approx_optimal_replicas(n, 1.0, ratio);
        const int error = std::abs(c_formula - c_opt);
        max_error = std::max(max_error, error);
        csv << n << ',' << format_double(ratio) << ',' << c_opt << ',' << c_formula << ',' << error
            << "\n";
      }
    }
    std::cerr << "max |c_formula - c_opt| = " << max_error << "\n";
  }

  if (!args.cache_path.empty()) cache.save();
  write_text(args.out, csv.str());
  return kExitOk;
}

struct FitArgs {
  std::string input;
  std::string out;
};

int cmd_fit(const FitArgs& args) {
  std::ifstream in(args.input);
  if (!in) throw std::runtime_error("cannot open '" + args.input + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty fit input");
  const std::vector<std::string> header = split_csv_line(line);
  int n_col = -1, ratio_col = -1, c_col = -1;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    if (header[i] == "n") n_col = i;
    if (header[i] == "ratio") ratio_col = i;
    if (header[i] == "c_opt") c_col = i;
  }
  if (n_col < 0 || ratio_col < 0 || c_col < 0) {
    throw std::runtime_error("fit input must have columns n,ratio,c_opt");
  }
  std::vector<FitPoint> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    points.push_back({std::stoi(fields[n_col]), std::stod(fields[ratio_col]), std::stoi(fields[c_col])});
  }
  const AsymptoticFit fit = fit_property2(points);
  nlohmann::json out{{"x", fit.x},
                     {"y", fit.y},
                     {"z", fit.z},
                     {"ten_pow_x", std::pow(10.0, fit.x)},
                     {"residual_norm", fit.residual_norm},
                     {"points", points.size()}};
  write_text(args.out, out.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"replica placement toolkit for stateful data planes"};
  app.require_subcommand(1);

  std::uint64_t global_seed = 1;
  std::string global_out;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  std::string format = "json";
  app.add_option("--seed", global_seed, "default RNG seed");
  app.add_option("--out", global_out, "default output path ('-' = stdout)");
  app.add_option("--threads", threads, "worker threads for sweeps");
  app.add_option("--format", format, "solve stdout format")->check(CLI::IsMember({"csv", "json"}));

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "write a scenario file");
  generate->add_option("--topology", gen.topology)->check(CLI::IsMember({"manhattan", "ws"}));
  generate->add_option("--rows", gen.rows);
  generate->add_option("--cols", gen.cols);
  generate->add_option("--n", gen.n);
  generate->add_option("--k", gen.k);
  generate->add_option("--p", gen.p);
  generate->add_option("--capacity", gen.capacity, "link capacity (number or 'inf')");
  generate->add_option("--traffic", gen.traffic)->check(CLI::IsMember({"uniform", "clustered"}));
  generate->add_option("--demand", gen.demand);
  generate->add_option("--state-id", gen.state_id);
  generate->add_option("--max-replicas", gen.max_replicas);
  generate->add_option("--sync-rate", gen.sync_rate);
  generate->add_option("--seed", gen.seed);
  generate->add_option("--out", gen.out);

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve a scenario");
  solve_cmd->add_option("--scenario", solve.scenario_path)->required();
  solve_cmd->add_option("--solver", solve.solver)->check(CLI::IsMember({"exact", "pmr"}));
  solve_cmd->add_option("--cap", solve.cap, "distinct replica cap (exact)");
  solve_cmd->add_option("--cs", solve.cs, "replica budget (pmr)");
  solve_cmd->add_option("--iters", solve.iters, "pmr local search iterations");
  solve_cmd->add_option("--ip", solve.partition_iters, "pmr partition iterations");
  solve_cmd->add_option("--seed", solve.seed);
  solve_cmd->add_option("--budget", solve.budget, "placement enumeration budget");
  solve_cmd->add_option("--out", solve.out, "solution JSON path");
  solve_cmd->add_option("--csv", solve.csv_path, "append a result row to this CSV");
  solve_cmd->add_option("--trace", solve.trace_path, "pmr convergence trace CSV");

  std::string experiment_config;
  std::string experiment_out_dir;
  int experiment_seeds = 0;
  CLI::App* experiment_cmd = app.add_subcommand("experiment", "run a config-driven sweep");
  experiment_cmd->add_option("--config", experiment_config)->required();
  experiment_cmd->add_option("--out-dir", experiment_out_dir);
  experiment_cmd->add_option("--seeds", experiment_seeds, "override seed count");

  AsymptoticArgs asym;
  CLI::App* asym_cmd = app.add_subcommand("asymptotic", "unit-square analysis");
  asym_cmd->add_flag("--dcurves", asym.dcurves, "distance curves over replica counts");
  asym_cmd->add_flag("--copt", asym.copt, "optimal replica count grid");
  asym_cmd->add_flag("--fit", asym.fit, "fit the replica count power law");
  asym_cmd->add_flag("--error-vs-formula", asym.error_vs_formula, "formula vs search error table");
  asym_cmd->add_option("--cmax", asym.cmax);
  asym_cmd->add_option("--samples", asym.samples);
  asym_cmd->add_option("--seed", asym.seed);
  asym_cmd->add_option("--nset", asym.nset, "comma list of N values");
  asym_cmd->add_option("--ratios", asym.ratios, "comma list of sync/data ratios");
  asym_cmd->add_option("--cache", asym.cache_path, "distance cache JSON");
  asym_cmd->add_option("--out", asym.out);
  asym_cmd->add_option("--svg", asym.svg_path);

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "least-squares fit of c_opt points");
  fit_cmd->add_option("--input", fit.input)->required();
  fit_cmd->add_option("--out", fit.out);

  // Global flags may appear after the subcommand.
  for (CLI::App* sub : {generate, solve_cmd, experiment_cmd, asym_cmd, fit_cmd}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*generate) {
      if (gen.out.empty()) gen.out = global_out;
      if (!generate->count("--seed")) gen.seed = global_seed;
      return cmd_generate(gen);
    }
    if (*solve_cmd) {
      if (solve.out.empty()) solve.out = global_out;
      if (!solve_cmd->count("--seed")) solve.seed = global_seed;
      solve.format = format;
      return cmd_solve(solve);
    }
    if (*experiment_cmd) {
      ExperimentConfig cfg = load_experiment_config(experiment_config);
      if (experiment_seeds > 0) cfg.seed_count = experiment_seeds;
      const std::filesystem::path out_dir = experiment_out_dir.empty()
                                                ? std::filesystem::path("out") / cfg.name
                                                : std::filesystem::path(experiment_out_dir);
      const ExperimentOutput output = run_experiment(cfg, std::max(1, threads));
      write_experiment_outputs(cfg, output, out_dir);
      std::cerr << output.rows.size() << " rows -> " << out_dir.string() << "\n";
      return kExitOk;
    }
    if (*asym_cmd) {
      if (asym.out.empty()) asym.out = global_out;
      if (!asym_cmd->count("--seed")) asym.seed = global_seed;
      return cmd_asymptotic(asym);
    }
    if (*fit_cmd) {
      if (fit.out.empty()) fit.out = global_out;
      return cmd_fit(fit);
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    const std::string message = e.what();
    return message.find("unplaced state") != std::string::npos ? kExitInfeasible : 1;
  }
  return kExitUsage;
}
