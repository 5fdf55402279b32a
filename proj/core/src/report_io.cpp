#include "staterep/report_io.hpp"

#include <json.hpp>

namespace staterep {

std::string solution_to_json(const Scenario& scenario, const Placement& placement,
                             const EvalResult& result) {
  using nlohmann::json;
  json root;

  json jplacement = json::object();
  for (const auto& [state_id, hosts] : placement.replicas) jplacement[state_id] = hosts;
  root["placement"] = std::move(jplacement);

  json flows = json::array();
  for (const RoutedFlow& f : result.solution.flows) {
    flows.push_back({{"flow_id", f.flow_id},
                     {"replica_choice", f.replica_choice},
                     {"walk", f.walk},
                     {"hop_length", f.hop_length}});
  }
  root["flows"] = std::move(flows);

  json sync = json::array();
  for (const SyncPath& s : result.solution.sync_paths) {
    sync.push_back({{"state", s.state_id}, {"from", s.from}, {"to", s.to}, {"path", s.path}});
  }
  root["sync"] = std::move(sync);

  json edges = json::array();
  const auto& graph_edges = scenario.graph.edges();
  for (std::size_t i = 0; i < graph_edges.size(); ++i) {
    edges.push_back(
        {{"u", graph_edges[i].u}, {"v", graph_edges[i].v}, {"load", result.report.edge_loads[i]}});
  }
  root["edges"] = std::move(edges);

  root["report"] = {{"data_total", result.report.data_total},
                    {"sync_total", result.report.sync_total},
                    {"objective_total", result.report.objective_total},
                    {"max_link_load", result.report.max_link_load},
                    {"capacity_feasible", result.report.capacity_feasible}};
  return root.dump(2) + "\n";
}

}  // namespace staterep
