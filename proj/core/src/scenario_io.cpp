#include "staterep/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace staterep {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("scenario: " + msg); }

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) fail(where + ": missing '" + key + "'");
  return obj.at(key);
}

double parse_capacity(const json& value, const std::string& where) {
  if (value.is_string()) {
    if (value.get<std::string>() == "inf") return kUnboundedCapacity;
    fail(where + ": capacity string must be \"inf\"");
  }
  if (!value.is_number()) fail(where + ": capacity must be a number or \"inf\"");
  const double c = value.get<double>();
  if (!(c > 0)) fail(where + ": capacity must be positive");
  return c;
}

json capacity_to_json(double c) {
  if (std::isinf(c)) return json("inf");
  return json(c);
}

int line_of_offset(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("parse error at line " + std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  }
  if (!root.is_object()) fail("top level must be an object");

  const json& nodes = require(root, "nodes", "top level");
  if (!nodes.is_number_integer()) fail("'nodes' must be an integer");
  const int n = nodes.get<int>();

  std::vector<Link> links;
  const json& edges = require(root, "edges", "top level");
  if (!edges.is_array()) fail("'edges' must be an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edge " + std::to_string(i);
    const json& e = edges[i];
    if (!e.is_object()) fail(where + ": must be an object");
    Link link;
    link.u = require(e, "u", where).get<int>();
    link.v = require(e, "v", where).get<int>();
    link.capacity = e.contains("capacity") ? parse_capacity(e.at("capacity"), where) : kUnboundedCapacity;
    links.push_back(link);
  }

  std::vector<StateSpec> states;
  const json& jstates = require(root, "states", "top level");
  if (!jstates.is_array()) fail("'states' must be an array");
  for (std::size_t i = 0; i < jstates.size(); ++i) {
    const std::string where = "state " + std::to_string(i);
    const json& s = jstates[i];
    StateSpec spec;
    spec.state_id = require(s, "id", where).get<std::string>();
    spec.max_replicas = require(s, "max_replicas", where).get<int>();
    spec.sync_rate = require(s, "sync_rate", where).get<double>();
    states.push_back(std::move(spec));
  }

  std::vector<FlowSpec> flows;
  const json& jflows = require(root, "flows", "top level");
  if (!jflows.is_array()) fail("'flows' must be an array");
  for (std::size_t i = 0; i < jflows.size(); ++i) {
    const std::string where = "flow " + std::to_string(i);
    const json& f = jflows[i];
    FlowSpec flow;
    flow.flow_id = static_cast<int>(i);
    flow.src = require(f, "src", where).get<int>();
    flow.dst = require(f, "dst", where).get<int>();
    flow.demand = require(f, "demand", where).get<double>();
    if (f.contains("states")) {
      for (const json& sid : f.at("states")) flow.state_sequence.push_back(sid.get<std::string>());
    }
    flows.push_back(std::move(flow));
  }

  std::map<std::string, std::string> meta;
  if (root.contains("meta")) {
    for (const auto& [key, value] : root.at("meta").items()) {
      meta[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
  }

  Scenario scenario{NetworkGraph(n, std::move(links)), std::move(states), std::move(flows), std::move(meta)};
  validate_scenario(scenario);
  return scenario;
}

std::string scenario_to_json(const Scenario& s) {
  json root;
  root["nodes"] = s.graph.node_count();
  json edges = json::array();
  for (const Link& link : s.graph.links()) {
    edges.push_back({{"u", link.u}, {"v", link.v}, {"capacity", capacity_to_json(link.capacity)}});
  }
  root["edges"] = std::move(edges);
  json states = json::array();
  for (const StateSpec& st : s.states) {
    states.push_back({{"id", st.state_id}, {"max_replicas", st.max_replicas}, {"sync_rate", st.sync_rate}});
  }
  root["states"] = std::move(states);
  json flows = json::array();
  for (const FlowSpec& f : s.flows) {
    flows.push_back({{"src", f.src}, {"dst", f.dst}, {"demand", f.demand}, {"states", f.state_sequence}});
  }
  root["flows"] = std::move(flows);
  root["meta"] = s.meta;
  return root.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario: cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str());
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("scenario: cannot write '" + path.string() + "'");
  out << scenario_to_json(s);
}

}  // namespace staterep
