// Scenario file format (JSON):
//
//   {
//     "nodes": N,
//     "edges": [{"u": 0, "v": 1, "capacity": 1.5 | "inf"}, ...],   // undirected links
//     "states": [{"id": "s0", "max_replicas": 3, "sync_rate": 0.5}, ...],
//     "flows": [{"src": 0, "dst": 5, "demand": 1.0, "states": ["s0"]}, ...],
//     "meta": {"seed": "7", ...}
//   }
//
// The loader expands each undirected link into both directed edges and
// validates the result; "inf" (in either direction) marks unbounded capacity.

#pragma once

#include <filesystem>
#include <string>

#include "staterep/scenario.hpp"

namespace staterep {

Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& s);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

}  // namespace staterep
