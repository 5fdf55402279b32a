#pragma once

#include <string>

#include "staterep/evaluator.hpp"

namespace staterep {

// Routed solution as JSON: per-flow replica choices + walks, per-pair sync
// paths, per-edge loads, the traffic scalars and the placement.
std::string solution_to_json(const Scenario& scenario, const Placement& placement,
                             const EvalResult& result);

}  // namespace staterep
