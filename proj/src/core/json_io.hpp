#pragma once
#include <json.hpp>

#include "core/protocol.hpp"
#include "core/states.hpp"

namespace qss {

// File formats. A state is {"dim": 4, "re": [[..]], "im": [[..]]} row-major.
// A behavior is {"task": ..., "p": [z][x][y][a]} with the protocol module's
// index conventions.

nlohmann::json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const nlohmann::json& j);

nlohmann::json behavior_to_json(const Behavior& b);
Behavior behavior_from_json(const nlohmann::json& j);

nlohmann::json scores_to_json(const Scores& s);

}  // namespace qss
