// Copyright 2026 The edgearo Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON (de)serialization of instances, plans and graphs, and atomic file
// writes. Parse errors surface as InvalidInput.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "edgearo/instance.hpp"
#include "edgearo/topology.hpp"

namespace edgearo {

using Json = nlohmann::ordered_json;

/// Instance document keys: areas, nodes, prices, capacities, placement_costs,
/// storage_costs and initial_placement (optional, zero), delays (row-major
/// I*J, nested rows also accepted), eligibility (optional; derived from dmax when absent), beta,
/// unmet_penalty (array or scalar), budget, nominal_demand, deviation (array)
/// or alpha (scalar ratio), gamma, failure_budget, dmax (null/absent = inf).
ProblemInstance instance_from_json(const Json& doc);
Json instance_to_json(const ProblemInstance& instance);

ProblemInstance load_instance(const std::filesystem::path& path);

struct PlanRecord {
  FirstStagePlan plan;
  std::string method;
  double objective = 0.0;
};

Json plan_to_json(const PlanRecord& record);
PlanRecord plan_from_json(const Json& doc);
PlanRecord load_plan(const std::filesystem::path& path);

Json graph_to_json(const NetworkGraph& graph);

Json read_json(const std::filesystem::path& path);

/// Writes `content` to a sibling temp file and renames it over `path`, so
/// readers never observe a partial file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

/// Pretty-printed JSON with a trailing newline, written atomically.
void write_json(const std::filesystem::path& path, const Json& doc);

}  // namespace edgearo
