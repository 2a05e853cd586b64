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

// Random edge topologies (Barabasi-Albert) and the per-pair delay and
// eligibility matrices derived from them, plus the synthetic instance
// generator built on top.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "edgearo/instance.hpp"
#include "edgearo/matrix.hpp"

namespace edgearo {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double delay_ms = 0.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct NetworkGraph {
  std::size_t num_nodes = 0;
  std::vector<Edge> edges;
  std::uint64_t seed = 0;

  friend bool operator==(const NetworkGraph&, const NetworkGraph&) = default;
};

struct LinkDelayRange {
  double min_ms = 2.0;
  double max_ms = 10.0;
};

/// Preferential-attachment graph. Seed convention: m isolated nodes; node m
/// links to all of them, and every later node links to m distinct existing
/// nodes drawn with probability proportional to degree. This yields exactly
/// m (n - m) edges. Link delays are uniform in `delays`.
NetworkGraph generate_ba_graph(std::size_t n, std::size_t m,
                               std::uint64_t seed,
                               LinkDelayRange delays = {});

/// Single-source shortest path delays (Dijkstra). Throws InvalidInput when
/// some node is unreachable.
std::vector<double> shortest_delays_from(const NetworkGraph& graph,
                                         std::size_t source);

/// d_ij = shortest-path delay between graph node ap_nodes[i] and
/// en_nodes[j]; zero when co-located.
Matrix<double> all_pairs_delays(const NetworkGraph& graph,
                                std::span<const std::size_t> ap_nodes,
                                std::span<const std::size_t> en_nodes);

/// a_ij = 1 iff d_ij <= dmax (boundary inclusive).
Matrix<std::uint8_t> derive_eligibility(const Matrix<double>& delays,
                                        double dmax);

/// Parameter domains for synthetic instances. Defaults follow the reference
/// simulation setting.
struct GeneratorConfig {
  std::size_t num_areas = 20;
  std::size_t num_nodes = 20;
  std::uint64_t seed = 1;
  std::size_t graph_nodes = 100;
  std::size_t attachment = 2;  // BA m
  LinkDelayRange link_delay;
  // Area i sits at the same graph node as EN i (for i < min(I, J)). When
  // false, APs and ENs occupy disjoint node subsets.
  bool colocate = true;
  double price_min = 0.02, price_max = 0.06;
  std::vector<double> capacity_choices = {32.0, 48.0, 64.0};
  double placement_min = 0.1, placement_max = 0.2;
  double beta = 0.1;
  double budget = 20.0;
  double unmet_penalty = 0.5;
  double demand_min = 5.0, demand_max = 40.0;
  double alpha = 0.6;
  int gamma = 5;
  int failure_budget = 2;
  double max_delay = std::numeric_limits<double>::infinity();
};

struct GeneratedInstance {
  ProblemInstance instance;
  NetworkGraph graph;
  std::vector<std::size_t> ap_nodes;
  std::vector<std::size_t> en_nodes;
};

GeneratedInstance generate_instance(const GeneratorConfig& config);

}  // namespace edgearo
