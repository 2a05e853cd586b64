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

#include "edgearo/topology.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>

#include "edgearo/errors.hpp"

namespace edgearo {

NetworkGraph generate_ba_graph(std::size_t n, std::size_t m,
                               std::uint64_t seed, LinkDelayRange delays) {
  if (m < 1 || n <= m) {
    throw InvalidInput("BA graph needs n > m >= 1 (n=" + std::to_string(n) +
                       ", m=" + std::to_string(m) + ")");
  }
  if (delays.min_ms < 0.0 || delays.max_ms < delays.min_ms) {
    throw InvalidInput("invalid link delay range");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> delay_dist(delays.min_ms,
                                                    delays.max_ms);
  NetworkGraph graph;
  graph.num_nodes = n;
  graph.seed = seed;
  graph.edges.reserve(m * (n - m));

  // Each endpoint appears once per incident edge, so a uniform draw from this
  // list is a degree-proportional draw.
  std::vector<std::size_t> endpoints;
  endpoints.reserve(2 * m * (n - m));

  std::vector<std::size_t> targets(m);
  std::iota(targets.begin(), targets.end(), 0);
  for (std::size_t v = m; v < n; ++v) {
    for (std::size_t t : targets) {
      graph.edges.push_back({t, v, delay_dist(rng)});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
    std::set<std::size_t> chosen;
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (chosen.size() < m) chosen.insert(endpoints[pick(rng)]);
    targets.assign(chosen.begin(), chosen.end());
  }
  return graph;
}

std::vector<double> shortest_delays_from(const NetworkGraph& graph,
                                         std::size_t source) {
  if (source >= graph.num_nodes) throw InvalidInput("source out of range");
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(
      graph.num_nodes);
  for (const Edge& e : graph.edges) {
    adj[e.u].push_back({e.v, e.delay_ms});
    adj[e.v].push_back({e.u, e.delay_ms});
  }
  constexpr double kUnreached = std::numeric_limits<double>::infinity();
  std::vector<double> dist(graph.num_nodes, kUnreached);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, w] : adj[u]) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        heap.push({dist[v], v});
      }
    }
  }
  for (double d : dist) {
    if (d == kUnreached) throw InvalidInput("graph is disconnected");
  }
  return dist;
}

Matrix<double> all_pairs_delays(const NetworkGraph& graph,
                                std::span<const std::size_t> ap_nodes,
                                std::span<const std::size_t> en_nodes) {
  for (std::size_t v : en_nodes) {
    if (v >= graph.num_nodes) throw InvalidInput("EN node out of range");
  }
  Matrix<double> d(ap_nodes.size(), en_nodes.size());
  for (std::size_t i = 0; i < ap_nodes.size(); ++i) {
    const auto dist = shortest_delays_from(graph, ap_nodes[i]);
    for (std::size_t j = 0; j < en_nodes.size(); ++j) {
      d(i, j) = dist[en_nodes[j]];
    }
  }
  return d;
}

Matrix<std::uint8_t> derive_eligibility(const Matrix<double>& delays,
                                        double dmax) {
  Matrix<std::uint8_t> a(delays.rows(), delays.cols());
  for (std::size_t i = 0; i < delays.rows(); ++i) {
    for (std::size_t j = 0; j < delays.cols(); ++j) {
      a(i, j) = delays(i, j) <= dmax ? 1 : 0;
    }
  }
  return a;
}

GeneratedInstance generate_instance(const GeneratorConfig& config) {
  const std::size_t I = config.num_areas;
  const std::size_t J = config.num_nodes;
  if (I < 1 || J < 1) throw InvalidInput("generator needs I, J >= 1");
  if (config.capacity_choices.empty()) {
    throw InvalidInput("generator needs at least one capacity choice");
  }
  const std::size_t shared = config.colocate ? std::min(I, J) : 0;
  const std::size_t needed = I + J - shared;
  const std::size_t n = std::max({config.graph_nodes, needed,
                                  config.attachment + 1});

  GeneratedInstance out;
  out.graph = generate_ba_graph(n, config.attachment, config.seed,
                                config.link_delay);

  // Separate stream for everything after the topology so the graph of a given
  // seed does not depend on I or J.
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  out.en_nodes.assign(order.begin(), order.begin() + J);
  for (std::size_t i = 0; i < I; ++i) {
    if (i < shared) {
      out.ap_nodes.push_back(out.en_nodes[i]);
    } else {
      out.ap_nodes.push_back(order[J + (i - shared)]);
    }
  }

  ProblemInstance& inst = out.instance;
  inst.num_areas = I;
  inst.num_nodes = J;
  std::uniform_real_distribution<double> price(config.price_min,
                                               config.price_max);
  std::uniform_int_distribution<std::size_t> cap(
      0, config.capacity_choices.size() - 1);
  std::uniform_real_distribution<double> place(config.placement_min,
                                               config.placement_max);
  for (std::size_t j = 0; j < J; ++j) {
    inst.price.push_back(price(rng));
    inst.capacity.push_back(config.capacity_choices[cap(rng)]);
    inst.install_cost.push_back(place(rng));
    inst.storage_cost.push_back(0.0);
    inst.initial_placement.push_back(0);
  }
  std::uniform_real_distribution<double> demand(config.demand_min,
                                                config.demand_max);
  for (std::size_t i = 0; i < I; ++i) {
    const double lam = demand(rng);
    inst.nominal_demand.push_back(lam);
    inst.deviation.push_back(config.alpha * lam);
    inst.unmet_penalty.push_back(config.unmet_penalty);
  }
  inst.delay = all_pairs_delays(out.graph, out.ap_nodes, out.en_nodes);
  inst.max_delay = config.max_delay;
  inst.eligible = derive_eligibility(inst.delay, config.max_delay);
  inst.beta = config.beta;
  inst.budget = config.budget;
  inst.uncertainty.gamma =
      std::clamp(config.gamma, 0, static_cast<int>(I));
  inst.uncertainty.failure_budget =
      std::clamp(config.failure_budget, 0, static_cast<int>(J));
  inst.validate();
  return out;
}

}  // namespace edgearo
