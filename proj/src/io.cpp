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

#include "edgearo/io.hpp"

#include <unistd.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "edgearo/errors.hpp"

namespace edgearo {

namespace {

const Json& field(const Json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw InvalidInput(std::string("instance: missing key '") + key + "'");
  }
  return doc.at(key);
}

template <typename T>
std::vector<T> array_of(const Json& doc, const char* key, std::size_t n) {
  const Json& v = field(doc, key);
  if (!v.is_array()) {
    throw InvalidInput(std::string("instance: '") + key + "' must be an array");
  }
  if (v.size() != n) {
    throw InvalidInput(std::string("instance: '") + key + "' has length " +
                       std::to_string(v.size()) + ", expected " +
                       std::to_string(n));
  }
  return v.get<std::vector<T>>();
}

// Per-area vector given either as an array or as one scalar for all areas.
std::vector<double> array_or_scalar(const Json& doc, const char* key,
                                    std::size_t n) {
  const Json& v = field(doc, key);
  if (v.is_number()) return std::vector<double>(n, v.get<double>());
  return array_of<double>(doc, key, n);
}

template <typename T>
Matrix<T> matrix_of(const Json& doc, const char* key, std::size_t rows,
                    std::size_t cols) {
  const Json& v = field(doc, key);
  Matrix<T> m(rows, cols);
  const auto bad = [&] {
    return InvalidInput(std::string("instance: '") + key +
                        "' must be I x J (flat row-major or nested)");
  };
  if (!v.is_array()) throw bad();
  if (v.size() == rows * cols && (v.empty() || !v.front().is_array())) {
    for (std::size_t k = 0; k < rows * cols; ++k) {
      m(k / cols, k % cols) = v[k].get<T>();
    }
    return m;
  }
  if (v.size() != rows) throw bad();
  for (std::size_t r = 0; r < rows; ++r) {
    if (!v[r].is_array() || v[r].size() != cols) throw bad();
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = v[r][c].get<T>();
  }
  return m;
}

std::size_t positive_count(const Json& doc, const char* key) {
  const Json& v = field(doc, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw InvalidInput(std::string("instance: '") + key +
                       "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

ProblemInstance instance_from_json(const Json& doc) {
  try {
    ProblemInstance inst;
    const std::size_t I = positive_count(doc, "areas");
    const std::size_t J = positive_count(doc, "nodes");
    inst.num_areas = I;
    inst.num_nodes = J;
    inst.price = array_of<double>(doc, "prices", J);
    inst.capacity = array_of<double>(doc, "capacities", J);
    inst.install_cost = array_of<double>(doc, "placement_costs", J);
    // Both default to zero: nothing stored, nothing preinstalled.
    inst.storage_cost = doc.contains("storage_costs")
                            ? array_of<double>(doc, "storage_costs", J)
                            : std::vector<double>(J, 0.0);
    inst.initial_placement.assign(J, 0);
    if (doc.contains("initial_placement")) {
      inst.initial_placement.clear();
      for (int l : array_of<int>(doc, "initial_placement", J)) {
        if (l != 0 && l != 1) {
          throw InvalidInput("initial_placement must be 0/1");
        }
        inst.initial_placement.push_back(static_cast<std::uint8_t>(l));
      }
    }
    inst.delay = matrix_of<double>(doc, "delays", I, J);
    inst.beta = field(doc, "beta").get<double>();
    inst.unmet_penalty = array_or_scalar(doc, "unmet_penalty", I);
    inst.budget = field(doc, "budget").get<double>();
    inst.nominal_demand = array_of<double>(doc, "nominal_demand", I);
    if (doc.contains("deviation")) {
      inst.deviation = array_of<double>(doc, "deviation", I);
    } else if (doc.contains("alpha")) {
      const double alpha = doc.at("alpha").get<double>();
      if (!(alpha >= 0.0)) throw InvalidInput("alpha must be nonnegative");
      for (double lam : inst.nominal_demand) {
        inst.deviation.push_back(alpha * lam);
      }
    } else {
      throw InvalidInput("instance: need 'deviation' or 'alpha'");
    }
    inst.uncertainty.gamma = field(doc, "gamma").get<int>();
    inst.uncertainty.failure_budget = field(doc, "failure_budget").get<int>();
    if (doc.contains("dmax") && !doc.at("dmax").is_null()) {
      inst.max_delay = doc.at("dmax").get<double>();
    }
    if (doc.contains("eligibility") && !doc.at("eligibility").is_null()) {
      const auto a = matrix_of<int>(doc, "eligibility", I, J);
      inst.eligible = Matrix<std::uint8_t>(I, J);
      for (std::size_t i = 0; i < I; ++i) {
        for (std::size_t j = 0; j < J; ++j) {
          if (a(i, j) != 0 && a(i, j) != 1) {
            throw InvalidInput("eligibility must be 0/1");
          }
          inst.eligible(i, j) = static_cast<std::uint8_t>(a(i, j));
        }
      }
    } else {
      inst.eligible = derive_eligibility(inst.delay, inst.max_delay);
    }
    inst.validate();
    return inst;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("instance: ") + e.what());
  }
}

Json instance_to_json(const ProblemInstance& inst) {
  Json doc;
  doc["areas"] = inst.num_areas;
  doc["nodes"] = inst.num_nodes;
  doc["prices"] = inst.price;
  doc["capacities"] = inst.capacity;
  doc["placement_costs"] = inst.install_cost;
  doc["storage_costs"] = inst.storage_cost;
  Json l0 = Json::array();
  for (auto l : inst.initial_placement) l0.push_back(static_cast<int>(l));
  doc["initial_placement"] = l0;
  doc["delays"] = std::vector<double>(inst.delay.flat().begin(),
                                      inst.delay.flat().end());
  Json a = Json::array();
  for (auto v : inst.eligible.flat()) a.push_back(static_cast<int>(v));
  doc["eligibility"] = a;
  doc["beta"] = inst.beta;
  doc["unmet_penalty"] = inst.unmet_penalty;
  doc["budget"] = inst.budget;
  doc["nominal_demand"] = inst.nominal_demand;
  doc["deviation"] = inst.deviation;
  doc["gamma"] = inst.uncertainty.gamma;
  doc["failure_budget"] = inst.uncertainty.failure_budget;
  doc["dmax"] = std::isfinite(inst.max_delay) ? Json(inst.max_delay)
                                              : Json(nullptr);
  return doc;
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json(path));
}

Json plan_to_json(const PlanRecord& record) {
  Json doc;
  Json t = Json::array();
  for (auto v : record.plan.placed) t.push_back(static_cast<int>(v));
  doc["t"] = t;
  doc["y"] = record.plan.procured;
  doc["method"] = record.method;
  doc["objective"] = record.objective;
  return doc;
}

PlanRecord plan_from_json(const Json& doc) {
  try {
    PlanRecord r;
    for (int v : doc.at("t").get<std::vector<int>>()) {
      if (v != 0 && v != 1) throw InvalidInput("plan: t must be 0/1");
      r.plan.placed.push_back(static_cast<std::uint8_t>(v));
    }
    r.plan.procured = doc.at("y").get<std::vector<double>>();
    if (r.plan.procured.size() != r.plan.placed.size()) {
      throw InvalidInput("plan: t and y lengths differ");
    }
    r.method = doc.value("method", std::string("unknown"));
    r.objective = doc.value("objective", 0.0);
    return r;
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("plan: ") + e.what());
  }
}

PlanRecord load_plan(const std::filesystem::path& path) {
  return plan_from_json(read_json(path));
}

Json graph_to_json(const NetworkGraph& graph) {
  Json doc;
  doc["nodes"] = graph.num_nodes;
  doc["seed"] = graph.seed;
  Json edges = Json::array();
  for (const Edge& e : graph.edges) {
    edges.push_back({{"u", e.u}, {"v", e.v}, {"delay_ms", e.delay_ms}});
  }
  doc["edges"] = edges;
  return doc;
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace edgearo
