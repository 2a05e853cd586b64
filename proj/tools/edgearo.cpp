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

// edgearo: generate instances, solve them, evaluate plans, run sweeps and
// audit model sizes. Every command writes into one output directory and
// finishes with a manifest.json listing the configuration and file hashes.
//
// Exit codes: 0 ok, 2 nonconvergence or limit hit, 3 invalid input,
// 4 backend or internal error.

#include <openssl/evp.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgearo/adr.hpp"
#include "edgearo/errors.hpp"
#include "edgearo/evaluation.hpp"
#include "edgearo/io.hpp"
#include "edgearo/topology.hpp"

#ifndef EDGEARO_GIT_DESCRIBE
#define EDGEARO_GIT_DESCRIBE "unknown"
#endif

namespace fs = std::filesystem;
using namespace edgearo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitBackend = 4;

// Raised for a complete run whose solver did not reach its target.
struct NotConverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 15];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0')
       << static_cast<int>(md[i]);
  }
  return os.str();
}

double parse_number(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw InvalidInput("not a number: '" + text + "'");
  }
  return v;
}

Json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

// Output directory bookkeeping: records every file written so the manifest
// can hash them.
class Run {
 public:
  Run(std::string command, fs::path out) :
      command_(std::move(command)), out_(std::move(out)) {}

  const fs::path& dir() const { return out_; }

  void write_text(const std::string& name, const std::string& text) {
    write_file_atomic(out_ / name, text);
    files_.push_back(name);
  }
  void write_doc(const std::string& name, const Json& doc) {
    write_json(out_ / name, doc);
    files_.push_back(name);
  }

  Json config = Json::object();
  Json seeds = Json::object();

  void finish() {
    Json manifest;
    manifest["command"] = command_;
    manifest["git_describe"] = EDGEARO_GIT_DESCRIBE;
    manifest["config"] = config;
    manifest["seeds"] = seeds;
    Json hashes = Json::object();
    for (const std::string& f : files_) hashes[f] = sha256_file(out_ / f);
    manifest["files"] = hashes;
    write_json(out_ / "manifest.json", manifest);
  }

 private:
  std::string command_;
  fs::path out_;
  std::vector<std::string> files_;
};

// ---- options ----------------------------------------------------------------

struct SolverFlags {
  double eps = 1e-4;
  double gap = 1e-6;
  double time_limit = 0.0;  // 0 = none
  int max_iterations = 500;
  bool continuous = false;
  std::uint64_t seed = 1;
  std::size_t training_scenarios = 100;
  double training_correlation = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--eps", eps, "Relative CCG gap target")
        ->check(CLI::PositiveNumber);
    app->add_option("--gap", gap, "Relative MIP gap for every MILP")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--time-limit", time_limit,
                    "Seconds per solve (CCG: whole run); 0 means none")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--max-iterations", max_iterations, "CCG round cap")
        ->check(CLI::PositiveNumber);
    app->add_flag("--continuous", continuous,
                  "Relax integrality of procured units");
    app->add_option("--seed", seed, "Seed for stochastic training scenarios");
    app->add_option("--training-scenarios", training_scenarios,
                    "Training scenarios for the stochastic baseline")
        ->check(CLI::PositiveNumber);
    app->add_option("--training-correlation", training_correlation,
                    "Pairwise demand correlation of training scenarios")
        ->check(CLI::Range(-1.0, 1.0));
  }

  MethodOptions options() const {
    MethodOptions o;
    o.eps = eps;
    o.params.mip_gap = gap;
    if (time_limit > 0) o.time_limit = time_limit;
    o.max_iterations = max_iterations;
    o.integer_procurement = !continuous;
    o.training.num_scenarios = training_scenarios;
    o.training.correlation = training_correlation;
    o.training.seed = seed;
    return o;
  }

  Json to_json() const {
    Json j;
    j["eps"] = eps;
    j["gap"] = gap;
    j["time_limit"] = time_limit > 0 ? Json(time_limit) : Json(nullptr);
    j["max_iterations"] = max_iterations;
    j["integer_procurement"] = !continuous;
    j["training_scenarios"] = training_scenarios;
    j["training_correlation"] = training_correlation;
    return j;
  }
};

struct EvalFlags {
  std::size_t scenarios = 1000;
  std::string distribution = "lognormal";
  double psi = 1.0;
  std::uint64_t seed = 1;

  void attach(CLI::App* app) {
    app->add_option("--scenarios", scenarios, "Test scenarios per evaluation")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--distribution", distribution,
                    "Test demand family: lognormal, normal, uniform");
    app->add_option("--psi", psi, "Penalty scale at evaluation")
        ->check(CLI::PositiveNumber);
    app->add_option("--eval-seed", seed, "Seed for test scenarios");
  }

  EvaluationConfig config(int k_test) const {
    EvaluationConfig c;
    c.num_scenarios = scenarios;
    c.distribution = parse_distribution(distribution);
    c.psi = psi;
    c.seed = seed;
    c.k_test = k_test;
    return c;
  }
};

void check_backend() {
  if (const char* env = std::getenv("EDGEARO_BACKEND")) {
    if (std::string(env) != "highs") {
      throw InvalidInput(std::string("unsupported backend '") + env +
                         "' (only highs is available)");
    }
  }
}

// ---- commands ---------------------------------------------------------------

struct GenerateArgs {
  GeneratorConfig gen;
  std::string dmax = "inf";
  bool disjoint = false;
  std::string out;
};

void cmd_generate(const GenerateArgs& args) {
  GeneratorConfig cfg = args.gen;
  cfg.colocate = !args.disjoint;
  cfg.max_delay = parse_number(args.dmax);
  if (cfg.num_areas == 0 || cfg.num_nodes == 0) {
    throw InvalidInput("areas and nodes must be at least 1");
  }
  const GeneratedInstance g = generate_instance(cfg);

  Run run("generate", args.out);
  run.write_doc("instance.json", instance_to_json(g.instance));
  Json topo = graph_to_json(g.graph);
  topo["ap_nodes"] = g.ap_nodes;
  topo["en_nodes"] = g.en_nodes;
  run.write_doc("topology.json", topo);
  run.config = {{"areas", cfg.num_areas},
                {"nodes", cfg.num_nodes},
                {"graph_nodes", cfg.graph_nodes},
                {"attachment", cfg.attachment},
                {"colocate", cfg.colocate},
                {"gamma", cfg.gamma},
                {"failure_budget", cfg.failure_budget},
                {"budget", cfg.budget},
                {"alpha", cfg.alpha},
                {"beta", cfg.beta},
                {"unmet_penalty", cfg.unmet_penalty},
                {"dmax", number_or_null(cfg.max_delay)}};
  run.seeds["generator"] = cfg.seed;
  run.finish();
  std::cout << "instance " << (run.dir() / "instance.json").string() << " ("
            << g.instance.num_areas << " areas, " << g.instance.num_nodes
            << " nodes)\n";
}

struct SolveArgs {
  std::string instance;
  std::string method = "ccg-duality";
  std::string out;
  SolverFlags solver;
};

void cmd_solve(const SolveArgs& args) {
  const ProblemInstance inst = load_instance(args.instance);
  const Method method = parse_method(args.method);
  const MethodOutcome res = solve_with_method(inst, method,
                                              args.solver.options());

  Run run("solve", args.out);
  Json plan = plan_to_json({res.plan, to_string(method), res.objective});
  plan["provisioning"] = provisioning_cost(inst, res.plan);
  plan["converged"] = res.converged;
  plan["seconds"] = res.seconds;
  if (res.ccg) {
    const CcgResult& c = *res.ccg;
    plan["iterations"] = c.state.iteration;
    plan["lower_bound"] = c.state.lower_bound;
    plan["upper_bound"] = c.state.upper_bound;
    plan["gap"] = ccg_gap(c.state.upper_bound, c.state.lower_bound);
    plan["repeated_vertex"] = c.repeated_vertex;
    plan["degraded"] = c.degraded;
  }
  run.write_doc("plan.json", plan);
  if (res.ccg) run.write_text("trace.csv", trace_to_csv(res.ccg->state.trace));
  if (res.policy) run.write_doc("policy.json", policy_to_json(*res.policy));

  run.config = args.solver.to_json();
  run.config["instance"] = fs::absolute(args.instance).string();
  run.config["method"] = to_string(method);
  if (method == Method::kSo) run.seeds["training"] = args.solver.seed;
  run.finish();

  std::cout << to_string(method) << " objective " << std::setprecision(10)
            << res.objective << " in " << std::setprecision(3) << res.seconds
            << " s\n";
  if (!res.converged) {
    throw NotConverged(std::string(to_string(method)) +
                       " stopped before reaching its target");
  }
}

struct EvaluateArgs {
  std::string instance;
  std::vector<std::string> plans;
  std::string policy;
  std::vector<int> k_test;
  bool certify = true;
  double gap = 1e-6;
  std::string out;
  EvalFlags eval;
};

void cmd_evaluate(const EvaluateArgs& args) {
  const ProblemInstance inst = load_instance(args.instance);
  if (args.plans.empty()) throw InvalidInput("at least one --plan is needed");
  std::vector<PlanRecord> plans;
  for (const std::string& p : args.plans) plans.push_back(load_plan(p));
  std::optional<AffinePolicy> policy;
  if (!args.policy.empty()) {
    if (plans.size() != 1) {
      throw InvalidInput("--policy replays the rules of exactly one plan");
    }
    policy = policy_from_json(read_json(args.policy));
  }
  std::vector<int> ks = args.k_test;
  if (ks.empty()) ks.push_back(inst.uncertainty.failure_budget);

  const ProblemInstance judged = args.eval.psi == 1.0
                                     ? inst
                                     : scale_penalties(inst, args.eval.psi);
  milp::SolveParams cert_params;
  cert_params.mip_gap = args.gap;

  Run run("evaluate", args.out);
  std::ostringstream table;
  table << "method,plan,k_test,avg,worst,certified_worst,provisioning,"
           "avg_unmet\n";
  Json summaries = Json::array();
  std::vector<double> certified(plans.size(),
                                std::numeric_limits<double>::quiet_NaN());
  if (args.certify) {
    for (std::size_t p = 0; p < plans.size(); ++p) {
      certified[p] = certify_worst_case(judged, plans[p].plan, cert_params);
    }
  }
  auto emit = [&](EvaluationReport rep, const std::string& label,
                  std::size_t p, int k) {
    rep.method = label;
    rep.certified_worst = certified[p];
    const std::string tag = label + "_k" + std::to_string(k);
    run.write_text("scenarios_" + tag + ".csv", scenarios_to_csv(rep));
    Json s = report_summary(rep);
    s["plan"] = args.plans[p];
    s["k_test"] = k;
    summaries.push_back(s);
    auto num = [](double v) {
      std::ostringstream os;
      if (std::isfinite(v)) os << std::setprecision(12) << v;
      return os.str();
    };
    table << label << ',' << args.plans[p] << ',' << k << ','
          << num(rep.average) << ',' << num(rep.worst) << ','
          << num(rep.certified_worst) << ',' << num(rep.provisioning) << ','
          << num(rep.average_unmet) << '\n';
  };
  for (int k : ks) {
    const auto scenarios =
        generate_test_scenarios(inst, args.eval.config(k));
    for (std::size_t p = 0; p < plans.size(); ++p) {
      std::string label = plans[p].method.empty() ? "plan" + std::to_string(p)
                                                  : plans[p].method;
      emit(monte_carlo(inst, plans[p].plan, scenarios, args.eval.psi), label,
           p, k);
      if (policy) {
        emit(monte_carlo_policy(inst, plans[p].plan, *policy, scenarios,
                                args.eval.psi),
             label + "-policy", p, k);
      }
    }
  }
  run.write_text("comparison.csv", table.str());
  run.write_doc("summary.json", summaries);

  run.config = {{"instance", fs::absolute(args.instance).string()},
                {"plans", args.plans},
                {"scenarios", args.eval.scenarios},
                {"distribution", args.eval.distribution},
                {"psi", args.eval.psi},
                {"k_test", ks},
                {"certify", args.certify},
                {"gap", args.gap}};
  run.seeds["test_scenarios"] = args.eval.seed;
  run.finish();
  std::cout << table.str();
}

struct SweepArgs {
  std::string instance;
  std::string axis;
  std::vector<std::string> values;
  std::vector<std::string> methods{"ccg-duality"};
  std::string psi_mode = "both";
  bool certify = true;
  int k_test = -1;
  std::string out;
  SolverFlags solver;
  EvalFlags eval;
};

void cmd_sweep(const SweepArgs& args) {
  const ProblemInstance inst = load_instance(args.instance);
  const SweepAxis axis = parse_axis(args.axis);
  std::vector<double> values;
  for (const std::string& v : args.values) values.push_back(parse_number(v));
  std::vector<Method> methods;
  for (const std::string& m : args.methods) methods.push_back(parse_method(m));
  if (args.psi_mode != "both" && args.psi_mode != "eval") {
    throw InvalidInput("--psi-mode must be 'both' or 'eval'");
  }

  SweepOptions opt;
  opt.method = args.solver.options();
  opt.evaluation = args.eval.config(args.k_test);
  opt.psi_in_planning = args.psi_mode == "both";
  opt.certify = args.certify;
  const auto rows = sensitivity_sweep(inst, axis, values, methods, opt);

  Run run("sweep", args.out);
  const std::string csv = sweep_to_csv(axis, rows);
  run.write_text("sweep.csv", csv);
  run.config = args.solver.to_json();
  run.config["instance"] = fs::absolute(args.instance).string();
  run.config["axis"] = to_string(axis);
  run.config["values"] = args.values;
  run.config["methods"] = args.methods;
  run.config["psi_mode"] = args.psi_mode;
  run.config["scenarios"] = args.eval.scenarios;
  run.config["distribution"] = args.eval.distribution;
  run.config["k_test"] = args.k_test;
  run.seeds["training"] = args.solver.seed;
  run.seeds["test_scenarios"] = args.eval.seed;
  run.finish();
  std::cout << csv;
}

struct AuditArgs {
  std::vector<std::size_t> sizes{1, 2, 3, 5};
  std::string out;
};

void cmd_audit(const AuditArgs& args) {
  std::ostringstream csv;
  csv << "areas,nodes,rows,columns,dual_variables,counted_constraints,"
         "formula_constraints,counted_variables,formula_variables,match\n";
  for (std::size_t n : args.sizes) {
    if (n == 0) throw InvalidInput("sizes must be positive");
    const AdrSizeAudit a = audit_adr_size(n, n);
    csv << a.num_areas << ',' << a.num_nodes << ',' << a.model_rows << ','
        << a.model_columns << ',' << a.dual_variables << ','
        << a.counted_constraints << ',' << a.formula_constraints << ','
        << a.counted_variables << ',' << a.formula_variables << ','
        << (a.matches() ? "yes" : "no") << '\n';
  }
  Run run("audit", args.out);
  run.write_text("audit.csv", csv.str());
  run.config["sizes"] = args.sizes;
  run.finish();
  std::cout << csv.str();
}

void report_error(const char* kind, const std::string& message, int code,
                  const std::string& out) {
  Json err;
  err["error"] = kind;
  err["message"] = message;
  err["exit_code"] = code;
  std::cerr << err.dump() << '\n';
  if (!out.empty()) {
    try {
      write_json(fs::path(out) / "error.json", err);
    } catch (...) {
      // stderr already has it
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilient edge service placement under demand and node "
               "failure uncertainty"};
  app.require_subcommand(1);
  app.set_version_flag("--version", EDGEARO_GIT_DESCRIBE);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic instance");
  g->add_option("-I,--areas", gen.gen.num_areas, "Demand areas")
      ->check(CLI::PositiveNumber);
  g->add_option("-J,--nodes", gen.gen.num_nodes, "Edge nodes")
      ->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.gen.seed, "Generator seed");
  g->add_option("--gamma", gen.gen.gamma, "Demand budget (clamped to I)")
      ->check(CLI::NonNegativeNumber);
  g->add_option("--failures", gen.gen.failure_budget,
                "Failure budget K (clamped to J)")
      ->check(CLI::NonNegativeNumber);
  g->add_option("--budget", gen.gen.budget, "Provisioning budget");
  g->add_option("--alpha", gen.gen.alpha, "Deviation ratio");
  g->add_option("--beta", gen.gen.beta, "Delay penalty weight");
  g->add_option("--penalty", gen.gen.unmet_penalty, "Unmet demand penalty");
  g->add_option("--dmax", gen.dmax, "Delay limit in ms, or inf");
  g->add_option("--graph-nodes", gen.gen.graph_nodes, "Topology size");
  g->add_option("--attachment", gen.gen.attachment,
                "Preferential attachment degree");
  g->add_flag("--disjoint", gen.disjoint,
              "Put access points and edge nodes on distinct graph nodes");
  g->add_option("--out", gen.out, "Output directory")->required();

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Plan with one method");
  s->add_option("--instance", solve.instance, "Instance JSON")
      ->required()
      ->check(CLI::ExistingFile);
  s->add_option("--method", solve.method,
                "ccg-duality, ccg-kkt, adr, extensive, det, so, heu");
  s->add_option("--out", solve.out, "Output directory")->required();
  solve.solver.attach(s);

  EvaluateArgs eval;
  auto* e = app.add_subcommand("evaluate", "Replay plans on test scenarios");
  e->add_option("--instance", eval.instance, "Instance JSON")
      ->required()
      ->check(CLI::ExistingFile);
  e->add_option("--plan", eval.plans, "Plan JSON (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  e->add_option("--policy", eval.policy,
                "Affine policy JSON to replay alongside the recourse LP")
      ->check(CLI::ExistingFile);
  e->add_option("--k-test", eval.k_test,
                "Failure budget(s) of the test scenarios")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  e->add_flag("--certify,!--no-certify", eval.certify,
              "Compute the certified worst case of each plan");
  e->add_option("--gap", eval.gap, "MIP gap of the certification solve");
  e->add_option("--out", eval.out, "Output directory")->required();
  eval.eval.attach(e);

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Vary one parameter across methods");
  w->add_option("--instance", sweep.instance, "Instance JSON")
      ->required()
      ->check(CLI::ExistingFile);
  w->add_option("--axis", sweep.axis,
                "K, Gamma, beta, Psi, alpha, B, Dmax, I, J")
      ->required();
  w->add_option("--values", sweep.values, "Comma separated axis values")
      ->required()
      ->delimiter(',');
  w->add_option("--method,--methods", sweep.methods,
                "Comma separated methods")
      ->delimiter(',');
  w->add_option("--psi-mode", sweep.psi_mode,
                "Psi rescales 'both' planning and evaluation, or 'eval'");
  w->add_option("--k-test", sweep.k_test,
                "Failure budget of test scenarios (default: instance K)");
  w->add_flag("--certify,!--no-certify", sweep.certify,
              "Compute the certified worst case per cell");
  w->add_option("--out", sweep.out, "Output directory")->required();
  sweep.solver.attach(w);
  sweep.eval.attach(w);
  sweep.eval.scenarios = 200;

  AuditArgs audit;
  auto* a = app.add_subcommand("audit",
                               "Compare affine model size to closed forms");
  a->add_option("--sizes", audit.sizes, "Square sizes I=J to audit")
      ->delimiter(',');
  a->add_option("--out", audit.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitInvalid;
  }

  std::string out;
  for (const CLI::App* sub : app.get_subcommands()) {
    out = sub->get_option("--out")->as<std::string>();
  }
  try {
    check_backend();
    if (*g) cmd_generate(gen);
    if (*s) cmd_solve(solve);
    if (*e) cmd_evaluate(eval);
    if (*w) cmd_sweep(sweep);
    if (*a) cmd_audit(audit);
  } catch (const NotConverged& err) {
    report_error("not_converged", err.what(), kExitNotConverged, out);
    return kExitNotConverged;
  } catch (const EnumerationInfeasible& err) {
    report_error("enumeration_infeasible", err.what(), kExitInvalid, out);
    return kExitInvalid;
  } catch (const InvalidInput& err) {
    report_error("invalid_input", err.what(), kExitInvalid, out);
    return kExitInvalid;
  } catch (const BackendError& err) {
    report_error("backend_error", err.what(), kExitBackend, out);
    return kExitBackend;
  } catch (const std::exception& err) {
    report_error("internal_error", err.what(), kExitBackend, out);
    return kExitBackend;
  }
  return kExitOk;
}
