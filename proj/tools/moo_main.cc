// Copyright 2026 The MOO Ranking Authors
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

// moo: command-line front end for the ranking solvers, the interaction
// model, the QCQP linearizer and the benchmark suite.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "moo/bench.h"
#include "moo/dual_solver.h"
#include "moo/error.h"
#include "moo/interaction.h"
#include "moo/lowdisc.h"
#include "moo/oracle.h"
#include "moo/primal_recovery.h"
#include "moo/problem_model.h"
#include "moo/qcqp.h"
#include "moo/serialization.h"

namespace moo {
namespace {

struct BuildArgs {
  std::string in;
  bool check = false;
  // Random generation when --in is absent.
  int users = 2;
  int items = 3;
  int slots = 2;
  double gamma = 1.0;
  double threshold_scale = 1.0;
  std::uint64_t seed = 1;
  std::string out;
};

int RunBuild(const BuildArgs& args) {
  RandomProblemOptions random;
  random.num_users = args.users;
  random.num_items = args.items;
  random.num_slots = args.slots;
  random.gamma = args.gamma;
  random.threshold_scale = args.threshold_scale;
  const RankingProblem problem = args.in.empty() ? RandomProblem(random, args.seed)
                                                 : ProblemFromJson(ReadJsonFile(args.in));
  if (!args.out.empty()) WriteJsonFile(args.out, ProblemToJson(problem));
  if (args.check || args.out.empty()) {
    const StackedSystem system = StackedSystem::Assemble(problem);
    std::printf("users %d items %d slots %d\n", problem.num_users(), problem.num_items(),
                problem.num_slots());
    std::printf("primal dimension %d dual dimension %d\n", system.primal_dimension(),
                system.dual_dimension());
    if (system.dual_dimension() <= 20000) {
      const SparseMatrix m = system.ExplicitM();
      std::printf("nnz(M) %lld psi(M) %.17g\n", static_cast<long long>(CountNonzeros(m)),
                  SparsityRatio(m));
    } else {
      std::printf("psi(M) skipped: dual dimension above 20000\n");
    }
  }
  return 0;
}

struct DualArgs {
  std::string in;
  std::string out;
  double tolerance = 1e-8;
  std::string algorithm = "pg";
  int max_iterations = 0;
};

int RunDual(const DualArgs& args) {
  const RankingProblem problem = ProblemFromJson(ReadJsonFile(args.in));
  const StackedSystem system = StackedSystem::Assemble(problem);
  DualSolverOptions options;
  options.tolerance = args.tolerance;
  options.max_iterations = args.max_iterations;
  options.algorithm =
      args.algorithm == "admm" ? DualAlgorithm::kRelaxedAdmm : DualAlgorithm::kProjectedGradient;
  const DualSolution dual = SolveDual(system, problem.click_prob(), options);
  std::printf("converged %s iterations %d residual %.3g mu0 %.10g mu1 %.10g (%.3fs)\n",
              dual.converged ? "yes" : "no", dual.iterations, dual.primal_residual, dual.mu0,
              dual.mu1, dual.wall_seconds);
  if (!args.out.empty()) WriteJsonFile(args.out, DualToJson(dual));
  return dual.converged ? 0 : 2;
}

struct ServeArgs {
  std::string in;
  std::string dual;
  std::string plan;
  std::string distribution;
  std::uint64_t seed = 7;
  int resample_cap = kDefaultResampleCap;
  bool allow_unconverged = false;
};

int RunServe(const ServeArgs& args) {
  const RankingProblem problem = ProblemFromJson(ReadJsonFile(args.in));
  const DualSolution dual = DualFromJson(ReadJsonFile(args.dual));
  const RecoveryResult recovered =
      RecoverPrimal(dual, problem, {.allow_unconverged = args.allow_unconverged});
  if (recovered.from_unconverged_dual) {
    std::fprintf(stderr, "warning: dual solution is not converged\n");
  }
  std::printf("objective %.12g max kkt residual %.3g\n",
              problem.Objective(recovered.distribution.x), recovered.max_kkt_residual);
  if (!args.distribution.empty()) {
    Json out = {{"n", problem.num_users()},
                {"J", problem.num_items()},
                {"K", problem.num_slots()},
                {"x", std::vector<double>(recovered.distribution.x.data(),
                                          recovered.distribution.x.data() +
                                              recovered.distribution.x.size())}};
    WriteJsonFile(args.distribution, out);
  }
  if (!args.plan.empty()) {
    const ServingPlan plan =
        SampleServingPlan(recovered.distribution, args.seed, args.resample_cap);
    WritePlanCsv(args.plan, plan);
    if (!plan.fallback_users.empty()) {
      std::printf("resample cap reached for %zu users\n", plan.fallback_users.size());
    }
  }
  return 0;
}

struct InteractArgs {
  std::string in;
  std::string model;
  double epsilon = 1e-3;
  bool check_pd = false;
};

int RunInteract(const InteractArgs& args) {
  Json model_json = ReadJsonFile(args.model);
  if (!args.in.empty() && !model_json.contains("blocks")) {
    // One block shared by every user.
    const int users = ProblemFromJson(ReadJsonFile(args.in)).num_users();
    Json shared = {{"blocks", Json::array()}};
    for (int i = 0; i < users; ++i) shared["blocks"].push_back(model_json);
    if (model_json.contains("epsilon")) shared["epsilon"] = model_json["epsilon"];
    model_json = std::move(shared);
  }
  const InteractionModel model = InteractionModelFromJson(model_json, args.epsilon);
  if (!args.in.empty()) {
    const RankingProblem problem = ProblemFromJson(ReadJsonFile(args.in));
    if (model.dimension() != problem.dimension()) {
      throw InvalidArgumentError("model dimension " + std::to_string(model.dimension()) +
                                 " does not match problem dimension " +
                                 std::to_string(problem.dimension()));
    }
  }
  std::printf("blocks %d dimension %d epsilon %g\n", model.num_blocks(), model.dimension(),
              model.epsilon());
  if (args.check_pd) {
    for (int b = 0; b < model.num_blocks(); ++b) {
      const RepairResult& r = model.repairs()[b];
      std::printf("block %d min eigenvalue %.12g -> %.12g %s\n", b, r.min_eigenvalue_before,
                  r.min_eigenvalue_after, r.repaired ? "repaired" : "positive definite");
    }
  }
  std::printf("any repaired %s\n", model.any_repaired() ? "yes" : "no");
  return 0;
}

struct PointsArgs {
  std::string ellipsoid;
  int count = 1024;
  std::string sampler = "net";
  std::uint64_t seed = 0;
  std::string out;
};

int RunPoints(const PointsArgs& args) {
  const Ellipsoid ellipsoid = EllipsoidFromJson(ReadJsonFile(args.ellipsoid));
  BoundaryOptions options;
  options.sampler = ParseBoundarySampler(args.sampler);
  options.seed = args.seed;
  const PointSet points = GenerateBoundaryPoints(ellipsoid, args.count, options);
  if (args.out.empty()) {
    std::printf("%d points in dimension %d\n", points.size(), points.dimension());
  } else {
    WritePointsCsv(args.out, points.points);
  }
  return 0;
}

struct EnergyArgs {
  std::string in;
  double exponent = 2.0;
};

int RunEnergy(const EnergyArgs& args) {
  std::printf("%.17g\n", RieszEnergy(ReadPointsCsv(args.in), args.exponent));
  return 0;
}

struct QcqpArgs {
  std::string in;
  int count = 0;
  std::string sampler = "net";
  std::uint64_t seed = 0;
  std::string oracle = "auto";
  std::vector<int> schedule;
  bool allow_unbounded_cover = false;
  bool polish = true;
  std::string out;
};

int RunQcqp(const QcqpArgs& args) {
  const QcqpInstance instance = QcqpFromJson(ReadJsonFile(args.in));
  OracleOptions oracle_options;
  const bool use_oracle =
      args.oracle == "on" ||
      (args.oracle == "auto" && instance.dimension() <= oracle_options.max_dimension);
  OracleSolution oracle;
  if (use_oracle) oracle = ExactQcqp(instance, oracle_options);

  LinearizeOptions linearize;
  linearize.boundary.sampler = ParseBoundarySampler(args.sampler);
  linearize.boundary.seed = args.seed;
  linearize.allow_unbounded_cover = args.allow_unbounded_cover;
  SolveOptions solve;
  solve.polish = args.polish;
  SolveReport report;
  if (args.schedule.empty()) {
    const int count = args.count > 0 ? args.count : DefaultNumPoints(instance.dimension());
    report = SolveLinearized(Linearize(instance, count, linearize), solve);
  } else {
    report = Refine(instance, args.schedule, linearize, solve, use_oracle ? &oracle.x : nullptr);
  }
  std::printf("N %d objective %.12g violation %.3g solver %s converged %s\n", report.num_points,
              report.objective, report.constraint_violation, report.solver.c_str(),
              report.converged ? "yes" : "no");
  Json out = {{"linearized", SolveReportToJson(report)}};
  if (use_oracle) {
    std::printf("oracle objective %.12g relative error %.3g\n", oracle.objective,
                (report.x - oracle.x).norm() / oracle.x.norm());
    out["oracle"] = OracleSolutionToJson(oracle);
    const CertificateBundle c = CheckCertificates(instance, report, oracle.x, oracle.objective);
    out["certificates"] = {{"objectives_match", c.objectives_match},
                           {"solutions_match", c.solutions_match},
                           {"outside_u", c.outside_u},
                           {"oracle_on_boundary", c.oracle_on_boundary},
                           {"slope_available", c.slope_available},
                           {"error_slope", c.error_slope}};
  }
  if (!args.out.empty()) WriteJsonFile(args.out, out);
  return 0;
}

struct BenchArgs {
  std::string config;
  std::string out = "results";
};

int RunBench(const BenchArgs& args) {
  RunSuite(BenchConfigFromJson(ReadJsonFile(args.config)), args.out);
  std::printf("wrote %s/results.csv and %s/summary.csv\n", args.out.c_str(), args.out.c_str());
  return 0;
}

}  // namespace
}  // namespace moo

int main(int argc, char** argv) {
  using namespace moo;
  CLI::App app{"Constrained multi-slot ranking and QCQP linearization"};
  app.require_subcommand(1);

  BuildArgs build;
  CLI::App* build_cmd = app.add_subcommand("build", "Validate or generate a ranking problem");
  build_cmd->add_option("--in", build.in, "Problem JSON")->check(CLI::ExistingFile);
  build_cmd->add_flag("--check", build.check, "Print dimensions and the sparsity ratio of M");
  build_cmd->add_option("--users", build.users, "Random problem: users");
  build_cmd->add_option("--items", build.items, "Random problem: items");
  build_cmd->add_option("--slots", build.slots, "Random problem: slots");
  build_cmd->add_option("--gamma", build.gamma, "Random problem: regularization");
  build_cmd->add_option("--threshold-scale", build.threshold_scale,
                        "Random problem: threshold scale (<= 1 stays feasible)");
  build_cmd->add_option("--seed", build.seed, "Random problem: seed");
  build_cmd->add_option("--out", build.out, "Write the problem JSON here");

  DualArgs dual;
  CLI::App* dual_cmd = app.add_subcommand("dual", "Solve the dual QP");
  dual_cmd->add_option("--in", dual.in, "Problem JSON")->required()->check(CLI::ExistingFile);
  dual_cmd->add_option("--tol", dual.tolerance, "Stationarity tolerance");
  dual_cmd->add_option("--algorithm", dual.algorithm, "pg or admm")
      ->check(CLI::IsMember({"pg", "admm"}));
  dual_cmd->add_option("--max-iter", dual.max_iterations, "Iteration cap (0 = automatic)");
  dual_cmd->add_option("--out", dual.out, "Dual JSON output");

  ServeArgs serve;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Recover the primal and sample a plan");
  serve_cmd->add_option("--in", serve.in, "Problem JSON")->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--dual", serve.dual, "Dual JSON")->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--seed", serve.seed, "Plan seed");
  serve_cmd->add_option("--plan", serve.plan, "Plan CSV output (user,slot,item)");
  serve_cmd->add_option("--distribution", serve.distribution, "Serving distribution JSON output");
  serve_cmd->add_option("--resample-cap", serve.resample_cap, "Redraws per slot before fallback");
  serve_cmd->add_flag("--allow-unconverged", serve.allow_unconverged,
                      "Accept a non-converged dual");

  InteractArgs interact;
  CLI::App* interact_cmd = app.add_subcommand("interact", "Load and repair an interaction model");
  interact_cmd->add_option("--in", interact.in, "Problem JSON (dimension check)")
      ->check(CLI::ExistingFile);
  interact_cmd->add_option("--model", interact.model, "Interaction JSON")
      ->required()
      ->check(CLI::ExistingFile);
  interact_cmd->add_option("--epsilon", interact.epsilon, "Repair slack if the file has none");
  interact_cmd->add_flag("--check-pd", interact.check_pd, "Report eigenvalues per block");

  PointsArgs points;
  CLI::App* points_cmd = app.add_subcommand("points", "Boundary points on an ellipsoid");
  points_cmd->add_option("--ellipsoid", points.ellipsoid, "Ellipsoid JSON")
      ->required()
      ->check(CLI::ExistingFile);
  points_cmd->add_option("--n", points.count, "Number of points");
  points_cmd->add_option("--sampler", points.sampler, "net, cube or sphere")
      ->check(CLI::IsMember({"net", "cube", "sphere"}));
  points_cmd->add_option("--seed", points.seed, "Seed for random samplers");
  points_cmd->add_option("--out", points.out, "CSV output");

  EnergyArgs energy;
  CLI::App* energy_cmd = app.add_subcommand("energy", "Riesz energy of a point CSV");
  energy_cmd->add_option("--in", energy.in, "Points CSV")->required()->check(CLI::ExistingFile);
  energy_cmd->add_option("--exp", energy.exponent, "Riesz exponent");

  QcqpArgs qcqp;
  CLI::App* qcqp_cmd = app.add_subcommand("qcqp", "Solve a QCQP by tangent-plane linearization");
  qcqp_cmd->add_option("--in", qcqp.in, "QCQP JSON")->required()->check(CLI::ExistingFile);
  qcqp_cmd->add_option("--n", qcqp.count, "Number of tangent points (0 = automatic)");
  qcqp_cmd->add_option("--sampler", qcqp.sampler, "net, cube or sphere")
      ->check(CLI::IsMember({"net", "cube", "sphere"}));
  qcqp_cmd->add_option("--seed", qcqp.seed, "Seed for random samplers");
  qcqp_cmd->add_option("--oracle", qcqp.oracle, "auto, on or off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  qcqp_cmd->add_option("--schedule", qcqp.schedule, "Increasing point counts for a trace");
  qcqp_cmd->add_flag("--allow-unbounded-cover", qcqp.allow_unbounded_cover,
                     "Skip the bounded-cover check");
  qcqp_cmd->add_flag("!--no-polish", qcqp.polish, "Skip the final projection onto S");
  qcqp_cmd->add_option("--out", qcqp.out, "Report JSON output");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run the experiment suite");
  bench_cmd->add_option("--config", bench.config, "Bench JSON")
      ->required()
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("--out", bench.out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build_cmd) return RunBuild(build);
    if (*dual_cmd) return RunDual(dual);
    if (*serve_cmd) return RunServe(serve);
    if (*interact_cmd) return RunInteract(interact);
    if (*points_cmd) return RunPoints(points);
    if (*energy_cmd) return RunEnergy(energy);
    if (*qcqp_cmd) return RunQcqp(qcqp);
    if (*bench_cmd) return RunBench(bench);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "moo: %s\n", e.what());
    return 1;
  }
  return 1;
}
