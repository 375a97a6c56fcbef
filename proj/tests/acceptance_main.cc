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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "moo/bench.h"
#include "moo/dual_solver.h"
#include "moo/interaction.h"
#include "moo/lowdisc.h"
#include "moo/oracle.h"
#include "moo/primal_recovery.h"
#include "moo/problem_model.h"
#include "moo/qcqp.h"
#include "moo/random.h"
#include "test_oracles.h"

namespace moo {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Format(const char* fmt, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), fmt, args...);
  return buffer;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Outcome SparsityLaw() {
  int checked = 0;
  for (int n : {1, 2, 4}) {
    for (int items : {2, 3, 5}) {
      for (int slots : {1, 2, 3}) {
        if (slots > items) continue;
        RandomProblemOptions options;
        options.num_users = n;
        options.num_items = items;
        options.num_slots = slots;
        options.sponsored = {0};
        options.impression = {0};
        const RankingProblem problem = RandomProblem(options, 100 + checked);
        const SparseMatrix m = StackedSystem::Assemble(problem).ExplicitM();
        const std::int64_t counted = CountNonzeros(m);
        const std::int64_t predicted = testing::ClosedFormDualNonzeros(n, items, slots, 2);
        const double dim = static_cast<double>(m.rows());
        if (counted != predicted ||
            SparsityRatio(m) != static_cast<double>(predicted) / (dim * dim)) {
          return {false, Format("n=%d J=%d K=%d counted %lld, closed form %lld", n, items, slots,
                                static_cast<long long>(counted),
                                static_cast<long long>(predicted))};
        }
        ++checked;
      }
    }
  }
  return {true, Format("%d grid points match exactly", checked)};
}

Outcome DualPrimalRoundTrip() {
  Rng dims(2024);
  double worst_coord = 0.0, worst_gap = 0.0;
  for (int t = 0; t < 50; ++t) {
    RandomProblemOptions options;
    options.num_users = 1 + dims.UniformInt(4);
    options.num_slots = 1 + dims.UniformInt(2);
    options.num_items = options.num_slots + dims.UniformInt(5 - options.num_slots);
    const RankingProblem problem = RandomProblem(options, t);
    DualSolverOptions dual_options;
    dual_options.tolerance = 1e-10;
    const DualSolution dual =
        SolveDual(StackedSystem::Assemble(problem), problem.click_prob(), dual_options);
    if (!dual.converged) return {false, Format("instance %d: dual did not converge", t)};
    const Eigen::VectorXd x = RecoverPrimal(dual, problem).distribution.x;
    const QpSolution direct = SolveRankingPrimal(problem);
    worst_coord = std::max(worst_coord, (x - direct.x).cwiseAbs().maxCoeff());
    worst_gap = std::max(worst_gap, std::abs(problem.Objective(x) - problem.Objective(direct.x)));
  }
  return {worst_coord <= 1e-6 && worst_gap <= 1e-8,
          Format("50 instances, max coordinate error %.3g, max objective gap %.3g", worst_coord,
                 worst_gap)};
}

ServingDistribution Replicate(const Eigen::VectorXd& slate, int items, int slots, int users) {
  ServingDistribution d;
  d.num_users = users;
  d.num_items = items;
  d.num_slots = slots;
  d.x.resize(static_cast<Eigen::Index>(slate.size()) * users);
  for (int i = 0; i < users; ++i) d.x.segment(i * slate.size(), slate.size()) = slate;
  return d;
}

Outcome ServingPlanLaw() {
  const int draws = 100000;
  RandomProblemOptions options;
  options.num_users = 1;
  options.num_items = 3;
  options.num_slots = 1;
  const RankingProblem problem = RandomProblem(options, 3);
  const Eigen::VectorXd slate =
      RecoverPrimal(SolveDual(StackedSystem::Assemble(problem), problem.click_prob()), problem)
          .distribution.x;
  const ServingPlan plan = SampleServingPlan(Replicate(slate, 3, 1, draws), 11);
  Eigen::VectorXd freq = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < draws; ++i) freq[plan.item(i, 0)] += 1.0 / draws;
  const double tv = 0.5 * (freq - slate).cwiseAbs().sum();

  // K = 2: marginal distortion of without-repeat sampling, reported only.
  options.num_slots = 2;
  const RankingProblem two = RandomProblem(options, 3);
  const Eigen::VectorXd slate2 =
      RecoverPrimal(SolveDual(StackedSystem::Assemble(two), two.click_prob()), two)
          .distribution.x;
  const ServingPlan plan2 = SampleServingPlan(Replicate(slate2, 3, 2, draws), 12);
  Eigen::VectorXd freq2 = Eigen::VectorXd::Zero(6);
  for (int i = 0; i < draws; ++i) {
    for (int k = 0; k < 2; ++k) freq2[plan2.item(i, k) * 2 + k] += 1.0 / draws;
  }
  double distortion = 0.0;
  for (int k = 0; k < 2; ++k) {
    double slot_tv = 0.0;
    for (int j = 0; j < 3; ++j) slot_tv += 0.5 * std::abs(freq2[j * 2 + k] - slate2[j * 2 + k]);
    distortion = std::max(distortion, slot_tv);
  }
  return {tv <= 0.01, Format("K=1 TV %.4f over %d draws; K=2 worst per-slot TV %.4f (reported)",
                             tv, draws, distortion)};
}

Outcome PositiveDefiniteRepair() {
  Rng rng(77);
  const double epsilon = 1e-3;
  double worst = std::numeric_limits<double>::infinity();
  double off_diagonal_change = 0.0;
  int repaired = 0;
  for (int t = 0; t < 100; ++t) {
    const int dim = 1 + rng.UniformInt(16);
    const Eigen::MatrixXd g = rng.NormalMatrix(dim, dim);
    const Eigen::MatrixXd q = 0.5 * (g + g.transpose());
    const RepairResult r = RepairPositiveDefinite(q, epsilon);
    repaired += r.repaired;
    worst = std::min(worst, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(r.matrix)
                                .eigenvalues()
                                .minCoeff());
    Eigen::MatrixXd diff = r.matrix - q;
    diff.diagonal().setZero();
    off_diagonal_change = std::max(off_diagonal_change, diff.cwiseAbs().maxCoeff());
  }
  return {worst >= epsilon - 1e-9 && off_diagonal_change == 0.0,
          Format("100 blocks (%d repaired), min eigenvalue %.6g, off-diagonal change %.3g",
                 repaired, worst, off_diagonal_change)};
}

Outcome NetProperty() {
  struct Case {
    int m, s;
    NetConstruction construction;
  };
  std::string detail;
  bool ok = true;
  for (const Case& c : {Case{4, 2, NetConstruction::kSobolPrefix},
                        Case{6, 2, NetConstruction::kSobolPrefix},
                        Case{4, 3, NetConstruction::kHammersley}}) {
    NetOptions options;
    options.construction = c.construction;
    const PointSet net = DigitalNet(c.m, c.s, options);
    const bool pass = net.t == 0 && testing::ElementaryBoxesBalanced(net.points, c.m, 0);
    ok = ok && pass;
    detail += Format("(%d,%d) %s t=%d %s; ", c.m, c.s, net.source.c_str(), net.t,
                     pass ? "ok" : "FAILED");
  }
  return {ok, detail};
}

Outcome MeasurePreservation() {
  Rng rng(606);
  const Eigen::MatrixXd g = rng.NormalMatrix(3, 3);
  const Ellipsoid e(SpdMatrix::Dense(g.transpose() * g + 0.5 * Eigen::MatrixXd::Identity(3, 3)),
                    rng.NormalVector(3), 0.5 + rng.Uniform());
  const PointSet boundary = MapToEllipsoid(MapToSphere(DigitalNet(10, 2)), e);
  // Pull the boundary points back with an independent inverse map.
  const Eigen::MatrixXd b = e.shape().ToDense();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  const Eigen::MatrixXd sqrt_b = eig.operatorSqrt();
  Eigen::MatrixXd u(boundary.size(), 3);
  for (int i = 0; i < boundary.size(); ++i) {
    u.row(i) = (sqrt_b * (boundary.points.row(i).transpose() - e.center()) /
                std::sqrt(e.level()))
                   .transpose();
  }
  double worst = 0.0;
  for (int c = 0; c < 200; ++c) {
    const Eigen::VectorXd axis = rng.UnitVector(3);
    const double h = rng.Uniform(-1.0, 1.0);
    const double frac = ((u * axis).array() >= h).cast<double>().mean();
    worst = std::max(worst, std::abs(frac - testing::CapAreaS2(h)));
  }
  return {worst <= 0.05, Format("N=1024, 200 caps, max deviation %.4f", worst)};
}

QcqpInstance Disk() {
  QcqpInstance instance;
  instance.objective = SpdMatrix::Identity(2);
  instance.objective_center = Eigen::Vector2d(2.0, 0.0);
  instance.constraint = Ellipsoid(SpdMatrix::Identity(2), Eigen::Vector2d::Zero(), 1.0);
  return instance;
}

Outcome LinearizerConvergence() {
  LinearizeOptions options;
  options.boundary.net.digital_shift = true;
  options.boundary.net.shift_seed = 1;
  const SolveReport report = Refine(Disk(), {16, 32, 64, 128, 256}, options);
  const double at16 = std::abs(report.trace.front().objective - 1.0);
  const double at256 = std::abs(report.trace.back().objective - 1.0);
  double worst_drop = 0.0;
  for (std::size_t i = 1; i < report.trace.size(); ++i) {
    worst_drop = std::max(worst_drop, report.trace[i - 1].objective - report.trace[i].objective);
  }
  return {at256 <= 0.02 && at256 < at16 && worst_drop <= 1e-9,
          Format("|f-1| %.3g at N=16, %.3g at N=256; largest objective drop %.3g", at16, at256,
                 worst_drop)};
}

struct SamplerRuns {
  std::vector<SamplerErrorRow> rows;
  double seconds = 0.0;
};

SamplerRuns RunSamplerGrid() {
  const auto start = std::chrono::steady_clock::now();
  SamplerRuns runs;
  for (int n : {5, 10, 20}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const QcqpInstance instance = GenerateSamplerInstance(n, seed);
      for (BoundarySampler sampler :
           {BoundarySampler::kNet, BoundarySampler::kCube, BoundarySampler::kSphere}) {
        runs.rows.push_back(RunSamplerCell(instance, n, seed, sampler, 0));
      }
    }
  }
  runs.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return runs;
}

Outcome OuterRelaxation(const SamplerRuns& runs) {
  double worst = -std::numeric_limits<double>::infinity();
  int count = 0;
  for (const SamplerErrorRow& row : runs.rows) {
    worst = std::max(worst, row.objective - row.oracle_objective);
    ++count;
  }
  const OracleSolution disk = ExactQcqp(Disk());
  for (int n : {16, 64, 256, 1024}) {
    worst = std::max(worst, SolveLinearized(Linearize(Disk(), n)).objective - disk.objective);
    ++count;
  }
  return {worst <= 1e-8,
          Format("%d paired solves, max f(x(N)) - f* = %.3g", count, worst)};
}

Outcome SamplerOrdering(const SamplerRuns& runs) {
  bool ok = true;
  std::string detail;
  for (int n : {5, 10, 20}) {
    std::vector<double> errors[3];
    for (const SamplerErrorRow& row : runs.rows) {
      if (row.n == n) errors[static_cast<int>(row.sampler)].push_back(row.relative_error);
    }
    const double net = Median(errors[0]), cube = Median(errors[1]), sphere = Median(errors[2]);
    const bool pass = net <= cube && net <= sphere;
    ok = ok && pass;
    detail += Format("n=%d net %.4f cube %.4f sphere %.4f%s; ", n, net, cube, sphere,
                     pass ? "" : " (out of order)");
  }
  detail += Format("%.0f s", runs.seconds);
  return {ok, detail};
}

Outcome InteractionNecessity() {
  std::vector<double> medians;
  std::string detail;
  for (int n : {5, 10, 20, 50}) {
    std::vector<double> errors;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      errors.push_back(RunInteractionCell(n, seed).relative_error);
    }
    medians.push_back(Median(errors));
    detail += Format("n=%d %.4g; ", n, medians.back());
  }
  bool ok = true;
  for (std::size_t i = 0; i < medians.size(); ++i) {
    ok = ok && medians[i] > 0.0;
    if (i > 0) ok = ok && medians[i] >= medians[i - 1];
  }
  return {ok, "median relative error " + detail};
}

Outcome CoverGate() {
  int rejected = 0, accepted = 0, total_small = 0, total_simplex = 0;
  for (int s : {2, 3, 5}) {
    for (int trial = 0; trial < 50; ++trial) {
      Rng rng(1000 * s + trial);
      const Eigen::MatrixXd g = rng.NormalMatrix(s, s);
      const Ellipsoid e(SpdMatrix::Dense(g.transpose() * g + Eigen::MatrixXd::Identity(s, s)),
                        rng.NormalVector(s), 0.5 + rng.Uniform());
      const int count = 1 + trial % s;
      Eigen::MatrixXd small(count, s);
      for (int i = 0; i < count; ++i) small.row(i) = e.FromSphere(rng.UnitVector(s)).transpose();
      rejected += !CertifyCover(small, e).bounded;
      ++total_small;
      const Eigen::MatrixXd simplex = testing::RegularSimplex(s, 5000 * s + trial);
      Eigen::MatrixXd on_boundary(s + 1, s);
      for (int i = 0; i <= s; ++i) {
        on_boundary.row(i) = e.FromSphere(simplex.row(i).transpose()).transpose();
      }
      accepted += CertifyCover(on_boundary, e).bounded;
      ++total_simplex;
    }
  }
  return {rejected == total_small && accepted == total_simplex,
          Format("rejected %d/%d small sets, accepted %d/%d simplices", rejected, total_small,
                 accepted, total_simplex)};
}

Outcome ScaleSmokeTest() {
  const auto start = std::chrono::steady_clock::now();
  const int n = 100000;
  Rng rng(9);
  Eigen::VectorXd a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = rng.Uniform(1.0, 2.0);
    b[i] = rng.Uniform(1.0, 2.0);
  }
  QcqpInstance instance;
  instance.objective = SpdMatrix::Diagonal(a);
  instance.objective_center = Eigen::VectorXd::Constant(n, 1000.0);
  instance.constraint = Ellipsoid(SpdMatrix::Diagonal(b), Eigen::VectorXd::Zero(n), 0.5 * n);

  // 1024 < n + 1 points cannot bound a cover on their own; the objective is
  // strongly convex, so the relaxation still has a unique minimizer.
  LinearizeOptions linearize;
  linearize.boundary.sampler = BoundarySampler::kSphere;
  linearize.boundary.seed = 1;
  linearize.allow_unbounded_cover = true;
  const LinearizedQp lin = Linearize(instance, 1024, linearize);

  DiagonalQpProblem qp;
  qp.diagonal = 2.0 * a;
  qp.linear = -qp.diagonal.cwiseProduct(instance.objective_center);
  qp.rhs = lin.tangents.rhs;
  qp.lower = Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity());
  qp.upper = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  DiagonalQpOptions options;
  options.tolerance = 1e-11;
  const DiagonalQpSolution s = SolveDiagonalQp(qp, lin.tangents.normals, options);

  // Residuals recomputed from (x, lambda).
  const Eigen::VectorXd row_values = lin.tangents.normals * s.x;
  const double stationarity =
      (qp.diagonal.cwiseProduct(s.x) + qp.linear + lin.tangents.normals.transpose() * s.multipliers)
          .cwiseAbs()
          .maxCoeff();
  const double primal = std::max(0.0, (row_values - qp.rhs).maxCoeff());
  const double dual = std::max(0.0, -s.multipliers.minCoeff());
  const double complementarity =
      s.multipliers.cwiseProduct(row_values - qp.rhs).cwiseAbs().maxCoeff();
  const double kkt = std::max({stationarity, primal, dual, complementarity});
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const int active = static_cast<int>((s.multipliers.array() > 0.0).count());
  return {s.converged && kkt <= 1e-6 && seconds <= 1800.0,
          Format("n=%d N=1024: KKT stat %.2g primal %.2g dual %.2g compl %.2g, %d iterations, "
                 "%d active rows, %.0f s",
                 n, stationarity, primal, dual, complementarity, s.iterations, active, seconds)};
}

}  // namespace
}  // namespace moo

int main() {
  using moo::Outcome;
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !outcome.pass;
    std::printf("[%s] %2d %-26s %s (%.1f s)\n", outcome.pass ? "PASS" : "FAIL", id, name,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  };
  report(1, "sparsity-law", moo::SparsityLaw);
  report(2, "dual-primal-round-trip", moo::DualPrimalRoundTrip);
  report(3, "serving-plan-law", moo::ServingPlanLaw);
  report(4, "pd-repair", moo::PositiveDefiniteRepair);
  report(5, "net-property", moo::NetProperty);
  report(6, "measure-preservation", moo::MeasurePreservation);
  report(7, "linearizer-convergence", moo::LinearizerConvergence);
  moo::SamplerRuns runs;
  bool have_runs = false;
  try {
    runs = moo::RunSamplerGrid();
    have_runs = true;
  } catch (const std::exception& e) {
    std::printf("sampler grid failed: %s\n", e.what());
  }
  report(8, "outer-relaxation-bound", [&] {
    return have_runs ? moo::OuterRelaxation(runs) : Outcome{false, "no sampler runs"};
  });
  report(9, "sampler-ordering", [&] {
    return have_runs ? moo::SamplerOrdering(runs) : Outcome{false, "no sampler runs"};
  });
  report(10, "interaction-necessity", moo::InteractionNecessity);
  report(11, "cover-gate", moo::CoverGate);
  report(12, "scale-smoke-test", moo::ScaleSmokeTest);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
