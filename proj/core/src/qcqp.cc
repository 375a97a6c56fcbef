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

#include "moo/qcqp.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/QR>

#include "moo/error.h"
#include "moo/oracle.h"

namespace moo {
namespace {

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void QcqpInstance::Validate() const {
  const int n = dimension();
  if (n == 0) throw InvalidArgumentError("QcqpInstance: empty objective");
  if (objective_center.size() != n) {
    throw InvalidArgumentError("QcqpInstance: objective center has wrong dimension");
  }
  if (constraint.dimension() != n) {
    throw InvalidArgumentError("QcqpInstance: ellipsoid has wrong dimension");
  }
  if (eq_rhs.size() > 0 && (eq_matrix.rows() != eq_rhs.size() || eq_matrix.cols() != n)) {
    throw InvalidArgumentError("QcqpInstance: equality block has wrong shape");
  }
  if (ineq_rhs.size() > 0 &&
      (ineq_matrix.rows() != ineq_rhs.size() || ineq_matrix.cols() != n)) {
    throw InvalidArgumentError("QcqpInstance: inequality block has wrong shape");
  }
  if ((lower.size() != 0 && lower.size() != n) || (upper.size() != 0 && upper.size() != n)) {
    throw InvalidArgumentError("QcqpInstance: bounds have wrong dimension");
  }
  if (lower.size() == n && upper.size() == n && (lower.array() > upper.array()).any()) {
    throw InvalidArgumentError("QcqpInstance: lower bound exceeds upper bound");
  }
}

double QcqpInstance::Objective(const Eigen::VectorXd& x) const {
  return objective.QuadraticForm(x - objective_center);
}

double QcqpInstance::LinearViolation(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  if (eq_rhs.size() > 0) worst = (eq_matrix * x - eq_rhs).cwiseAbs().maxCoeff();
  if (ineq_rhs.size() > 0) worst = std::max(worst, (ineq_matrix * x - ineq_rhs).maxCoeff());
  if (lower.size() > 0) worst = std::max(worst, (lower - x).maxCoeff());
  if (upper.size() > 0) worst = std::max(worst, (x - upper).maxCoeff());
  return std::max(0.0, worst);
}

bool QcqpInstance::IsFeasible(const Eigen::VectorXd& x, double tolerance) const {
  return LinearViolation(x) <= tolerance &&
         constraint.Violation(x) <= tolerance * std::max(1.0, constraint.level());
}

TangentRows BuildTangentRows(const Ellipsoid& ellipsoid, const Eigen::MatrixXd& points) {
  if (points.cols() != ellipsoid.dimension()) {
    throw InvalidArgumentError("BuildTangentRows: dimension mismatch");
  }
  TangentRows out;
  out.normals = points;
  out.normals.rowwise() -= ellipsoid.center().transpose();
  if (ellipsoid.shape().is_diagonal()) {
    out.normals *= ellipsoid.shape().Diagonal().asDiagonal();
  } else {
    out.normals = out.normals * ellipsoid.shape().ToDense();
  }
  out.rhs = out.normals * ellipsoid.center();
  out.rhs.array() += ellipsoid.level();
  return out;
}

CoverCertificate CertifyCover(const Eigen::MatrixXd& points, const Ellipsoid& ellipsoid) {
  const int n = ellipsoid.dimension();
  const int count = static_cast<int>(points.rows());
  CoverCertificate out;
  if (count == 0) return out;
  Eigen::MatrixXd normals = BuildTangentRows(ellipsoid, points).normals;
  for (int j = 0; j < count; ++j) {
    const double norm = normals.row(j).norm();
    if (norm > 0.0) normals.row(j) /= norm;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(normals);
  qr.setThreshold(1e-10);
  out.rank = static_cast<int>(qr.rank());
  if (count <= n || out.rank < n) {
    out.worst_residual = 1.0;
    return out;
  }
  // z = 1 + w with w >= 0 and N'z = 0.
  const Eigen::MatrixXd nt = normals.transpose();
  const Eigen::VectorXd offset = nt * Eigen::VectorXd::Ones(count);
  const Eigen::VectorXd w = SolveNnls(nt, -offset);
  // Scale-free: |N'z| / |z| with unit normals.
  out.worst_residual = (nt * w + offset).norm() / (w.array() + 1.0).matrix().norm();
  out.bounded = out.worst_residual <= 1e-9;
  return out;
}

int DefaultNumPoints(int dimension) {
  if (dimension <= 0) throw InvalidArgumentError("DefaultNumPoints: dimension must be positive");
  std::int64_t power = 1;
  while (power < 10LL * dimension) power *= 2;
  return static_cast<int>(std::max<std::int64_t>(1024, power));
}

LinearizedQp Linearize(const QcqpInstance& instance, int num_points,
                       const LinearizeOptions& options) {
  instance.Validate();
  const int n = instance.dimension();
  if (num_points < n + 1 && !options.allow_unbounded_cover) {
    throw InvalidArgumentError("Linearize: " + std::to_string(num_points) +
                               " tangent points cannot bound a cover in dimension " +
                               std::to_string(n) + " (need at least n + 1)");
  }
  return LinearizeWithPoints(
      instance, GenerateBoundaryPoints(instance.constraint, num_points, options.boundary),
      options);
}

LinearizedQp LinearizeWithPoints(const QcqpInstance& instance, PointSet points,
                                 const LinearizeOptions& options) {
  instance.Validate();
  const int n = instance.dimension();
  if (points.dimension() != n || points.size() == 0) {
    throw InvalidArgumentError("LinearizeWithPoints: points have the wrong dimension");
  }
  if (points.size() < n + 1 && !options.allow_unbounded_cover) {
    throw InvalidArgumentError("Linearize: " + std::to_string(points.size()) +
                               " tangent points cannot bound a cover in dimension " +
                               std::to_string(n) + " (need at least n + 1)");
  }
  LinearizedQp out;
  out.instance = instance;
  out.tangents = BuildTangentRows(instance.constraint, points.points);
  if (!options.allow_unbounded_cover || n <= 200) {
    out.cover = CertifyCover(points.points, instance.constraint);
    out.cover_checked = true;
    if (!out.cover.bounded && !options.allow_unbounded_cover) {
      throw InvalidArgumentError("Linearize: unbounded cover (tangent normals do not "
                                 "positively span the space)");
    }
  }
  const std::int64_t entries = static_cast<std::int64_t>(points.size()) * n;
  if (entries > options.max_stored_point_entries) {
    points.points.resize(0, n);
  }
  out.points = std::move(points);
  return out;
}

SolveReport SolveLinearized(const LinearizedQp& problem, const SolveOptions& options) {
  const QcqpInstance& inst = problem.instance;
  const int n = inst.dimension();
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  report.num_points = problem.num_points();

  if (n <= options.dense_dimension_limit) {
    const Eigen::MatrixXd a = inst.objective.ToDense();
    QpProblem qp = LinearRowsQp(inst, 2.0 * a, -2.0 * (a * inst.objective_center));
    const int base_rows = static_cast<int>(qp.ineq_rhs.size());
    const int tangent_rows = problem.num_points();
    qp.ineq_matrix.conservativeResize(base_rows + tangent_rows, n);
    qp.ineq_rhs.conservativeResize(base_rows + tangent_rows);
    qp.ineq_matrix.bottomRows(tangent_rows) = problem.tangents.normals;
    qp.ineq_rhs.tail(tangent_rows) = problem.tangents.rhs;
    const QpSolution solution = SolveDenseQp(qp);
    report.x = solution.x;
    report.kkt = solution.kkt;
    report.iterations = solution.iterations;
    report.converged = true;
    report.solver = "dense-active-set";
  } else {
    if (!inst.objective.is_diagonal() || inst.num_linear_rows() > 0) {
      throw InvalidArgumentError(
          "SolveLinearized: instances above the dense limit need a diagonal objective "
          "and bounds as the only linear constraints");
    }
    DiagonalQpProblem qp;
    qp.diagonal = 2.0 * inst.objective.Diagonal();
    qp.linear = -qp.diagonal.cwiseProduct(inst.objective_center);
    qp.rhs = problem.tangents.rhs;
    const double inf = std::numeric_limits<double>::infinity();
    qp.lower = inst.lower.size() > 0 ? inst.lower : Eigen::VectorXd::Constant(n, -inf);
    qp.upper = inst.upper.size() > 0 ? inst.upper : Eigen::VectorXd::Constant(n, inf);
    DiagonalQpOptions qp_options;
    qp_options.tolerance = options.tolerance;
    qp_options.max_iterations = options.max_iterations;
    const DiagonalQpSolution solution = SolveDiagonalQp(qp, problem.tangents.normals, qp_options);
    report.x = solution.x;
    report.kkt.primal_feasibility = solution.primal_feasibility;
    report.kkt.complementarity = solution.complementarity;
    report.iterations = solution.iterations;
    report.converged = solution.converged;
    report.solver = "diagonal-dual-spg";
  }
  report.objective = inst.Objective(report.x);
  report.constraint_violation = inst.constraint.Violation(report.x);
  report.in_s = report.constraint_violation <= 1e-9 * std::max(1.0, inst.constraint.level());
  if (options.polish && n <= options.polish_dimension_limit) {
    QcqpInstance projection = inst;
    projection.objective = SpdMatrix::Identity(n);
    projection.objective_center = report.x;
    const OracleSolution polished = ExactQcqp(projection);
    report.polished = true;
    report.polished_x = polished.x;
    report.polished_objective = inst.Objective(polished.x);
  }
  report.solve_seconds = Seconds(start);
  return report;
}

SolveReport Refine(const QcqpInstance& instance, const std::vector<int>& schedule,
                   const LinearizeOptions& linearize_options, const SolveOptions& solve_options,
                   const Eigen::VectorXd* reference) {
  if (schedule.empty()) throw InvalidArgumentError("Refine: empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i] <= schedule[i - 1]) {
      throw InvalidArgumentError("Refine: schedule must be strictly increasing");
    }
  }
  if (reference != nullptr && reference->size() != instance.dimension()) {
    throw InvalidArgumentError("Refine: reference has the wrong dimension");
  }
  const PointSet all =
      GenerateBoundaryPoints(instance.constraint, schedule.back(), linearize_options.boundary);
  std::vector<TracePoint> trace;
  SolveReport last;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    PointSet prefix = all;
    prefix.points = all.points.topRows(schedule[i]);
    const LinearizedQp lin = LinearizeWithPoints(instance, std::move(prefix), linearize_options);
    SolveOptions options = solve_options;
    options.polish = solve_options.polish && i + 1 == schedule.size();
    last = SolveLinearized(lin, options);
    TracePoint point;
    point.num_points = schedule[i];
    point.objective = last.objective;
    point.constraint_violation = last.constraint_violation;
    if (reference != nullptr) {
      point.error = (last.x - *reference).norm();
      const double norm = reference->norm();
      point.relative_error = norm > 0.0 ? point.error / norm : point.error;
    } else {
      point.error = point.relative_error = std::numeric_limits<double>::quiet_NaN();
    }
    trace.push_back(point);
  }
  last.trace = std::move(trace);
  return last;
}

CertificateBundle CheckCertificates(const QcqpInstance& instance, const SolveReport& report,
                                    const Eigen::VectorXd& oracle_x, double oracle_objective) {
  if (oracle_x.size() != instance.dimension() || report.x.size() != instance.dimension()) {
    throw InvalidArgumentError("CheckCertificates: oracle solution has the wrong dimension");
  }
  CertificateBundle out;
  out.objectives_match = std::abs(report.objective - oracle_objective) <= 1e-8;
  out.solutions_match = (report.x - oracle_x).cwiseAbs().maxCoeff() <= 1e-6;
  out.equal_objective_check = !out.objectives_match || out.solutions_match;
  out.outside_u = !instance.IsFeasible(report.x, 1e-9);
  out.oracle_on_boundary = std::abs(instance.constraint.Violation(oracle_x)) <=
                           1e-8 * std::max(1.0, instance.constraint.level());
  out.boundary_check = !out.outside_u || out.oracle_on_boundary;

  std::vector<double> log_n, log_err;
  for (const TracePoint& p : report.trace) {
    if (std::isfinite(p.error) && p.error > 0.0) {
      log_n.push_back(std::log(static_cast<double>(p.num_points)));
      log_err.push_back(std::log(p.error));
    }
  }
  if (log_n.size() >= 2) {
    const int k = static_cast<int>(log_n.size());
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < k; ++i) {
      mx += log_n[i] / k;
      my += log_err[i] / k;
    }
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < k; ++i) {
      sxx += (log_n[i] - mx) * (log_n[i] - mx);
      sxy += (log_n[i] - mx) * (log_err[i] - my);
    }
    if (sxx > 0.0) {
      out.slope_available = true;
      out.error_slope = sxy / sxx;
    }
  }
  return out;
}

}  // namespace moo
