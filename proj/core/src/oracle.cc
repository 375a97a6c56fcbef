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

#include "moo/oracle.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "moo/error.h"

namespace moo {

QpProblem LinearRowsQp(const QcqpInstance& instance, const Eigen::MatrixXd& hessian,
                       const Eigen::VectorXd& linear) {
  const int n = instance.dimension();
  QpProblem qp;
  qp.hessian = hessian;
  qp.linear = linear;
  qp.eq_matrix = instance.eq_rhs.size() > 0 ? instance.eq_matrix : Eigen::MatrixXd(0, n);
  qp.eq_rhs = instance.eq_rhs;
  int bound_rows = 0;
  for (int i = 0; i < instance.lower.size(); ++i) bound_rows += std::isfinite(instance.lower[i]);
  for (int i = 0; i < instance.upper.size(); ++i) bound_rows += std::isfinite(instance.upper[i]);
  const int rows = static_cast<int>(instance.ineq_rhs.size());
  qp.ineq_matrix = Eigen::MatrixXd::Zero(rows + bound_rows, n);
  qp.ineq_rhs = Eigen::VectorXd::Zero(rows + bound_rows);
  if (rows > 0) {
    qp.ineq_matrix.topRows(rows) = instance.ineq_matrix;
    qp.ineq_rhs.head(rows) = instance.ineq_rhs;
  }
  int r = rows;
  for (int i = 0; i < instance.upper.size(); ++i) {
    if (!std::isfinite(instance.upper[i])) continue;
    qp.ineq_matrix(r, i) = 1.0;
    qp.ineq_rhs[r++] = instance.upper[i];
  }
  for (int i = 0; i < instance.lower.size(); ++i) {
    if (!std::isfinite(instance.lower[i])) continue;
    qp.ineq_matrix(r, i) = -1.0;
    qp.ineq_rhs[r++] = -instance.lower[i];
  }
  qp.Normalize();
  return qp;
}

OracleSolution ExactQcqp(const QcqpInstance& instance, const OracleOptions& options) {
  instance.Validate();
  const int n = instance.dimension();
  if (n > options.max_dimension) {
    throw InvalidArgumentError("ExactQcqp: dimension " + std::to_string(n) +
                               " exceeds the oracle cap " +
                               std::to_string(options.max_dimension));
  }
  const Eigen::MatrixXd a = instance.objective.ToDense();
  const Eigen::MatrixXd b = instance.constraint.shape().ToDense();
  const Eigen::VectorXd& a_center = instance.objective_center;
  const Eigen::VectorXd& b_center = instance.constraint.center();
  const double level = instance.constraint.level();

  OracleSolution out;
  out.method = "multiplier-bisection";

  // Feasibility: the smallest value of the quadratic form over the linear set.
  {
    QpSolution closest = SolveDenseQp(LinearRowsQp(instance, 2.0 * b, -2.0 * (b * b_center)));
    ++out.inner_solves;
    if (instance.constraint.Violation(closest.x) > options.slack_tolerance * std::max(1.0, level)) {
      throw InfeasibleError("ExactQcqp: the ellipsoid does not meet the linear constraints");
    }
  }

  auto solve = [&](double lambda) {
    ++out.inner_solves;
    return SolveDenseQp(
        LinearRowsQp(instance, 2.0 * (a + lambda * b), -2.0 * (a * a_center + lambda * (b * b_center))));
  };
  auto slack_of = [&](const QpSolution& s) { return instance.constraint.Violation(s.x); };
  const double tol = options.slack_tolerance * std::max(1.0, level);

  QpSolution best = solve(0.0);
  double lambda = 0.0;
  if (slack_of(best) > tol) {
    double lo = 0.0;
    double hi = 1.0;
    QpSolution hi_solution = solve(hi);
    while (slack_of(hi_solution) > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e15) throw NumericalError("ExactQcqp: multiplier bracket diverged");
      hi_solution = solve(hi);
    }
    for (int step = 0; step < options.max_bisection_steps; ++step) {
      const double slack = slack_of(hi_solution);
      if (std::abs(slack) <= tol && hi * std::abs(slack) <= tol) break;
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      QpSolution mid_solution = solve(mid);
      if (slack_of(mid_solution) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
        hi_solution = std::move(mid_solution);
      }
    }
    best = std::move(hi_solution);
    lambda = hi;
  }

  out.x = best.x;
  out.multiplier = lambda;
  out.objective = instance.Objective(best.x);
  // Inner multipliers already satisfy 2A(x-a) + 2 lambda B(x-b) + E'nu + C'mu = 0.
  out.kkt = best.kkt;
  const double slack = slack_of(best);
  out.kkt.primal_feasibility = std::max(out.kkt.primal_feasibility, std::max(0.0, slack));
  out.kkt.complementarity = std::max(out.kkt.complementarity, lambda * std::abs(slack));
  return out;
}

QpSolution SolveRankingPrimal(const RankingProblem& problem) {
  const int n = problem.num_users();
  const int jk = problem.slate_dimension();
  const int dim = problem.dimension();
  const LocalPolytope::DenseSystem local =
      LocalPolytope::Create(problem.num_items(), problem.num_slots()).Dense();
  const int local_eq = static_cast<int>(local.eq_rhs.size());
  const int local_ineq = static_cast<int>(local.ineq_rhs.size());

  QpProblem qp;
  qp.hessian = problem.gamma() * Eigen::MatrixXd::Identity(dim, dim);
  qp.linear = -problem.click_prob();
  qp.eq_matrix = Eigen::MatrixXd::Zero(n * local_eq, dim);
  qp.eq_rhs = Eigen::VectorXd::Zero(n * local_eq);
  qp.ineq_matrix = Eigen::MatrixXd::Zero(2 + n * local_ineq, dim);
  qp.ineq_rhs = Eigen::VectorXd::Zero(2 + n * local_ineq);
  qp.ineq_matrix.row(0) = -problem.dollar().transpose();
  qp.ineq_rhs[0] = -problem.revenue_threshold();
  qp.ineq_matrix.row(1) = -problem.impression_flag().transpose();
  qp.ineq_rhs[1] = -problem.impression_threshold();
  for (int i = 0; i < n; ++i) {
    qp.eq_matrix.block(i * local_eq, i * jk, local_eq, jk) = local.eq_matrix;
    qp.eq_rhs.segment(i * local_eq, local_eq) = local.eq_rhs;
    qp.ineq_matrix.block(2 + i * local_ineq, i * jk, local_ineq, jk) = local.ineq_matrix;
    qp.ineq_rhs.segment(2 + i * local_ineq, local_ineq) = local.ineq_rhs;
  }
  return SolveDenseQp(qp);
}

}  // namespace moo
