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

// Convex quadratic programming kernels shared by the projection, oracle and
// linearizer code:
//   minimize    0.5 x'Hx + g'x
//   subject to  E x = e,  C x <= c.

#ifndef MOO_QP_H_
#define MOO_QP_H_

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace moo {

struct QpProblem {
  Eigen::MatrixXd hessian;  // symmetric positive definite
  Eigen::VectorXd linear;
  Eigen::MatrixXd eq_matrix;  // 0 rows when there are no equalities
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ineq_matrix;  // 0 rows when there are no inequalities
  Eigen::VectorXd ineq_rhs;

  int dimension() const { return static_cast<int>(linear.size()); }
  // Fills empty constraint blocks with correctly shaped zero-row matrices.
  void Normalize();
};

// Absolute KKT residuals (infinity norms) of a primal-dual pair with
// multipliers for H x + g + E'nu + C'lambda = 0.
struct KktResiduals {
  double stationarity = 0.0;
  double primal_feasibility = 0.0;
  double dual_feasibility = 0.0;
  double complementarity = 0.0;

  double Max() const;
};

struct QpSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd eq_multipliers;
  Eigen::VectorXd ineq_multipliers;  // >= 0
  std::vector<int> active_inequalities;
  double objective = 0.0;
  int iterations = 0;
  KktResiduals kkt;
};

KktResiduals ComputeKkt(const QpProblem& problem, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& eq_multipliers,
                        const Eigen::VectorXd& ineq_multipliers);

// Dual active-set method of Goldfarb and Idnani with Givens updates of the
// factorization. Exact on termination up to rounding. Throws
// InvalidArgumentError on shape errors, NumericalError if H is not positive
// definite, InfeasibleError if the constraints are inconsistent.
QpSolution SolveDenseQp(const QpProblem& problem);

// Separable problem with a dense row block, for instances too large for the
// dense solver:
//   minimize    0.5 x'Dx + g'x
//   subject to  G x <= h,  lower <= x <= upper,
// with D > 0 diagonal. Bounds may be infinite.
struct DiagonalQpProblem {
  Eigen::VectorXd diagonal;
  Eigen::VectorXd linear;
  Eigen::VectorXd rhs;  // h; G is passed separately to avoid copies
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct DiagonalQpOptions {
  // Target for max(primal infeasibility, |complementarity|), scaled by
  // max(1, |h|_inf).
  double tolerance = 1e-9;
  int max_iterations = 100000;
};

struct DiagonalQpSolution {
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;  // for G x <= h
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  // Box multipliers are implied, so stationarity is exact; these are the
  // remaining residuals.
  double primal_feasibility = 0.0;
  double complementarity = 0.0;
};

// Spectral projected gradient on the dual of the row block; the inner
// minimization over the box is closed-form.
DiagonalQpSolution SolveDiagonalQp(const DiagonalQpProblem& problem,
                                   const Eigen::MatrixXd& rows,
                                   const DiagonalQpOptions& options = {});

// Lawson-Hanson nonnegative least squares: argmin |A z - b| over z >= 0.
Eigen::VectorXd SolveNnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                          double tolerance = 1e-12);

}  // namespace moo

#endif  // MOO_QP_H_
