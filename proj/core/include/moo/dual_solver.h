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

// Solver for the nonnegative dual of the ranking problem,
//   minimize 0.5 y'My - q'y  subject to  y >= 0,
// with M = A'A / gamma applied matrix-free.

#ifndef MOO_DUAL_SOLVER_H_
#define MOO_DUAL_SOLVER_H_

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "moo/problem_model.h"

namespace moo {

enum class DualAlgorithm {
  // Projected gradient, Barzilai-Borwein steps, exact line search on the
  // projected segment, with conjugate-gradient steps on the current face
  // once its support settles. Monotone.
  kProjectedGradient,
  // Over-relaxed ADMM splitting y = z, z >= 0; the linear systems
  // (M + rho I) are solved by conjugate gradients.
  kRelaxedAdmm,
};

struct DualSolverOptions {
  DualAlgorithm algorithm = DualAlgorithm::kProjectedGradient;
  // Bound on |y - max(0, y - (My - q))|_inf.
  double tolerance = 1e-8;
  // 0 selects max(10000, 50 * dimension).
  int max_iterations = 0;
  // Projected gradient: recompute the gradient from scratch this often.
  int refresh_interval = 50;
  // ADMM parameters.
  double relaxation = 1.6;
  double penalty = 1.0;
  // Record the objective after every iteration.
  bool record_trace = false;
};

struct DualSolution {
  Eigen::VectorXd y;
  // y = (mu0, mu1, eta) for ranking problems; empty otherwise.
  double mu0 = 0.0;
  double mu1 = 0.0;
  Eigen::VectorXd eta;
  int iterations = 0;
  bool converged = false;
  // |y - max(0, y - (My - q))|_inf.
  double primal_residual = 0.0;
  // max_t |y_t (My - q)_t|.
  double dual_residual = 0.0;
  // 0.5 y'My - q'y.
  double objective = 0.0;
  double wall_seconds = 0.0;
  std::vector<double> objective_trace;
};

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Generic nonnegative QP with a PSD operator. Throws NumericalError when a
// direction of negative curvature shows M is not PSD. A run that hits the
// iteration cap returns its last iterate with converged = false.
DualSolution SolveNonnegativeQp(const LinearOperator& apply_m, const Eigen::VectorXd& q,
                                const DualSolverOptions& options = {});

// Dual of a ranking problem with click probabilities p (gamma is taken from
// the stacked system).
DualSolution SolveDual(const StackedSystem& system, const Eigen::VectorXd& click_prob,
                       const DualSolverOptions& options = {});

// 0.5 y'My - q'y. Throws InvalidArgumentError on dimension mismatch.
double DualObjective(const Eigen::VectorXd& y, const Eigen::MatrixXd& m, const Eigen::VectorXd& q);
double DualObjective(const Eigen::VectorXd& y, const SparseMatrix& m, const Eigen::VectorXd& q);

// Lagrangian dual function value at y >= 0: -(0.5 y'My - q'y) - |p|^2 / (2 gamma).
// A lower bound on the primal optimum for every y >= 0.
double LagrangianDualValue(const StackedSystem& system, const Eigen::VectorXd& click_prob,
                           const Eigen::VectorXd& y);

}  // namespace moo

#endif  // MOO_DUAL_SOLVER_H_
