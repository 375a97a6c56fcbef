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

// Exact solvers for small instances, used as ground truth.

#ifndef MOO_ORACLE_H_
#define MOO_ORACLE_H_

#include <string>

#include <Eigen/Core>

#include "moo/problem_model.h"
#include "moo/qcqp.h"
#include "moo/qp.h"

namespace moo {

struct OracleOptions {
  // Bisection stops once |slack| and multiplier * |slack| are below this.
  double slack_tolerance = 1e-10;
  int max_dimension = 100;
  int max_bisection_steps = 400;
};

struct OracleSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  // Multiplier of the quadratic constraint.
  double multiplier = 0.0;
  std::string method;
  // Residuals of the full QCQP KKT system; the quadratic constraint enters
  // primal feasibility, dual feasibility and complementarity.
  KktResiduals kkt;
  int inner_solves = 0;
};

// Minimizes (x-a)'A(x-a) over the QCQP feasible set by bisection on the
// multiplier of the quadratic constraint; each step solves the convex QP
// with Hessian 2(A + lambda B) over the linear rows exactly. Throws
// InvalidArgumentError above max_dimension and InfeasibleError when the
// feasible set is empty.
OracleSolution ExactQcqp(const QcqpInstance& instance, const OracleOptions& options = {});

// The linear rows and bounds of an instance as a dense QP with the given
// objective.
QpProblem LinearRowsQp(const QcqpInstance& instance, const Eigen::MatrixXd& hessian,
                       const Eigen::VectorXd& linear);

// Direct active-set solve of the full primal ranking problem (no
// decomposition). Intended for a few hundred variables at most.
QpSolution SolveRankingPrimal(const RankingProblem& problem);

}  // namespace moo

#endif  // MOO_ORACLE_H_
