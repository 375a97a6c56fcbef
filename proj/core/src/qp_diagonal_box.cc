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

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "moo/error.h"
#include "moo/qp.h"

namespace moo {
namespace {

struct DualPoint {
  Eigen::VectorXd y;
  Eigen::VectorXd x;
  Eigen::VectorXd gx;   // G x(y)
  double value = 0.0;   // negated dual function
  Eigen::VectorXd grad; // h - G x(y)
};

}  // namespace

DiagonalQpSolution SolveDiagonalQp(const DiagonalQpProblem& problem,
                                   const Eigen::MatrixXd& rows,
                                   const DiagonalQpOptions& options) {
  const int n = static_cast<int>(problem.diagonal.size());
  const int m = static_cast<int>(problem.rhs.size());
  if (n == 0 || problem.linear.size() != n || problem.lower.size() != n ||
      problem.upper.size() != n || rows.rows() != m ||
      (m > 0 && rows.cols() != n)) {
    throw InvalidArgumentError("DiagonalQp: inconsistent shapes");
  }
  if (problem.diagonal.minCoeff() <= 0.0) {
    throw NumericalError("DiagonalQp: diagonal must be positive");
  }
  if ((problem.lower.array() > problem.upper.array()).any()) {
    throw InfeasibleError("DiagonalQp: empty box");
  }
  const Eigen::VectorXd inv_d = problem.diagonal.cwiseInverse();

  auto evaluate = [&](const Eigen::VectorXd& y) {
    DualPoint pt;
    pt.y = y;
    Eigen::VectorXd shifted = problem.linear;
    if (m > 0) shifted.noalias() += rows.transpose() * y;
    pt.x = (-shifted.cwiseProduct(inv_d)).cwiseMax(problem.lower).cwiseMin(problem.upper);
    pt.gx = m > 0 ? Eigen::VectorXd(rows * pt.x) : Eigen::VectorXd();
    const double lagrangian = 0.5 * pt.x.dot(problem.diagonal.cwiseProduct(pt.x)) +
                              problem.linear.dot(pt.x) +
                              (m > 0 ? y.dot(pt.gx - problem.rhs) : 0.0);
    pt.value = -lagrangian;
    pt.grad = m > 0 ? Eigen::VectorXd(problem.rhs - pt.gx) : Eigen::VectorXd();
    return pt;
  };

  const double scale = std::max(1.0, m > 0 ? problem.rhs.cwiseAbs().maxCoeff() : 0.0);
  auto residuals = [&](const DualPoint& pt, double& infeasibility, double& complementarity) {
    infeasibility = m > 0 ? std::max(0.0, (-pt.grad).maxCoeff()) : 0.0;
    complementarity = m > 0 ? pt.y.cwiseProduct(pt.grad).cwiseAbs().maxCoeff() : 0.0;
  };

  DualPoint current = evaluate(Eigen::VectorXd::Zero(m));
  DiagonalQpSolution out;
  double infeasibility = 0.0, complementarity = 0.0;
  residuals(current, infeasibility, complementarity);

  constexpr int kMemory = 10;
  constexpr double kMinStep = 1e-30, kMaxStep = 1e30;
  std::deque<double> recent{current.value};
  double safe_step = 1.0;
  if (m > 0) {
    // Trace bound on the largest eigenvalue of G D^{-1} G'.
    double lipschitz = 0.0;
    for (int j = 0; j < n; ++j) lipschitz += inv_d[j] * rows.col(j).squaredNorm();
    safe_step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;
  }
  double alpha = safe_step;

  int iteration = 0;
  for (; iteration < options.max_iterations; ++iteration) {
    if (std::max(infeasibility, complementarity) <= options.tolerance * scale) {
      out.converged = true;
      break;
    }
    const Eigen::VectorXd target = (current.y - alpha * current.grad).cwiseMax(0.0);
    const Eigen::VectorXd direction = target - current.y;
    const double slope = current.grad.dot(direction);
    if (direction.cwiseAbs().maxCoeff() == 0.0 || slope >= 0.0) {
      // Stationary in floating point; nothing more to gain.
      break;
    }
    const double reference = *std::max_element(recent.begin(), recent.end());
    double lambda = 1.0;
    DualPoint trial = evaluate(current.y + direction);
    while (trial.value > reference + 1e-4 * lambda * slope && lambda > 1e-12) {
      // Safeguarded quadratic interpolation.
      const double denom = 2.0 * (trial.value - current.value - lambda * slope);
      double next = denom > 0.0 ? -slope * lambda * lambda / denom : 0.5 * lambda;
      if (next < 0.1 * lambda || next > 0.9 * lambda) next = 0.5 * lambda;
      lambda = next;
      trial = evaluate(current.y + lambda * direction);
    }
    const Eigen::VectorXd s = trial.y - current.y;
    const Eigen::VectorXd change = trial.grad - current.grad;
    const double sy = s.dot(change);
    // No curvature along s means the box clipped x on the whole segment; a
    // long step there can run off along a flat dual direction.
    alpha = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, kMinStep, kMaxStep) : safe_step;
    current = std::move(trial);
    recent.push_back(current.value);
    if (static_cast<int>(recent.size()) > kMemory) recent.pop_front();
    residuals(current, infeasibility, complementarity);
  }
  if (!out.converged &&
      std::max(infeasibility, complementarity) <= options.tolerance * scale) {
    out.converged = true;
  }

  out.x = current.x;
  out.multipliers = current.y;
  out.objective = 0.5 * current.x.dot(problem.diagonal.cwiseProduct(current.x)) +
                  problem.linear.dot(current.x);
  out.iterations = iteration;
  out.primal_feasibility = infeasibility;
  out.complementarity = complementarity;
  return out;
}

}  // namespace moo
