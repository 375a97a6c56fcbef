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

#include "moo/dual_solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "moo/error.h"

namespace moo {
namespace {

double StationarityResidual(const Eigen::VectorXd& y, const Eigen::VectorXd& g) {
  if (y.size() == 0) return 0.0;
  return (y - (y - g).cwiseMax(0.0)).cwiseAbs().maxCoeff();
}

double ComplementarityResidual(const Eigen::VectorXd& y, const Eigen::VectorXd& g) {
  if (y.size() == 0) return 0.0;
  return y.cwiseProduct(g).cwiseAbs().maxCoeff();
}

int IterationCap(const DualSolverOptions& options, int dimension) {
  if (options.max_iterations > 0) return options.max_iterations;
  return std::max(10000, 50 * dimension);
}

void CheckCurvature(double curvature, const Eigen::VectorXd& d, const Eigen::VectorXd& md) {
  if (curvature < -1e-12 * std::max(1.0, d.norm() * md.norm())) {
    throw NumericalError("dual solver: negative curvature " + std::to_string(curvature) +
                         " found; M is not positive semidefinite");
  }
}

// Conjugate gradients on the face {y_i = 0 for i not in the free set}, with
// every step cut at the first bound it would cross. Returns after a cut,
// on convergence, or when the iteration budget runs out.
void FaceConjugateGradient(const LinearOperator& apply_m, const DualSolverOptions& options,
                           int cap, Eigen::VectorXd& y, Eigen::VectorXd& g, double& objective,
                           int& iteration, DualSolution& out) {
  const Eigen::ArrayXd free = (y.array() > 0.0).cast<double>();
  if (free.sum() == 0.0) return;
  Eigen::VectorXd r = -(g.array() * free).matrix();
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  while (iteration < cap && rr > 0.0) {
    const Eigen::VectorXd mp = apply_m(p);
    const double curvature = p.dot(mp);
    CheckCurvature(curvature, p, mp);
    if (curvature <= 0.0) return;
    const double slope = g.dot(p);
    double step = -slope / curvature;
    int blocking = -1;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (p[i] < 0.0 && y[i] + step * p[i] < 0.0) {
        step = -y[i] / p[i];
        blocking = static_cast<int>(i);
      }
    }
    y += step * p;
    g += step * mp;
    objective += step * slope + 0.5 * step * step * curvature;
    if (blocking >= 0) y[blocking] = 0.0;
    y = y.cwiseMax(0.0);
    ++iteration;
    if (options.record_trace) out.objective_trace.push_back(objective);
    if (blocking >= 0 || StationarityResidual(y, g) <= options.tolerance) return;
    const Eigen::VectorXd r_next = -(g.array() * free).matrix();
    const double rr_next = r_next.squaredNorm();
    p = r_next + (rr_next / rr) * p;
    rr = rr_next;
  }
}

// Projected gradient with Barzilai-Borwein steps and exact line search on
// the projected segment; once the set of positive coordinates stops
// changing, conjugate gradients finish the face. Monotone.
DualSolution ProjectedGradient(const LinearOperator& apply_m, const Eigen::VectorXd& q,
                               const DualSolverOptions& options) {
  const int n = static_cast<int>(q.size());
  const int cap = IterationCap(options, n);
  DualSolution out;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd g = -q;
  double objective = 0.0;

  double alpha = 1.0;
  if (g.squaredNorm() > 0.0) {
    const Eigen::VectorXd mg = apply_m(g);
    const double curvature = g.dot(mg);
    CheckCurvature(curvature, g, mg);
    if (curvature > 0.0) alpha = g.squaredNorm() / curvature;
  }

  int iteration = 0;
  int last_refresh = 0;
  while (true) {
    if (iteration - last_refresh >= options.refresh_interval) {
      g = apply_m(y) - q;
      objective = 0.5 * y.dot(g) - 0.5 * q.dot(y);
      last_refresh = iteration;
    }
    if (StationarityResidual(y, g) <= options.tolerance) {
      out.converged = true;
      break;
    }
    if (iteration >= cap) break;
    const Eigen::Array<bool, Eigen::Dynamic, 1> before = y.array() > 0.0;
    const Eigen::VectorXd d = (y - alpha * g).cwiseMax(0.0) - y;
    const Eigen::VectorXd md = apply_m(d);
    const double curvature = d.dot(md);
    CheckCurvature(curvature, d, md);
    const double slope = g.dot(d);
    const double t = curvature > 0.0 ? std::min(1.0, -slope / curvature) : 1.0;
    y += t * d;
    g += t * md;
    objective += t * slope + 0.5 * t * t * curvature;
    if (curvature > 0.0) {
      alpha = std::clamp(d.squaredNorm() / curvature, 1e-12, 1e12);
    }
    ++iteration;
    if (options.record_trace) out.objective_trace.push_back(objective);
    if (((y.array() > 0.0) == before).all()) {
      FaceConjugateGradient(apply_m, options, cap, y, g, objective, iteration, out);
    }
  }
  g = apply_m(y) - q;
  out.y = y;
  out.iterations = iteration;
  out.primal_residual = StationarityResidual(y, g);
  out.dual_residual = ComplementarityResidual(y, g);
  out.objective = 0.5 * y.dot(g) - 0.5 * q.dot(y);
  out.converged = out.primal_residual <= options.tolerance;
  return out;
}

// Conjugate gradients for (M + rho I) x = b, warm-started at x.
void ShiftedCg(const LinearOperator& apply_m, double rho, const Eigen::VectorXd& b,
               Eigen::VectorXd& x) {
  Eigen::VectorXd r = b - apply_m(x) - rho * x;
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  const double stop = std::max(1e-28, 1e-24 * b.squaredNorm());
  for (int k = 0; k < 10 * static_cast<int>(b.size()) + 50 && rr > stop; ++k) {
    const Eigen::VectorXd ap = apply_m(p) + rho * p;
    const double step = rr / p.dot(ap);
    x += step * p;
    r -= step * ap;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
}

DualSolution RelaxedAdmm(const LinearOperator& apply_m, const Eigen::VectorXd& q,
                         const DualSolverOptions& options) {
  const int n = static_cast<int>(q.size());
  const int cap = IterationCap(options, n);
  const double rho = options.penalty;
  const double relax = options.relaxation;
  if (!(rho > 0.0) || !(relax > 0.0 && relax < 2.0)) {
    throw InvalidArgumentError("ADMM: penalty must be positive and relaxation in (0, 2)");
  }
  DualSolution out;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd g = -q;
  int iteration = 0;
  for (;; ++iteration) {
    if (StationarityResidual(z, g) <= options.tolerance) break;
    if (iteration >= cap) break;
    ShiftedCg(apply_m, rho, q + rho * (z - w), x);
    const Eigen::VectorXd relaxed = relax * x + (1.0 - relax) * z;
    const Eigen::VectorXd z_next = (relaxed + w).cwiseMax(0.0);
    w += relaxed - z_next;
    z = z_next;
    const Eigen::VectorXd mz = apply_m(z);
    CheckCurvature(z.dot(mz), z, mz);
    g = mz - q;
    if (options.record_trace) out.objective_trace.push_back(0.5 * z.dot(g) - 0.5 * q.dot(z));
  }
  out.y = z;
  out.iterations = iteration;
  out.primal_residual = StationarityResidual(z, g);
  out.dual_residual = ComplementarityResidual(z, g);
  out.objective = 0.5 * z.dot(g) - 0.5 * q.dot(z);
  out.converged = out.primal_residual <= options.tolerance;
  return out;
}

}  // namespace

DualSolution SolveNonnegativeQp(const LinearOperator& apply_m, const Eigen::VectorXd& q,
                                const DualSolverOptions& options) {
  if (!(options.tolerance > 0.0)) throw InvalidArgumentError("dual solver: tolerance must be > 0");
  if (options.refresh_interval <= 0) {
    throw InvalidArgumentError("dual solver: refresh interval must be positive");
  }
  const auto start = std::chrono::steady_clock::now();
  DualSolution out = options.algorithm == DualAlgorithm::kProjectedGradient
                         ? ProjectedGradient(apply_m, q, options)
                         : RelaxedAdmm(apply_m, q, options);
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

DualSolution SolveDual(const StackedSystem& system, const Eigen::VectorXd& click_prob,
                       const DualSolverOptions& options) {
  if (click_prob.size() != system.primal_dimension()) {
    throw InvalidArgumentError("SolveDual: click vector has the wrong dimension");
  }
  const Eigen::VectorXd q = system.LinearTerm(click_prob);
  DualSolution out = SolveNonnegativeQp(
      [&system](const Eigen::VectorXd& v) { return system.ApplyM(v); }, q, options);
  out.mu0 = out.y[0];
  out.mu1 = out.y[1];
  out.eta = out.y.tail(out.y.size() - 2);
  return out;
}

double DualObjective(const Eigen::VectorXd& y, const Eigen::MatrixXd& m,
                     const Eigen::VectorXd& q) {
  if (m.rows() != y.size() || m.cols() != y.size() || q.size() != y.size()) {
    throw InvalidArgumentError("DualObjective: dimension mismatch");
  }
  return 0.5 * y.dot(m * y) - q.dot(y);
}

double DualObjective(const Eigen::VectorXd& y, const SparseMatrix& m, const Eigen::VectorXd& q) {
  if (m.rows() != y.size() || m.cols() != y.size() || q.size() != y.size()) {
    throw InvalidArgumentError("DualObjective: dimension mismatch");
  }
  return 0.5 * y.dot(m * y) - q.dot(y);
}

double LagrangianDualValue(const StackedSystem& system, const Eigen::VectorXd& click_prob,
                           const Eigen::VectorXd& y) {
  const Eigen::VectorXd q = system.LinearTerm(click_prob);
  const double objective = 0.5 * y.dot(system.ApplyM(y)) - q.dot(y);
  return -objective - click_prob.squaredNorm() / (2.0 * system.gamma());
}

}  // namespace moo
