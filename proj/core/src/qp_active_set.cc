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
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "moo/error.h"
#include "moo/qp.h"

namespace moo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Factorization state of the dual active-set method. With H = LL', the
// columns of J = L^{-T} Q span the primal space; the first `size` columns
// correspond to active constraints and R (upper triangular) holds the
// triangular factor of J'N for the active normals N.
class ActiveFactor {
 public:
  ActiveFactor(const Eigen::MatrixXd& j) : j_(j), r_(Eigen::MatrixXd::Zero(j.rows(), j.rows())) {}

  int size() const { return size_; }
  int dimension() const { return static_cast<int>(j_.rows()); }

  // d = J' normal.
  Eigen::VectorXd Project(const Eigen::VectorXd& normal) const {
    return j_.transpose() * normal;
  }
  // Primal step direction: the part of the normal outside the active span.
  Eigen::VectorXd PrimalDirection(const Eigen::VectorXd& d) const {
    const int free = dimension() - size_;
    if (free == 0) return Eigen::VectorXd::Zero(dimension());
    return j_.rightCols(free) * d.tail(free);
  }
  // Change of the active multipliers per unit step: R^{-1} d_head.
  Eigen::VectorXd DualDirection(const Eigen::VectorXd& d) const {
    if (size_ == 0) return Eigen::VectorXd();
    return r_.topLeftCorner(size_, size_).triangularView<Eigen::Upper>().solve(
        d.head(size_));
  }

  // Appends a constraint whose projected normal is d. Returns false if it is
  // linearly dependent on the active ones.
  bool Add(Eigen::VectorXd d) {
    const int n = dimension();
    for (int col = n - 1; col > size_; --col) {
      double cc = d[col - 1];
      double ss = d[col];
      const double h = std::hypot(cc, ss);
      if (h < kEps) continue;
      d[col] = 0.0;
      cc /= h;
      ss /= h;
      if (cc < 0.0) {
        d[col - 1] = -h;
        cc = -cc;
        ss = -ss;
      } else {
        d[col - 1] = h;
      }
      const double nu = ss / (1.0 + cc);
      for (int k = 0; k < n; ++k) {
        const double t1 = j_(k, col - 1);
        const double t2 = j_(k, col);
        j_(k, col - 1) = t1 * cc + t2 * ss;
        j_(k, col) = nu * (t1 + j_(k, col - 1)) - t2;
      }
    }
    if (std::abs(d[size_]) <= kEps * r_norm_) return false;
    r_.col(size_).head(size_ + 1) = d.head(size_ + 1);
    r_norm_ = std::max(r_norm_, std::abs(d[size_]));
    ++size_;
    return true;
  }

  // Removes the active constraint at `position` and restores triangularity.
  void Remove(int position) {
    const int n = dimension();
    for (int col = position; col < size_ - 1; ++col) r_.col(col) = r_.col(col + 1);
    r_.col(size_ - 1).setZero();
    --size_;
    for (int row = position; row < size_; ++row) {
      double cc = r_(row, row);
      double ss = r_(row + 1, row);
      const double h = std::hypot(cc, ss);
      if (h < kEps) continue;
      cc /= h;
      ss /= h;
      r_(row + 1, row) = 0.0;
      if (cc < 0.0) {
        r_(row, row) = -h;
        cc = -cc;
        ss = -ss;
      } else {
        r_(row, row) = h;
      }
      const double nu = ss / (1.0 + cc);
      for (int k = row + 1; k < size_; ++k) {
        const double t1 = r_(row, k);
        const double t2 = r_(row + 1, k);
        r_(row, k) = t1 * cc + t2 * ss;
        r_(row + 1, k) = nu * (t1 + r_(row, k)) - t2;
      }
      for (int k = 0; k < n; ++k) {
        const double t1 = j_(k, row);
        const double t2 = j_(k, row + 1);
        j_(k, row) = t1 * cc + t2 * ss;
        j_(k, row + 1) = nu * (j_(k, row) + t1) - t2;
      }
    }
  }

 private:
  Eigen::MatrixXd j_;
  Eigen::MatrixXd r_;
  int size_ = 0;
  double r_norm_ = 1.0;
};

void CheckShapes(const QpProblem& p) {
  const int n = p.dimension();
  if (n == 0) throw InvalidArgumentError("QP: empty problem");
  if (p.hessian.rows() != n || p.hessian.cols() != n) {
    throw InvalidArgumentError("QP: Hessian shape does not match the linear term");
  }
  if (p.eq_matrix.cols() != n || p.eq_matrix.rows() != p.eq_rhs.size()) {
    throw InvalidArgumentError("QP: equality block has inconsistent shape");
  }
  if (p.ineq_matrix.cols() != n || p.ineq_matrix.rows() != p.ineq_rhs.size()) {
    throw InvalidArgumentError("QP: inequality block has inconsistent shape");
  }
}

}  // namespace

void QpProblem::Normalize() {
  const int n = dimension();
  if (eq_matrix.size() == 0) eq_matrix.resize(0, n);
  if (eq_rhs.size() == 0) eq_rhs.resize(0);
  if (ineq_matrix.size() == 0) ineq_matrix.resize(0, n);
  if (ineq_rhs.size() == 0) ineq_rhs.resize(0);
}

double KktResiduals::Max() const {
  return std::max({stationarity, primal_feasibility, dual_feasibility, complementarity});
}

KktResiduals ComputeKkt(const QpProblem& problem, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& eq_multipliers,
                        const Eigen::VectorXd& ineq_multipliers) {
  QpProblem p = problem;
  p.Normalize();
  KktResiduals out;
  Eigen::VectorXd grad = p.hessian * x + p.linear;
  if (p.eq_matrix.rows() > 0) grad += p.eq_matrix.transpose() * eq_multipliers;
  if (p.ineq_matrix.rows() > 0) grad += p.ineq_matrix.transpose() * ineq_multipliers;
  out.stationarity = grad.cwiseAbs().maxCoeff();
  if (p.eq_matrix.rows() > 0) {
    out.primal_feasibility = (p.eq_matrix * x - p.eq_rhs).cwiseAbs().maxCoeff();
  }
  if (p.ineq_matrix.rows() > 0) {
    const Eigen::VectorXd slack = p.ineq_rhs - p.ineq_matrix * x;
    out.primal_feasibility = std::max(out.primal_feasibility, (-slack).maxCoeff());
    out.dual_feasibility = std::max(0.0, (-ineq_multipliers).maxCoeff());
    out.complementarity = ineq_multipliers.cwiseProduct(slack).cwiseAbs().maxCoeff();
  }
  return out;
}

QpSolution SolveDenseQp(const QpProblem& input) {
  QpProblem problem = input;
  problem.Normalize();
  CheckShapes(problem);
  const int n = problem.dimension();
  const int num_eq = static_cast<int>(problem.eq_rhs.size());
  const int num_ineq = static_cast<int>(problem.ineq_rhs.size());

  Eigen::LLT<Eigen::MatrixXd> llt(problem.hessian);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("QP: Hessian is not positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  if (l.diagonal().minCoeff() <= std::sqrt(kEps) * l.diagonal().maxCoeff() * 1e-4) {
    throw NumericalError("QP: Hessian is numerically singular");
  }
  ActiveFactor factor(Eigen::MatrixXd(
      l.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n))));

  // Constraints in the form a'x >= beta: equalities as given, inequalities
  // C x <= c as (-C) x >= -c.
  auto normal = [&](int id) -> Eigen::VectorXd {
    if (id < num_eq) return problem.eq_matrix.row(id).transpose();
    return -problem.ineq_matrix.row(id - num_eq).transpose();
  };
  auto level = [&](int id) {
    return id < num_eq ? problem.eq_rhs[id] : -problem.ineq_rhs[id - num_eq];
  };
  Eigen::VectorXd row_norm(num_eq + num_ineq);
  for (int id = 0; id < num_eq + num_ineq; ++id) row_norm[id] = normal(id).norm();

  Eigen::VectorXd x = llt.solve(-problem.linear);
  std::vector<int> active;
  std::vector<double> u;  // multipliers of the active constraints
  auto tolerance = [&](int id) {
    return 1e-13 * std::max({1.0, std::abs(level(id)), row_norm[id] * x.cwiseAbs().maxCoeff()});
  };

  for (int id = 0; id < num_eq; ++id) {
    const Eigen::VectorXd np = normal(id);
    const Eigen::VectorXd d = factor.Project(np);
    const Eigen::VectorXd z = factor.PrimalDirection(d);
    const double curvature = z.dot(np);
    const double gap = level(id) - np.dot(x);
    if (z.norm() <= 1e-12 * std::max(1.0, row_norm[id])) {
      if (std::abs(gap) <= 1e-9 * std::max(1.0, std::abs(level(id)))) continue;
      throw InfeasibleError("QP: inconsistent equality constraints");
    }
    const double t = gap / curvature;
    x += t * z;
    const Eigen::VectorXd r = factor.DualDirection(d);
    for (int k = 0; k < static_cast<int>(u.size()); ++k) u[k] -= t * r[k];
    if (!factor.Add(d)) throw NumericalError("QP: equality constraints are degenerate");
    active.push_back(id);
    u.push_back(t);
  }

  const int max_iterations = 20 * (n + num_ineq) + 1000;
  int iterations = 0;
  std::vector<bool> is_active(num_eq + num_ineq, false);
  for (int id : active) is_active[id] = true;

  while (true) {
    // Most violated inactive inequality, by normalized slack.
    int chosen = -1;
    double worst = 0.0;
    for (int id = num_eq; id < num_eq + num_ineq; ++id) {
      if (is_active[id]) continue;
      const double slack = normal(id).dot(x) - level(id);
      if (slack >= -tolerance(id)) continue;
      const double scaled = slack / std::max(row_norm[id], kEps);
      if (scaled < worst) {
        worst = scaled;
        chosen = id;
      }
    }
    if (chosen < 0) break;

    const Eigen::VectorXd np = normal(chosen);
    double slack = np.dot(x) - level(chosen);
    double u_new = 0.0;
    while (true) {
      if (++iterations > max_iterations) {
        throw NumericalError("QP: iteration limit reached (cycling)");
      }
      const Eigen::VectorXd d = factor.Project(np);
      const Eigen::VectorXd z = factor.PrimalDirection(d);
      const Eigen::VectorXd r = factor.DualDirection(d);

      double partial = kInf;
      int drop = -1;
      for (int k = 0; k < static_cast<int>(active.size()); ++k) {
        if (active[k] < num_eq || r[k] <= 0.0) continue;
        const double step = u[k] / r[k];
        if (step < partial) {
          partial = step;
          drop = k;
        }
      }
      const double curvature = z.dot(np);
      const double full = (z.norm() > kEps * std::max(1.0, row_norm[chosen]) && curvature > 0.0)
                              ? -slack / curvature
                              : kInf;
      const double step = std::min(partial, full);
      if (step == kInf) {
        throw InfeasibleError("QP: constraints are inconsistent");
      }
      for (int k = 0; k < static_cast<int>(active.size()); ++k) u[k] -= step * r[k];
      u_new += step;
      if (full == kInf) {
        // Pure dual step: x does not move.
        is_active[active[drop]] = false;
        active.erase(active.begin() + drop);
        u.erase(u.begin() + drop);
        factor.Remove(drop);
        continue;
      }
      x += step * z;
      if (full <= partial) {
        if (!factor.Add(d)) throw NumericalError("QP: degenerate constraint addition");
        active.push_back(chosen);
        u.push_back(u_new);
        is_active[chosen] = true;
        break;
      }
      is_active[active[drop]] = false;
      active.erase(active.begin() + drop);
      u.erase(u.begin() + drop);
      factor.Remove(drop);
      slack = np.dot(x) - level(chosen);
    }
  }

  QpSolution out;
  out.x = x;
  out.eq_multipliers = Eigen::VectorXd::Zero(num_eq);
  out.ineq_multipliers = Eigen::VectorXd::Zero(num_ineq);
  for (int k = 0; k < static_cast<int>(active.size()); ++k) {
    if (active[k] < num_eq) {
      out.eq_multipliers[active[k]] = -u[k];
    } else {
      out.ineq_multipliers[active[k] - num_eq] = std::max(0.0, u[k]);
      out.active_inequalities.push_back(active[k] - num_eq);
    }
  }
  std::sort(out.active_inequalities.begin(), out.active_inequalities.end());
  out.objective = 0.5 * x.dot(problem.hessian * x) + problem.linear.dot(x);
  out.iterations = iterations;
  out.kkt = ComputeKkt(problem, x, out.eq_multipliers, out.ineq_multipliers);
  return out;
}

}  // namespace moo
