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

#include "test_oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

namespace moo::testing {

Eigen::MatrixXd DenseStackedMatrix(const RankingProblem& problem) {
  const int n = problem.num_users();
  const int items = problem.num_items();
  const int slots = problem.num_slots();
  const int jk = items * slots;
  const int local_rows = 2 * jk + 2 * slots + 2 * items;
  const int dim = n * jk;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, 2 + n * local_rows);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < items; ++j) {
      for (int k = 0; k < slots; ++k) {
        const int row = (i * items + j) * slots + k;
        a(row, 0) = problem.click_prob()[row] * problem.item_value()[j];
        a(row, 1) = problem.impression_flag()[row];
        const int base = 2 + i * local_rows;
        const int v = j * slots + k;
        a(row, base + v) = -1.0;
        a(row, base + jk + v) = 1.0;
        a(row, base + 2 * jk + k) = -1.0;
        a(row, base + 2 * jk + slots + k) = 1.0;
        a(row, base + 2 * jk + 2 * slots + j) = -1.0;
        a(row, base + 2 * jk + 2 * slots + items + j) = 1.0;
      }
    }
  }
  return a;
}

Eigen::VectorXd DenseStackedRhs(const RankingProblem& problem) {
  const int items = problem.num_items();
  const int slots = problem.num_slots();
  const int jk = items * slots;
  const int local_rows = 2 * jk + 2 * slots + 2 * items;
  Eigen::VectorXd xi(2 + problem.num_users() * local_rows);
  xi[0] = problem.revenue_threshold();
  xi[1] = problem.impression_threshold();
  for (int i = 0; i < problem.num_users(); ++i) {
    Eigen::VectorXd b(local_rows);
    b << Eigen::VectorXd::Ones(jk), Eigen::VectorXd::Zero(jk), Eigen::VectorXd::Ones(slots),
        -Eigen::VectorXd::Ones(slots), Eigen::VectorXd::Ones(items), Eigen::VectorXd::Zero(items);
    xi.segment(2 + i * local_rows, local_rows) = -b;
  }
  return xi;
}

std::int64_t ClosedFormDualNonzeros(int n, int num_items, int num_slots, int beta) {
  const std::int64_t j = num_items, k = num_slots;
  return 4 * (1 + n * (j + beta + k * (3 + beta) + 7 * j * k));
}

std::int64_t CountDenseNonzeros(const Eigen::MatrixXd& m) {
  return (m.array() != 0.0).count();
}

EnumerationResult EnumerateNonnegativeQp(const Eigen::MatrixXd& m, const Eigen::VectorXd& q) {
  const int dim = static_cast<int>(q.size());
  EnumerationResult best;
  best.objective = std::numeric_limits<double>::infinity();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff() + q.cwiseAbs().maxCoeff());
  for (std::uint32_t mask = 0; mask < (1u << dim); ++mask) {
    std::vector<int> support;
    for (int t = 0; t < dim; ++t) {
      if (mask & (1u << t)) support.push_back(t);
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(dim);
    if (!support.empty()) {
      const int s = static_cast<int>(support.size());
      Eigen::MatrixXd sub(s, s);
      Eigen::VectorXd rhs(s);
      for (int a = 0; a < s; ++a) {
        rhs[a] = q[support[a]];
        for (int b = 0; b < s; ++b) sub(a, b) = m(support[a], support[b]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
      lu.setThreshold(1e-12);
      if (!lu.isInvertible()) continue;
      const Eigen::VectorXd ys = lu.solve(rhs);
      if (ys.minCoeff() < -1e-12 * scale) continue;
      for (int a = 0; a < s; ++a) y[support[a]] = std::max(0.0, ys[a]);
    }
    const Eigen::VectorXd grad = m * y - q;
    bool kkt = true;
    for (int t = 0; t < dim && kkt; ++t) {
      if (!(mask & (1u << t)) && grad[t] < -1e-10 * scale) kkt = false;
    }
    if (!kkt) continue;
    ++best.candidates;
    const double value = 0.5 * y.dot(m * y) - q.dot(y);
    if (value < best.objective) {
      best.objective = value;
      best.y = y;
    }
  }
  return best;
}

DenseQpResult EnumerateDenseQp(const Eigen::MatrixXd& h, const Eigen::VectorXd& g,
                               const Eigen::MatrixXd& e_matrix, const Eigen::VectorXd& e_rhs,
                               const Eigen::MatrixXd& c_matrix, const Eigen::VectorXd& c_rhs) {
  const int n = static_cast<int>(g.size());
  const int p = static_cast<int>(e_rhs.size());
  const int m = static_cast<int>(c_rhs.size());
  DenseQpResult out;
  out.objective = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> active;
    for (int r = 0; r < m; ++r) {
      if (mask & (1u << r)) active.push_back(r);
    }
    const int a = static_cast<int>(active.size());
    const int size = n + p + a;
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(size, size);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
    kkt.topLeftCorner(n, n) = h;
    rhs.head(n) = -g;
    if (p > 0) {
      kkt.block(0, n, n, p) = e_matrix.transpose();
      kkt.block(n, 0, p, n) = e_matrix;
      rhs.segment(n, p) = e_rhs;
    }
    for (int r = 0; r < a; ++r) {
      kkt.block(0, n + p + r, n, 1) = c_matrix.row(active[r]).transpose();
      kkt.block(n + p + r, 0, 1, n) = c_matrix.row(active[r]);
      rhs[n + p + r] = c_rhs[active[r]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd x = sol.head(n);
    if (a > 0 && sol.tail(a).minCoeff() < -1e-10) continue;
    if (m > 0 && (c_matrix * x - c_rhs).maxCoeff() > 1e-10) continue;
    const double value = 0.5 * x.dot(h * x) + g.dot(x);
    if (value < out.objective) {
      out.objective = value;
      out.x = x;
      out.feasible = true;
    }
  }
  return out;
}

namespace {

// Quadratic constraint z'Pz + r'z + k <= 0.
struct QuadraticRow {
  Eigen::MatrixXd p;
  Eigen::VectorXd r;
  double k = 0.0;
  double Value(const Eigen::VectorXd& z) const { return z.dot(p * z) + r.dot(z) + k; }
};

struct BarrierProblem {
  Eigen::MatrixXd h;
  Eigen::VectorXd g;
  Eigen::MatrixXd e_matrix;
  Eigen::VectorXd e_rhs;
  Eigen::MatrixXd c_matrix;
  Eigen::VectorXd c_rhs;
  std::vector<QuadraticRow> quadratic;

  int num_constraints() const {
    return static_cast<int>(c_rhs.size() + quadratic.size());
  }
  double Objective(const Eigen::VectorXd& z) const { return 0.5 * z.dot(h * z) + g.dot(z); }
  // Largest constraint value; < 0 means strictly feasible.
  double MaxConstraint(const Eigen::VectorXd& z) const {
    double worst = -std::numeric_limits<double>::infinity();
    if (c_rhs.size() > 0) worst = (c_matrix * z - c_rhs).maxCoeff();
    for (const QuadraticRow& q : quadratic) worst = std::max(worst, q.Value(z));
    return worst;
  }
  double Barrier(const Eigen::VectorXd& z, double t) const {
    if (MaxConstraint(z) >= 0.0) return std::numeric_limits<double>::infinity();
    double value = t * Objective(z);
    if (c_rhs.size() > 0) value -= (c_rhs - c_matrix * z).array().log().sum();
    for (const QuadraticRow& q : quadratic) value -= std::log(-q.Value(z));
    return value;
  }
};

// Orthonormal basis of {v : E v = 0}.
Eigen::MatrixXd NullSpace(const Eigen::MatrixXd& e, int n) {
  if (e.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(e, Eigen::ComputeFullV);
  const double cutoff = 1e-12 * std::max(1.0, svd.singularValues().maxCoeff());
  const int rank = static_cast<int>((svd.singularValues().array() > cutoff).count());
  return svd.matrixV().rightCols(n - rank);
}

// Centering by Newton steps restricted to the null space of the equalities;
// z must already satisfy them. `stop` is polled after every step; returns
// true when it fired.
bool Center(const BarrierProblem& bp, double t, Eigen::VectorXd& z, int& steps,
            const std::function<bool(const Eigen::VectorXd&)>& stop) {
  const Eigen::MatrixXd basis = NullSpace(bp.e_matrix, static_cast<int>(z.size()));
  if (basis.cols() == 0) return false;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd grad = t * (bp.h * z + bp.g);
    Eigen::MatrixXd hess = t * bp.h;
    if (bp.c_rhs.size() > 0) {
      const Eigen::VectorXd slack = bp.c_rhs - bp.c_matrix * z;
      const Eigen::VectorXd inv = slack.cwiseInverse();
      grad.noalias() += bp.c_matrix.transpose() * inv;
      hess.noalias() += bp.c_matrix.transpose() * inv.cwiseAbs2().asDiagonal() * bp.c_matrix;
    }
    for (const QuadraticRow& q : bp.quadratic) {
      const double f = q.Value(z);
      const Eigen::VectorXd df = 2.0 * q.p * z + q.r;
      grad += df / -f;
      hess += df * df.transpose() / (f * f) + 2.0 * q.p / -f;
    }
    const Eigen::VectorXd reduced_grad = basis.transpose() * grad;
    const Eigen::MatrixXd reduced_hess = basis.transpose() * hess * basis;
    const Eigen::VectorXd dz =
        basis * reduced_hess.completeOrthogonalDecomposition().solve(-reduced_grad);
    const double decrement = -grad.dot(dz);
    if (!(decrement > 1e-14)) break;
    double alpha = 1.0;
    const double current = bp.Barrier(z, t);
    while (alpha > 1e-20) {
      const Eigen::VectorXd trial = z + alpha * dz;
      const double value = bp.Barrier(trial, t);
      if (std::isfinite(value) && value <= current - 0.25 * alpha * decrement) break;
      alpha *= 0.5;
    }
    if (alpha <= 1e-20) break;
    z += alpha * dz;
    ++steps;
    if (stop && stop(z)) return true;
  }
  return false;
}

void RunBarrier(const BarrierProblem& bp, Eigen::VectorXd& z, double gap_tolerance, int& steps,
                const std::function<bool(const Eigen::VectorXd&)>& stop) {
  const int m = std::max(1, bp.num_constraints());
  double t = 1.0;
  while (true) {
    if (Center(bp, t, z, steps, stop)) return;
    const double gap = m / t;
    if (gap < gap_tolerance * std::max(1.0, std::abs(bp.Objective(z)))) return;
    t *= 8.0;
  }
}

}  // namespace

BarrierResult SolveByBarrier(const ConvexProgram& program, double gap_tolerance) {
  const int n = static_cast<int>(program.g.size());
  BarrierProblem original;
  original.h = program.h;
  original.g = program.g;
  original.e_matrix = program.e_matrix.rows() > 0 ? program.e_matrix : Eigen::MatrixXd(0, n);
  original.e_rhs = program.e_rhs;
  original.c_matrix = program.c_matrix.rows() > 0 ? program.c_matrix : Eigen::MatrixXd(0, n);
  original.c_rhs = program.c_rhs;
  if (program.has_quadratic) {
    QuadraticRow q;
    q.p = program.q;
    q.r = -2.0 * program.q * program.center;
    q.k = program.center.dot(program.q * program.center) - program.level;
    original.quadratic.push_back(q);
  }

  BarrierResult out;
  // Phase one over (x, s): minimize s with every constraint relaxed by s.
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  if (original.e_rhs.size() > 0) {
    x0 = original.e_matrix.completeOrthogonalDecomposition().solve(original.e_rhs);
  }
  if (original.MaxConstraint(x0) >= 0.0) {
    BarrierProblem phase;
    phase.h = Eigen::MatrixXd::Zero(n + 1, n + 1);
    phase.g = Eigen::VectorXd::Zero(n + 1);
    phase.g[n] = 1.0;
    phase.e_matrix = Eigen::MatrixXd::Zero(original.e_rhs.size(), n + 1);
    phase.e_matrix.leftCols(n) = original.e_matrix;
    phase.e_rhs = original.e_rhs;
    const int rows = static_cast<int>(original.c_rhs.size());
    phase.c_matrix = Eigen::MatrixXd::Zero(rows + 1, n + 1);
    phase.c_rhs = Eigen::VectorXd::Zero(rows + 1);
    phase.c_matrix.topLeftCorner(rows, n) = original.c_matrix;
    phase.c_matrix.col(n).head(rows).setConstant(-1.0);
    phase.c_rhs.head(rows) = original.c_rhs;
    // s >= -1 keeps phase one bounded.
    phase.c_matrix(rows, n) = -1.0;
    phase.c_rhs[rows] = 1.0;
    for (const QuadraticRow& q : original.quadratic) {
      QuadraticRow lifted;
      lifted.p = Eigen::MatrixXd::Zero(n + 1, n + 1);
      lifted.p.topLeftCorner(n, n) = q.p;
      lifted.r = Eigen::VectorXd::Zero(n + 1);
      lifted.r.head(n) = q.r;
      lifted.r[n] = -1.0;
      lifted.k = q.k;
      phase.quadratic.push_back(lifted);
    }
    Eigen::VectorXd z(n + 1);
    z.head(n) = x0;
    z[n] = std::max(0.0, original.MaxConstraint(x0)) + 1.0;
    auto strictly_feasible = [&](const Eigen::VectorXd& v) {
      return original.MaxConstraint(v.head(n)) < 0.0;
    };
    RunBarrier(phase, z, 1e-12, out.newton_steps, strictly_feasible);
    x0 = z.head(n);
    if (original.MaxConstraint(x0) >= 0.0) return out;
  }
  out.feasible = true;
  RunBarrier(original, x0, gap_tolerance, out.newton_steps, {});
  out.x = x0;
  out.objective = original.Objective(x0);
  return out;
}

ConvexProgram RankingProgram(const RankingProblem& problem) {
  const int n = problem.num_users();
  const int items = problem.num_items();
  const int slots = problem.num_slots();
  const int dim = n * items * slots;
  auto index = [&](int i, int j, int k) { return (i * items + j) * slots + k; };
  ConvexProgram out;
  out.h = problem.gamma() * Eigen::MatrixXd::Identity(dim, dim);
  out.g = -problem.click_prob();
  out.e_matrix = Eigen::MatrixXd::Zero(n * slots, dim);
  out.e_rhs = Eigen::VectorXd::Ones(n * slots);
  const int rows = dim + n * items + 2;
  out.c_matrix = Eigen::MatrixXd::Zero(rows, dim);
  out.c_rhs = Eigen::VectorXd::Zero(rows);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < items; ++j) {
      for (int k = 0; k < slots; ++k) {
        const int v = index(i, j, k);
        out.e_matrix(i * slots + k, v) = 1.0;
        out.c_matrix(v, v) = -1.0;
        out.c_matrix(dim + i * items + j, v) = 1.0;
        out.c_matrix(rows - 2, v) = -problem.click_prob()[v] * problem.item_value()[j];
        out.c_matrix(rows - 1, v) = -problem.impression_flag()[v];
      }
      out.c_rhs[dim + i * items + j] = 1.0;
    }
  }
  out.c_rhs[rows - 2] = -problem.revenue_threshold();
  out.c_rhs[rows - 1] = -problem.impression_threshold();
  return out;
}

bool ElementaryBoxesBalanced(const Eigen::MatrixXd& points, int m, int t) {
  const int s = static_cast<int>(points.cols());
  if (points.rows() != (Eigen::Index{1} << m)) return false;
  const int total = m - t;
  std::vector<int> digits(s, 0);
  // Enumerate compositions of `total` into s nonnegative parts.
  std::function<bool(int, int)> visit = [&](int coord, int left) -> bool {
    if (coord == s - 1) {
      digits[coord] = left;
      std::unordered_map<std::uint64_t, int> counts;
      for (Eigen::Index r = 0; r < points.rows(); ++r) {
        std::uint64_t key = 0;
        for (int c = 0; c < s; ++c) {
          const auto cell = static_cast<std::uint64_t>(std::floor(points(r, c) * std::ldexp(1.0, digits[c])));
          key = (key << digits[c]) | cell;
        }
        ++counts[key];
      }
      if (static_cast<std::int64_t>(counts.size()) != (std::int64_t{1} << total)) return false;
      for (const auto& [key, count] : counts) {
        if (count != (1 << t)) return false;
      }
      return true;
    }
    for (int d = 0; d <= left; ++d) {
      digits[coord] = d;
      if (!visit(coord + 1, left - d)) return false;
    }
    return true;
  };
  return visit(0, total);
}

Eigen::MatrixXd RandomRotation(int s, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(s, s);
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) g(r, c) = normal(engine);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(s, s);
}

Eigen::MatrixXd RegularSimplex(int s, std::uint64_t seed) {
  // Centered standard basis of R^{s+1}, written in an orthonormal basis of
  // the hyperplane orthogonal to the all-ones vector.
  Eigen::MatrixXd centered =
      Eigen::MatrixXd::Identity(s + 1, s + 1) -
      Eigen::MatrixXd::Constant(s + 1, s + 1, 1.0 / (s + 1));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullU);
  const Eigen::MatrixXd basis = svd.matrixU().leftCols(s);
  Eigen::MatrixXd vertices = centered * basis;
  vertices.rowwise().normalize();
  return vertices * RandomRotation(s, seed).transpose();
}

}  // namespace moo::testing
