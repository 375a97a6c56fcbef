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

#include "moo/qp.h"

#include <gtest/gtest.h>

#include <limits>

#include "moo/error.h"
#include "moo/random.h"
#include "test_oracles.h"

namespace moo {
namespace {

QpProblem RandomQp(int n, int eq, int ineq, std::uint64_t seed) {
  Rng rng(seed);
  QpProblem qp;
  const Eigen::MatrixXd g = rng.NormalMatrix(n, n);
  qp.hessian = g.transpose() * g + 0.5 * Eigen::MatrixXd::Identity(n, n);
  qp.linear = rng.NormalVector(n);
  qp.eq_matrix = rng.NormalMatrix(eq, n);
  // Constraints through a known point keep the problem feasible.
  const Eigen::VectorXd x0 = rng.NormalVector(n);
  qp.eq_rhs = qp.eq_matrix * x0;
  qp.ineq_matrix = rng.NormalMatrix(ineq, n);
  qp.ineq_rhs = qp.ineq_matrix * x0 + Eigen::VectorXd::Constant(ineq, 0.1);
  qp.Normalize();
  return qp;
}

TEST(DenseQpTest, UnconstrainedMinimum) {
  QpProblem qp;
  qp.hessian = Eigen::Matrix2d::Identity() * 2.0;
  qp.linear = Eigen::Vector2d(-2.0, 4.0);
  qp.Normalize();
  const QpSolution s = SolveDenseQp(qp);
  EXPECT_NEAR(s.x[0], 1.0, 1e-14);
  EXPECT_NEAR(s.x[1], -2.0, 1e-14);
  EXPECT_NEAR(s.objective, -5.0, 1e-13);
}

TEST(DenseQpTest, MatchesEnumeration) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const QpProblem qp = RandomQp(5, seed % 3, 8, seed);
    const QpSolution s = SolveDenseQp(qp);
    const testing::DenseQpResult oracle = testing::EnumerateDenseQp(
        qp.hessian, qp.linear, qp.eq_matrix, qp.eq_rhs, qp.ineq_matrix, qp.ineq_rhs);
    ASSERT_TRUE(oracle.feasible);
    EXPECT_LE((s.x - oracle.x).cwiseAbs().maxCoeff(), 1e-8) << seed;
    EXPECT_NEAR(s.objective, oracle.objective, 1e-9 * std::max(1.0, std::abs(oracle.objective)));
    EXPECT_LE(s.kkt.Max(), 1e-9);
    const KktResiduals again = ComputeKkt(qp, s.x, s.eq_multipliers, s.ineq_multipliers);
    EXPECT_NEAR(again.Max(), s.kkt.Max(), 1e-15);
  }
}

TEST(DenseQpTest, ReportsInfeasibility) {
  QpProblem qp;
  qp.hessian = Eigen::MatrixXd::Identity(1, 1);
  qp.linear = Eigen::VectorXd::Zero(1);
  qp.ineq_matrix = (Eigen::MatrixXd(2, 1) << 1.0, -1.0).finished();
  qp.ineq_rhs = Eigen::Vector2d(-1.0, -1.0);  // x <= -1 and x >= 1
  qp.Normalize();
  EXPECT_THROW(SolveDenseQp(qp), InfeasibleError);
}

TEST(DenseQpTest, RejectsIndefiniteHessianAndBadShapes) {
  QpProblem qp;
  qp.hessian = -Eigen::MatrixXd::Identity(2, 2);
  qp.linear = Eigen::VectorXd::Zero(2);
  qp.Normalize();
  EXPECT_THROW(SolveDenseQp(qp), NumericalError);
  qp.hessian = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_THROW(SolveDenseQp(qp), InvalidArgumentError);
}

TEST(KktResidualsTest, MaxPicksLargest) {
  KktResiduals r;
  r.stationarity = 1e-3;
  r.complementarity = 2e-3;
  EXPECT_EQ(r.Max(), 2e-3);
}

TEST(NnlsTest, KnownSolutions) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::VectorXd z = SolveNnls(a, Eigen::Vector3d(1.0, -2.0, 3.0));
  EXPECT_NEAR(z[0], 1.0, 1e-14);
  EXPECT_EQ(z[1], 0.0);
  EXPECT_NEAR(z[2], 3.0, 1e-14);
}

TEST(NnlsTest, MatchesEnumeratedQp) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd a = rng.NormalMatrix(8, 5);
    const Eigen::VectorXd b = rng.NormalVector(8);
    const Eigen::VectorXd z = SolveNnls(a, b);
    const testing::EnumerationResult oracle =
        testing::EnumerateNonnegativeQp(a.transpose() * a, a.transpose() * b);
    EXPECT_LE((z - oracle.y).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(DiagonalQpTest, AgreesWithDenseSolver) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 6;
    DiagonalQpProblem diag;
    diag.diagonal = Eigen::VectorXd::NullaryExpr(n, [&] { return rng.Uniform(0.5, 2.0); });
    diag.linear = rng.NormalVector(n);
    const Eigen::MatrixXd rows = rng.NormalMatrix(5, n);
    diag.rhs = Eigen::VectorXd::Constant(5, 0.2);
    diag.lower = Eigen::VectorXd::Constant(n, -1.0);
    diag.upper = Eigen::VectorXd::Constant(n, 1.0);
    if (trial % 2 == 1) diag.upper[0] = std::numeric_limits<double>::infinity();
    DiagonalQpOptions options;
    options.tolerance = 1e-12;
    const DiagonalQpSolution s = SolveDiagonalQp(diag, rows, options);
    ASSERT_TRUE(s.converged);

    QpProblem dense;
    dense.hessian = diag.diagonal.asDiagonal();
    dense.linear = diag.linear;
    dense.ineq_matrix.resize(5 + 2 * n, n);
    dense.ineq_rhs.resize(5 + 2 * n);
    dense.ineq_matrix << rows, Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
    dense.ineq_rhs << diag.rhs, diag.upper, -diag.lower;
    if (trial % 2 == 1) dense.ineq_rhs[5] = 1e6;
    dense.Normalize();
    const QpSolution reference = SolveDenseQp(dense);
    EXPECT_LE((s.x - reference.x).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_NEAR(s.objective, reference.objective, 1e-9 * std::max(1.0, std::abs(s.objective)));
  }
}

}  // namespace
}  // namespace moo
