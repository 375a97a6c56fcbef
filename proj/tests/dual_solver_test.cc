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

#include <gtest/gtest.h>

#include <random>

#include "moo/error.h"
#include "moo/primal_recovery.h"
#include "test_oracles.h"

namespace moo {
namespace {

RankingProblem Instance(int n, int items, int slots, std::uint64_t seed,
                        double threshold_scale = 1.0) {
  RandomProblemOptions options;
  options.num_users = n;
  options.num_items = items;
  options.num_slots = slots;
  options.threshold_scale = threshold_scale;
  return RandomProblem(options, seed);
}

class DualAlgorithmTest : public ::testing::TestWithParam<DualAlgorithm> {
 protected:
  DualSolverOptions Options() const {
    DualSolverOptions options;
    options.algorithm = GetParam();
    return options;
  }
};

TEST_P(DualAlgorithmTest, IdentityShrinksAtZero) {
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  const DualSolution s = SolveNonnegativeQp([&](const Eigen::VectorXd& v) { return m * v; },
                                            Eigen::Vector2d(1.0, -1.0), Options());
  ASSERT_TRUE(s.converged);
  EXPECT_NEAR(s.y[0], 1.0, 1e-8);
  EXPECT_NEAR(s.y[1], 0.0, 1e-8);
}

TEST_P(DualAlgorithmTest, NonpositiveLinearTermGivesZero) {
  const Eigen::Matrix3d m = (Eigen::Matrix3d() << 2, 1, 0, 1, 2, 1, 0, 1, 2).finished();
  const DualSolution s = SolveNonnegativeQp([&](const Eigen::VectorXd& v) { return m * v; },
                                            Eigen::Vector3d(-1.0, 0.0, -0.5), Options());
  ASSERT_TRUE(s.converged);
  EXPECT_LE(s.y.cwiseAbs().maxCoeff(), 1e-10);
}

TEST_P(DualAlgorithmTest, MatchesActiveSetEnumeration) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const RankingProblem problem = Instance(1, 2, 2, seed);
    const StackedSystem system = StackedSystem::Assemble(problem);
    const Eigen::MatrixXd m(system.ExplicitM());
    const Eigen::VectorXd q = system.LinearTerm(problem.click_prob());
    const testing::EnumerationResult oracle = testing::EnumerateNonnegativeQp(m, q);
    ASSERT_GT(oracle.candidates, 0);
    DualSolverOptions options = Options();
    options.tolerance = 1e-10;
    const DualSolution dual = SolveDual(system, problem.click_prob(), options);
    ASSERT_TRUE(dual.converged);
    EXPECT_NEAR(DualObjective(dual.y, m, q), oracle.objective, 1e-8);
    // The primal point is unique even when y is not.
    EXPECT_LE((system.PrimalFromDual(problem.click_prob(), dual.y) -
               system.PrimalFromDual(problem.click_prob(), oracle.y))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-6);
  }
}

TEST_P(DualAlgorithmTest, ComplementarityAndSigns) {
  const RankingProblem problem = Instance(3, 4, 2, 8);
  const StackedSystem system = StackedSystem::Assemble(problem);
  const DualSolution dual = SolveDual(system, problem.click_prob(), Options());
  ASSERT_TRUE(dual.converged);
  EXPECT_GE(dual.y.minCoeff(), -1e-10);
  const Eigen::VectorXd grad =
      system.ApplyM(dual.y) - system.LinearTerm(problem.click_prob());
  EXPECT_LE(dual.y.cwiseProduct(grad).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_EQ(dual.mu0, dual.y[0]);
  EXPECT_EQ(dual.mu1, dual.y[1]);
  EXPECT_EQ(dual.eta.size(), dual.y.size() - 2);
}

INSTANTIATE_TEST_SUITE_P(Algorithms, DualAlgorithmTest,
                         ::testing::Values(DualAlgorithm::kProjectedGradient,
                                           DualAlgorithm::kRelaxedAdmm));

TEST(DualObjectiveTest, ClosedForms) {
  const Eigen::MatrixXd m = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  EXPECT_EQ(DualObjective(Eigen::VectorXd::Zero(2), m, Eigen::VectorXd::Ones(2)), 0.0);
  EXPECT_EQ(DualObjective(Eigen::VectorXd::Ones(2), m, Eigen::VectorXd::Zero(2)), 2.0);
  EXPECT_THROW(DualObjective(Eigen::VectorXd::Ones(3), m, Eigen::VectorXd::Zero(2)),
               InvalidArgumentError);
}

TEST(DualObjectiveTest, SparseAndDenseAgreeWithDirectEvaluation) {
  const RankingProblem problem = Instance(2, 3, 2, 4);
  const StackedSystem system = StackedSystem::Assemble(problem);
  const Eigen::MatrixXd a = testing::DenseStackedMatrix(problem);
  const Eigen::MatrixXd m = a.transpose() * a / problem.gamma();
  const Eigen::VectorXd q = system.LinearTerm(problem.click_prob());
  std::mt19937_64 engine(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd y(q.size());
  for (Eigen::Index t = 0; t < y.size(); ++t) y[t] = u(engine);
  const double direct = 0.5 * (a * y).squaredNorm() / problem.gamma() - q.dot(y);
  EXPECT_NEAR(DualObjective(y, m, q), direct, 1e-12 * std::abs(direct));
  EXPECT_NEAR(DualObjective(y, system.ExplicitM(), q), direct, 1e-12 * std::abs(direct));
}

TEST(DualSolverTest, ProjectedGradientDescendsMonotonically) {
  const RankingProblem problem = Instance(4, 4, 2, 6);
  DualSolverOptions options;
  options.record_trace = true;
  const DualSolution dual = SolveDual(StackedSystem::Assemble(problem), problem.click_prob(),
                                      options);
  ASSERT_GT(dual.objective_trace.size(), 2u);
  for (std::size_t t = 1; t < dual.objective_trace.size(); ++t) {
    const double prev = dual.objective_trace[t - 1];
    EXPECT_LE(dual.objective_trace[t], prev + 1e-12 * std::max(1.0, std::abs(prev)));
  }
}

TEST(DualSolverTest, WeakDuality) {
  for (std::uint64_t seed : {11, 12, 13}) {
    const RankingProblem problem = Instance(2, 3, 2, seed);
    const StackedSystem system = StackedSystem::Assemble(problem);
    const DualSolution dual = SolveDual(system, problem.click_prob());
    const testing::BarrierResult primal =
        testing::SolveByBarrier(testing::RankingProgram(problem), 1e-10);
    ASSERT_TRUE(primal.feasible);
    const double lower = LagrangianDualValue(system, problem.click_prob(), dual.y);
    EXPECT_LE(lower, problem.Objective(primal.x) + 1e-9);
    // Any nonnegative y gives a lower bound.
    EXPECT_LE(LagrangianDualValue(system, problem.click_prob(),
                                  Eigen::VectorXd::Constant(dual.y.size(), 0.3)),
              problem.Objective(primal.x) + 1e-9);
    EXPECT_NEAR(lower, problem.Objective(primal.x), 1e-6);
  }
}

TEST(DualSolverTest, LargerIterationCapDoesNotMoveMultipliers) {
  const RankingProblem problem = Instance(3, 3, 2, 31);
  const StackedSystem system = StackedSystem::Assemble(problem);
  DualSolverOptions options;
  const DualSolution a = SolveDual(system, problem.click_prob(), options);
  options.max_iterations = 10 * std::max(10000, 50 * system.dual_dimension());
  const DualSolution b = SolveDual(system, problem.click_prob(), options);
  ASSERT_TRUE(a.converged);
  ASSERT_TRUE(b.converged);
  EXPECT_LT(std::abs(a.mu0 - b.mu0), 1e-6);
  EXPECT_LT(std::abs(a.mu1 - b.mu1), 1e-6);
}

TEST(DualSolverTest, IterationCapIsReportedNotThrown) {
  const RankingProblem problem = Instance(3, 4, 2, 2);
  DualSolverOptions options;
  options.max_iterations = 2;
  const DualSolution dual = SolveDual(StackedSystem::Assemble(problem), problem.click_prob(),
                                      options);
  EXPECT_FALSE(dual.converged);
  EXPECT_EQ(dual.iterations, 2);
  EXPECT_GE(dual.y.minCoeff(), 0.0);
}

TEST(DualSolverTest, DetectsNegativeCurvature) {
  const Eigen::MatrixXd m = -Eigen::MatrixXd::Identity(2, 2);
  EXPECT_THROW(SolveNonnegativeQp([&](const Eigen::VectorXd& v) { return m * v; },
                                  Eigen::Vector2d(1.0, 1.0)),
               NumericalError);
}

TEST(DualSolverTest, AlgorithmsAgree) {
  const RankingProblem problem = Instance(5, 4, 3, 77);
  const StackedSystem system = StackedSystem::Assemble(problem);
  DualSolverOptions options;
  options.tolerance = 1e-10;
  const DualSolution pg = SolveDual(system, problem.click_prob(), options);
  options.algorithm = DualAlgorithm::kRelaxedAdmm;
  const DualSolution admm = SolveDual(system, problem.click_prob(), options);
  ASSERT_TRUE(pg.converged);
  ASSERT_TRUE(admm.converged);
  EXPECT_NEAR(pg.objective, admm.objective, 1e-8 * std::max(1.0, std::abs(pg.objective)));
}

}  // namespace
}  // namespace moo
