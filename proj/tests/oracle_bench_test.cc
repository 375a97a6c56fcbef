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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "moo/bench.h"
#include "moo/error.h"
#include "moo/oracle.h"
#include "moo/random.h"
#include "test_oracles.h"

namespace moo {
namespace {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path TempDir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / ("moo_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

testing::ConvexProgram AsProgram(const QcqpInstance& instance) {
  const int n = instance.dimension();
  testing::ConvexProgram program;
  const Eigen::MatrixXd a = instance.objective.ToDense();
  program.h = 2.0 * a;
  program.g = -2.0 * (a * instance.objective_center);
  program.e_matrix = instance.eq_matrix.rows() > 0 ? instance.eq_matrix : Eigen::MatrixXd(0, n);
  program.e_rhs = instance.eq_rhs.size() > 0 ? instance.eq_rhs : Eigen::VectorXd(0);
  const QpProblem rows = LinearRowsQp(instance, program.h, program.g);
  program.c_matrix = rows.ineq_matrix;
  program.c_rhs = rows.ineq_rhs;
  program.has_quadratic = true;
  program.q = instance.constraint.shape().ToDense();
  program.center = instance.constraint.center();
  program.level = instance.constraint.level();
  return program;
}

TEST(ExactQcqpTest, DiskClosedForm) {
  QcqpInstance instance;
  instance.objective = SpdMatrix::Identity(2);
  instance.objective_center = Eigen::Vector2d(2.0, 0.0);
  instance.constraint = Ellipsoid(SpdMatrix::Identity(2), Eigen::Vector2d::Zero(), 1.0);
  const OracleSolution s = ExactQcqp(instance);
  EXPECT_NEAR(s.x[0], 1.0, 1e-9);
  EXPECT_NEAR(s.x[1], 0.0, 1e-9);
  EXPECT_NEAR(s.objective, 1.0, 1e-9);
  // Stationarity 2(x - a) + 2 lambda x = 0 gives lambda = 1.
  EXPECT_NEAR(s.multiplier, 1.0, 1e-8);
  EXPECT_LE(s.kkt.Max(), 1e-9);
}

TEST(ExactQcqpTest, InactiveConstraint) {
  QcqpInstance instance;
  instance.objective = SpdMatrix::Identity(2);
  instance.objective_center = Eigen::Vector2d(0.3, 0.0);
  instance.constraint = Ellipsoid(SpdMatrix::Identity(2), Eigen::Vector2d::Zero(), 1.0);
  const OracleSolution s = ExactQcqp(instance);
  EXPECT_EQ(s.multiplier, 0.0);
  EXPECT_LE((s.x - instance.objective_center).norm(), 1e-14);
}

TEST(ExactQcqpTest, AgreesWithBarrierMethod) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const QcqpInstance instance = GenerateSamplerInstance(5, seed);
    const OracleSolution s = ExactQcqp(instance);
    EXPECT_LE(s.kkt.Max(), 1e-9) << seed;
    const testing::BarrierResult barrier = testing::SolveByBarrier(AsProgram(instance), 1e-12);
    ASSERT_TRUE(barrier.feasible);
    EXPECT_LE((s.x - barrier.x).cwiseAbs().maxCoeff(), 1e-5) << seed;
    EXPECT_NEAR(s.objective, instance.Objective(barrier.x), 1e-8);
  }
}

TEST(ExactQcqpTest, CapsAndInfeasibility) {
  OracleOptions options;
  options.max_dimension = 4;
  EXPECT_THROW(ExactQcqp(GenerateSamplerInstance(5, 1), options), InvalidArgumentError);

  QcqpInstance far;
  far.objective = SpdMatrix::Identity(2);
  far.objective_center = Eigen::Vector2d::Zero();
  far.constraint = Ellipsoid(SpdMatrix::Identity(2), Eigen::Vector2d::Zero(), 1.0);
  far.lower = Eigen::Vector2d(2.0, 2.0);
  far.upper = Eigen::Vector2d(3.0, 3.0);
  EXPECT_THROW(ExactQcqp(far), InfeasibleError);
}

TEST(SolveRankingPrimalTest, MatchesBarrier) {
  RandomProblemOptions options;
  options.num_users = 2;
  options.num_items = 3;
  options.num_slots = 2;
  const RankingProblem problem = RandomProblem(options, 6);
  const QpSolution s = SolveRankingPrimal(problem);
  const testing::BarrierResult barrier = testing::SolveByBarrier(testing::RankingProgram(problem));
  ASSERT_TRUE(barrier.feasible);
  EXPECT_LE((s.x - barrier.x).cwiseAbs().maxCoeff(), 1e-5);
  EXPECT_LE(s.kkt.Max(), 1e-9);
}

TEST(InteractionExperimentTest, NoInteractionMeansNoError) {
  InteractionExperimentOptions options;
  options.cross_min = 0.0;
  options.cross_max = 0.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const InteractionErrorRow row = RunInteractionCell(4, seed, options);
    EXPECT_EQ(row.relative_error, 0.0);
    EXPECT_LE(row.naive_violation, 1e-9);
  }
}

TEST(InteractionExperimentTest, NaiveIsNeverBetterUnderTrueObjective) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const InteractionErrorRow row = RunInteractionCell(5, seed);
    EXPECT_GT(row.true_objective, 0.0);
    if (row.naive_violation <= 1e-9) {
      EXPECT_GE(row.relative_error, -1e-8);
    }
  }
}

TEST(InteractionExperimentTest, RejectsTooFewItems) {
  EXPECT_THROW(GenerateInteractionInstance(1, 0), InvalidArgumentError);
}

TEST(SamplerExperimentTest, CellReportsOracleComparison) {
  const QcqpInstance instance = GenerateSamplerInstance(4, 2);
  const SamplerErrorRow row = RunSamplerCell(instance, 4, 2, BoundarySampler::kNet, 0);
  EXPECT_EQ(row.num_points, 1024);
  EXPECT_LE(row.objective, row.oracle_objective + 1e-8);
  EXPECT_GE(row.relative_error, 0.0);
  const SamplerErrorRow traced =
      RunSamplerCell(instance, 4, 2, BoundarySampler::kNet, 0, {16, 64, 256, 1024});
  ASSERT_EQ(traced.trace.size(), 4u);
  EXPECT_EQ(traced.num_points, 1024);
  EXPECT_LT(traced.trace.back().error, traced.trace.front().error);
  EXPECT_NEAR(traced.relative_error, row.relative_error, 1e-12);
}

TEST(RunSuiteTest, DeterministicOutputs) {
  BenchConfig config;
  config.interaction_dims = {3};
  config.sampler_dims = {3};
  config.seeds = {0, 1};
  config.num_points = 64;
  const std::filesystem::path a = TempDir("suite_a");
  const std::filesystem::path b = TempDir("suite_b");
  RunSuite(config, a.string());
  RunSuite(config, b.string());
  const std::string results = ReadFile(a / "results.csv");
  EXPECT_EQ(results, ReadFile(b / "results.csv"));
  EXPECT_EQ(ReadFile(a / "summary.csv"), ReadFile(b / "summary.csv"));
  EXPECT_EQ(results.rfind("experiment,n,seed,method,num_points,objective,reference_objective,"
                          "error,status\n",
                          0),
            0u);
  EXPECT_EQ(ReadFile(a / "summary.csv").rfind("experiment,n,ignore-interaction,net,cube,sphere\n", 0),
            0u);
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST(RunSuiteTest, EmptyExperimentsAndTimingColumn) {
  BenchConfig config;
  config.seeds = {0};
  config.timing = true;
  const std::filesystem::path dir = TempDir("suite_empty");
  RunSuite(config, dir.string());
  EXPECT_EQ(ReadFile(dir / "results.csv"),
            "experiment,n,seed,method,num_points,objective,reference_objective,error,status,"
            "seconds\n");
  EXPECT_EQ(ReadFile(dir / "summary.csv"), "experiment,n\n");
  std::filesystem::remove_all(dir);
}

TEST(RunSuiteTest, RejectsInvalidConfigs) {
  BenchConfig config;
  config.sampler_dims = {3};
  EXPECT_THROW(RunSuite(config, TempDir("bad").string()), InvalidArgumentError);
  config.seeds = {0};
  config.samplers.clear();
  EXPECT_THROW(RunSuite(config, TempDir("bad").string()), InvalidArgumentError);
  config.samplers = {BoundarySampler::kNet};
  config.sampler_dims = {1};
  EXPECT_THROW(RunSuite(config, TempDir("bad").string()), InvalidArgumentError);
}

}  // namespace
}  // namespace moo
