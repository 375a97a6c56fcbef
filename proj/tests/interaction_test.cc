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

#include "moo/interaction.h"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "moo/error.h"
#include "moo/oracle.h"
#include "moo/random.h"

namespace moo {
namespace {

Eigen::MatrixXd RandomSymmetric(int n, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::MatrixXd g = rng.NormalMatrix(n, n);
  return 0.5 * (g + g.transpose());
}

double EigenMin(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
}

TEST(AssembleBlockTest, DiagonalAndCrossPattern) {
  InteractionBlock block;
  block.num_items = 2;
  block.num_slots = 2;
  block.p_tilde = {0.5, 0.8};
  Eigen::Matrix2d cross;
  cross << 0.0, 0.1, 0.2, 0.0;
  block.cross = {cross};
  const Eigen::MatrixXd q = AssembleBlock(block);
  Eigen::Matrix4d expected;
  expected << 0.5, 0.0, 0.0, 0.1,  //
      0.0, 0.5, 0.2, 0.0,          //
      0.0, 0.2, 0.8, 0.0,          //
      0.1, 0.0, 0.0, 0.8;
  EXPECT_EQ(q, expected);

  block.slot_weights = {1.0, 0.5};
  EXPECT_EQ(AssembleBlock(block)(1, 1), 0.25);
  EXPECT_EQ(AssembleBlock(block)(3, 3), 0.4);
}

TEST(AssembleBlockTest, RejectsInvalidBlocks) {
  InteractionBlock block;
  block.num_items = 2;
  block.num_slots = 2;
  block.p_tilde = {0.5, 1.5};
  EXPECT_THROW(AssembleBlock(block), InvalidArgumentError);
  block.p_tilde = {0.5, 0.0};
  EXPECT_THROW(AssembleBlock(block), InvalidArgumentError);
  block.p_tilde = {0.5, 0.5};
  block.cross = {Eigen::Matrix2d::Identity()};
  EXPECT_THROW(AssembleBlock(block), InvalidArgumentError);
}

TEST(MinEigenvalueTest, MatchesEigenSolver) {
  for (int n : {1, 2, 5, 16, 40}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Eigen::MatrixXd m = RandomSymmetric(n, seed * 100 + n);
      EXPECT_NEAR(MinEigenvalue(m), EigenMin(m), 1e-12 * std::max(1.0, m.norm()));
    }
  }
  EXPECT_NEAR(MinEigenvalue(Eigen::Matrix2d((Eigen::Matrix2d() << 0, 1, 1, 0).finished())), -1.0,
              1e-14);
}

TEST(RepairTest, ClosedFormExamples) {
  // eigenvalues -1 and 1.
  const Eigen::Matrix2d q = (Eigen::Matrix2d() << 0, 1, 1, 0).finished();
  const RepairResult r = RepairPositiveDefinite(q, 0.5);
  EXPECT_TRUE(r.repaired);
  EXPECT_NEAR(r.shift, 1.5, 1e-13);
  EXPECT_NEAR(r.matrix(0, 0), 1.5, 1e-13);
  EXPECT_EQ(r.matrix(0, 1), 1.0);
  EXPECT_NEAR(r.min_eigenvalue_after, 0.5, 1e-12);

  const RepairResult untouched = RepairPositiveDefinite(Eigen::Matrix2d::Identity(), 0.5);
  EXPECT_FALSE(untouched.repaired);
  EXPECT_EQ(untouched.shift, 0.0);
  EXPECT_EQ(untouched.matrix, Eigen::MatrixXd(Eigen::Matrix2d::Identity()));

  // Zero eigenvalue is below the trigger.
  const Eigen::Matrix2d singular = (Eigen::Matrix2d() << 1, 1, 1, 1).finished();
  EXPECT_TRUE(RepairPositiveDefinite(singular, 0.1).repaired);
}

TEST(RepairTest, RejectsBadInput) {
  EXPECT_THROW(RepairPositiveDefinite(Eigen::Matrix2d::Identity(), 0.0), InvalidArgumentError);
  const Eigen::Matrix2d asym = (Eigen::Matrix2d() << 1, 2, 0, 1).finished();
  EXPECT_THROW(RepairPositiveDefinite(asym, 0.1), InvalidArgumentError);
}

TEST(RepairTest, MinimalAmongDiagonalShifts) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::MatrixXd q = RandomSymmetric(6, seed);
    const RepairResult r = RepairPositiveDefinite(q, 0.2);
    ASSERT_TRUE(r.repaired);
    const Eigen::MatrixXd diff = r.matrix - q;
    EXPECT_LE((diff - Eigen::MatrixXd(diff.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_GE(EigenMin(r.matrix), 0.2 - 1e-9);
    // Any smaller uniform shift falls short of epsilon.
    const Eigen::MatrixXd smaller =
        q + (r.shift - 1e-6) * Eigen::MatrixXd::Identity(6, 6);
    EXPECT_LT(EigenMin(smaller), 0.2);
  }
}

TEST(InteractionModelTest, BlockDiagonalApply) {
  const std::vector<Eigen::MatrixXd> blocks = {RandomSymmetric(4, 1), RandomSymmetric(4, 2)};
  const InteractionModel model = InteractionModel::Create(blocks, 0.3);
  EXPECT_EQ(model.dimension(), 8);
  EXPECT_GE(model.MinEigenvalue(), 0.3 - 1e-9);
  EXPECT_GE(EigenMin(model.ToDense()), 0.3 - 1e-9);
  Rng rng(3);
  const Eigen::VectorXd x = rng.NormalVector(8);
  EXPECT_LE((model.Apply(x) - model.ToDense() * x).cwiseAbs().maxCoeff(), 1e-13);
  const Eigen::MatrixXd dense = model.ToDense();
  EXPECT_EQ(dense.block(0, 4, 4, 4), Eigen::MatrixXd::Zero(4, 4));
  const Eigen::MatrixXd diag = model.DiagonalPart().ToDense();
  EXPECT_EQ(diag, Eigen::MatrixXd(dense.diagonal().asDiagonal()));
}

TEST(EllipsoidFormTest, QuadraticIdentityHolds) {
  Rng rng(8);
  const Eigen::MatrixXd g = rng.NormalMatrix(4, 4);
  const Eigen::MatrixXd q_r = g.transpose() * g + Eigen::MatrixXd::Identity(4, 4);
  const Eigen::VectorXd c = rng.NormalVector(4);
  const double threshold = 2.0;
  const Ellipsoid e = ToEllipsoidConstraint(q_r, threshold, c);
  // x'Q_r x - 2 c'Q_r x <= P  <=>  x in e.
  for (int t = 0; t < 10000; ++t) {
    const Eigen::VectorXd x = 2.0 * rng.NormalVector(4);
    const double lhs = x.dot(q_r * x) - 2.0 * c.dot(q_r * x);
    if (std::abs(lhs - threshold) < 1e-9) continue;
    EXPECT_EQ(e.Contains(x), lhs <= threshold);
  }
  EXPECT_THROW(ToEllipsoidConstraint(-q_r, threshold, c), NumericalError);
  EXPECT_THROW(ToEllipsoidConstraint(q_r, -1000.0, Eigen::VectorXd::Zero(4)),
               InvalidArgumentError);
}

TEST(EllipsoidFormTest, DependentResponseAgreesWithSampling) {
  Rng rng(12);
  const Eigen::MatrixXd g = rng.NormalMatrix(3, 3);
  const Eigen::MatrixXd q_p = g.transpose() * g + 0.5 * Eigen::MatrixXd::Identity(3, 3);
  DependentResponse f;
  f.scale = 0.7;
  f.shift = rng.NormalVector(3);
  const double threshold = 1.3;
  const Ellipsoid e = DependentResponseConstraint(q_p, f, threshold);
  int inside = 0;
  for (int t = 0; t < 10000; ++t) {
    const Eigen::VectorXd x = 1.5 * rng.NormalVector(3);
    const double value = x.dot(f.Apply(-q_p * x));
    if (std::abs(value - threshold) < 1e-9) continue;
    ASSERT_EQ(e.Contains(x), value <= threshold) << t;
    inside += value <= threshold;
  }
  EXPECT_GT(inside, 100);
}

TEST(BuildQcqpTest, ObjectiveAndConstraint) {
  const std::vector<Eigen::MatrixXd> p = {Eigen::MatrixXd::Identity(2, 2)};
  const std::vector<Eigen::MatrixXd> r = {2.0 * Eigen::MatrixXd::Identity(2, 2)};
  const InteractionModel q_p = InteractionModel::Create(p, 0.1);
  const InteractionModel q_r = InteractionModel::Create(r, 0.1);
  const QcqpInstance instance = BuildQcqp(q_p, q_r, 1.0, 4.0);
  const Eigen::Vector2d x(0.3, -0.4);
  EXPECT_NEAR(instance.Objective(x), 1.5 * x.squaredNorm(), 1e-14);
  EXPECT_TRUE(instance.constraint.Contains(Eigen::Vector2d(1.4, 0.0)));
  EXPECT_FALSE(instance.constraint.Contains(Eigen::Vector2d(1.5, 0.0)));
  EXPECT_EQ(instance.num_linear_rows(), 0);
}

TEST(RandomBlockTest, RepairedBlocksArePositiveDefinite) {
  BlockGeneratorOptions options;
  options.num_items = 4;
  options.num_slots = 3;
  options.cross_min = -0.5;
  options.cross_max = 0.5;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const InteractionBlock block = RandomInteractionBlock(options, seed);
    ASSERT_EQ(block.dimension(), 12);
    const Eigen::MatrixXd q = AssembleBlock(block);
    const InteractionModel model = InteractionModel::Create({q}, 1e-3);
    EXPECT_GE(EigenMin(model.ToDense()), 1e-3 - 1e-9);
    EXPECT_TRUE(Eigen::LLT<Eigen::MatrixXd>(model.ToDense()).info() == Eigen::Success);
  }
}

TEST(RandomBlockTest, DeterministicInSeed) {
  BlockGeneratorOptions options;
  const InteractionBlock a = RandomInteractionBlock(options, 9);
  const InteractionBlock b = RandomInteractionBlock(options, 9);
  EXPECT_EQ(AssembleBlock(a), AssembleBlock(b));
}

}  // namespace
}  // namespace moo
