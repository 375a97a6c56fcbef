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

#include "moo/serialization.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>

#include "moo/error.h"
#include "moo/random.h"

namespace moo {
namespace {

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("moo_serial_" + name)).string();
}

TEST(ProblemJsonTest, RoundTripIsBitExact) {
  RandomProblemOptions options;
  options.num_users = 3;
  options.num_items = 4;
  options.num_slots = 2;
  options.gamma = 0.7;
  const RankingProblem problem = RandomProblem(options, 5);
  const std::string path = TempPath("problem.json");
  WriteJsonFile(path, ProblemToJson(problem));
  const RankingProblem back = ProblemFromJson(ReadJsonFile(path));
  EXPECT_EQ(back.click_prob(), problem.click_prob());
  EXPECT_EQ(back.dollar(), problem.dollar());
  EXPECT_EQ(back.impression_flag(), problem.impression_flag());
  EXPECT_EQ(back.revenue_threshold(), problem.revenue_threshold());
  EXPECT_EQ(back.impression_threshold(), problem.impression_threshold());
  EXPECT_EQ(back.gamma(), problem.gamma());
  EXPECT_EQ(back.sponsored(), problem.sponsored());
  EXPECT_EQ(back.impression(), problem.impression());
  std::filesystem::remove(path);
}

TEST(ProblemJsonTest, MalformedInput) {
  EXPECT_THROW(ProblemFromJson(Json::object()), InvalidArgumentError);
  RandomProblemOptions options;
  Json value = ProblemToJson(RandomProblem(options, 1));
  value["p"] = "not an array";
  EXPECT_THROW(ProblemFromJson(value), InvalidArgumentError);
  value = ProblemToJson(RandomProblem(options, 1));
  value["p"].erase(0);
  EXPECT_THROW(ProblemFromJson(value), InvalidArgumentError);
  EXPECT_THROW(ReadJsonFile(TempPath("does_not_exist.json")), Error);
  const std::string path = TempPath("broken.json");
  std::ofstream(path) << "{\"n\": ";
  EXPECT_THROW(ReadJsonFile(path), Error);
  std::filesystem::remove(path);
}

TEST(DualJsonTest, RoundTrip) {
  DualSolution dual;
  dual.y = Eigen::Vector4d(0.1, 0.0, 1.0 / 3.0, 2.5);
  dual.mu0 = 0.1;
  dual.mu1 = 0.0;
  dual.eta = dual.y.tail(2);
  dual.converged = true;
  dual.iterations = 17;
  const DualSolution back = DualFromJson(DualToJson(dual));
  EXPECT_EQ(back.y, dual.y);
  EXPECT_EQ(back.mu0, dual.mu0);
  EXPECT_EQ(back.eta, dual.eta);
  EXPECT_TRUE(back.converged);
  EXPECT_EQ(back.iterations, 17);
}

TEST(InteractionJsonTest, BlockRoundTripAndModel) {
  InteractionBlock block;
  block.num_items = 2;
  block.num_slots = 2;
  block.p_tilde = {0.5, 0.9};
  Eigen::Matrix2d cross;
  cross << 0.0, 0.3, -0.2, 0.0;
  block.cross = {cross};
  block.slot_weights = {1.0, 0.5};
  const InteractionBlock back = InteractionBlockFromJson(InteractionBlockToJson(block));
  EXPECT_EQ(AssembleBlock(back), AssembleBlock(block));

  Json model = {{"epsilon", 0.25}, {"blocks", {InteractionBlockToJson(block)}}};
  const InteractionModel m = InteractionModelFromJson(model);
  EXPECT_EQ(m.num_blocks(), 1);
  EXPECT_EQ(m.epsilon(), 0.25);
  EXPECT_EQ(InteractionModelFromJson(InteractionBlockToJson(block)).epsilon(), 1e-3);

  Json bad = InteractionBlockToJson(block);
  bad["p_tilde"] = {0.5};
  EXPECT_THROW(InteractionBlockFromJson(bad), InvalidArgumentError);
}

TEST(QcqpJsonTest, RoundTripWithInfiniteBounds) {
  Rng rng(3);
  QcqpInstance instance;
  const Eigen::MatrixXd g = rng.NormalMatrix(3, 3);
  instance.objective = SpdMatrix::Dense(g.transpose() * g + Eigen::MatrixXd::Identity(3, 3));
  instance.objective_center = rng.NormalVector(3);
  instance.constraint =
      Ellipsoid(SpdMatrix::Diagonal(Eigen::Vector3d(1.0, 2.0, 3.0)), rng.NormalVector(3), 1.5);
  instance.eq_matrix = Eigen::MatrixXd::Ones(1, 3);
  instance.eq_rhs = Eigen::VectorXd::Constant(1, 0.5);
  instance.ineq_matrix = Eigen::MatrixXd(0, 3);
  instance.ineq_rhs = Eigen::VectorXd(0);
  const double inf = std::numeric_limits<double>::infinity();
  instance.lower = Eigen::Vector3d(-inf, 0.0, -1.0);
  instance.upper = Eigen::Vector3d(inf, 1.0, inf);
  const Json value = QcqpToJson(instance);
  EXPECT_TRUE(value["lower"][0].is_null());
  const QcqpInstance back = QcqpFromJson(value);
  EXPECT_EQ(back.objective.ToDense(), instance.objective.ToDense());
  EXPECT_EQ(back.objective_center, instance.objective_center);
  EXPECT_TRUE(back.constraint.shape().is_diagonal());
  EXPECT_EQ(back.constraint.center(), instance.constraint.center());
  EXPECT_EQ(back.constraint.level(), 1.5);
  EXPECT_EQ(back.eq_matrix, instance.eq_matrix);
  EXPECT_EQ(back.eq_rhs, instance.eq_rhs);
  EXPECT_EQ(back.lower, instance.lower);
  EXPECT_EQ(back.upper, instance.upper);

  Json bad = value;
  bad.erase("constraint");
  EXPECT_THROW(QcqpFromJson(bad), InvalidArgumentError);
}

TEST(EllipsoidJsonTest, DenseAndDiagonalForms) {
  const Json dense = Json::parse(R"({"B": [[2, 0.5], [0.5, 1]], "center": [1, 0], "level": 2})");
  const Ellipsoid e = EllipsoidFromJson(dense);
  EXPECT_FALSE(e.shape().is_diagonal());
  EXPECT_EQ(e.shape().ToDense()(0, 1), 0.5);
  const Ellipsoid back = EllipsoidFromJson(EllipsoidToJson(e));
  EXPECT_EQ(back.shape().ToDense(), e.shape().ToDense());
  const Json diag = Json::parse(R"({"B_diag": [1, 4], "center": [0, 0], "level": 1})");
  EXPECT_TRUE(EllipsoidFromJson(diag).shape().is_diagonal());
  EXPECT_THROW(EllipsoidFromJson(Json::parse(R"({"B": [[1, 2]], "center": [0], "level": 1})")),
               InvalidArgumentError);
}

TEST(BenchConfigJsonTest, DefaultsAndFields) {
  const BenchConfig empty = BenchConfigFromJson(Json::object());
  EXPECT_TRUE(empty.interaction_dims.empty());
  EXPECT_EQ(empty.samplers.size(), 3u);
  EXPECT_EQ(empty.timeout_seconds, 600.0);
  const BenchConfig config = BenchConfigFromJson(Json::parse(
      R"({"sampler_dims": [5], "seeds": [1, 2], "samplers": ["net"], "schedule": [16, 64],
          "timing": true, "interaction": {"epsilon": 0.5}})"));
  EXPECT_EQ(config.sampler_dims, std::vector<int>{5});
  EXPECT_EQ(config.seeds.size(), 2u);
  EXPECT_EQ(config.samplers, std::vector<BoundarySampler>{BoundarySampler::kNet});
  EXPECT_EQ(config.schedule, (std::vector<int>{16, 64}));
  EXPECT_TRUE(config.timing);
  EXPECT_EQ(config.interaction.epsilon, 0.5);
  EXPECT_THROW(BenchConfigFromJson(Json::parse(R"({"samplers": ["grid"]})")),
               InvalidArgumentError);
}

TEST(PointsCsvTest, RoundTripAndErrors) {
  Rng rng(9);
  const Eigen::MatrixXd points = rng.NormalMatrix(7, 3);
  const std::string path = TempPath("points.csv");
  WritePointsCsv(path, points);
  EXPECT_EQ(ReadPointsCsv(path), points);
  std::ofstream(path) << "1,2,3\n4,5\n";
  EXPECT_THROW(ReadPointsCsv(path), Error);
  std::ofstream(path) << "1,x\n";
  EXPECT_THROW(ReadPointsCsv(path), Error);
  std::filesystem::remove(path);
}

TEST(PlanCsvTest, Format) {
  ServingPlan plan;
  plan.num_users = 2;
  plan.num_slots = 2;
  plan.items = {3, 1, 0, 2};
  const std::string path = TempPath("plan.csv");
  WritePlanCsv(path, plan);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "user,slot,item\n0,0,3\n0,1,1\n1,0,0\n1,1,2\n");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace moo
