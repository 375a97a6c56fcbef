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

#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "moo/bench.h"
#include "moo/dual_solver.h"
#include "moo/interaction.h"
#include "moo/lowdisc.h"
#include "moo/oracle.h"
#include "moo/primal_recovery.h"
#include "moo/problem_model.h"
#include "moo/qcqp.h"
#include "moo/random.h"

namespace moo {
namespace {

RankingProblem MakeProblem(int users) {
  RandomProblemOptions options;
  options.num_users = users;
  options.num_items = 5;
  options.num_slots = 2;
  options.threshold_scale = 0.9;
  return RandomProblem(options, 11);
}

void BM_DualSolve(benchmark::State& state) {
  const RankingProblem problem = MakeProblem(static_cast<int>(state.range(0)));
  const StackedSystem system = StackedSystem::Assemble(problem);
  DualSolverOptions options;
  options.algorithm = state.range(1) == 0 ? DualAlgorithm::kProjectedGradient
                                          : DualAlgorithm::kRelaxedAdmm;
  for (auto _ : state) {
    DualSolution dual = SolveDual(system, problem.click_prob(), options);
    benchmark::DoNotOptimize(dual.y.data());
  }
  state.SetLabel(options.algorithm == DualAlgorithm::kProjectedGradient ? "pg" : "admm");
}
BENCHMARK(BM_DualSolve)->ArgsProduct({{10, 100, 1000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_RecoverPrimal(benchmark::State& state) {
  const RankingProblem problem = MakeProblem(static_cast<int>(state.range(0)));
  const DualSolution dual = SolveDual(StackedSystem::Assemble(problem), problem.click_prob());
  for (auto _ : state) {
    RecoveryResult r = RecoverPrimal(dual, problem);
    benchmark::DoNotOptimize(r.distribution.x.data());
  }
}
BENCHMARK(BM_RecoverPrimal)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MinEigenvalue(benchmark::State& state) {
  BlockGeneratorOptions options;
  options.num_items = static_cast<int>(state.range(0));
  options.num_slots = 3;
  options.cross_min = -0.5;
  options.cross_max = 0.5;
  const Eigen::MatrixXd q = AssembleBlock(RandomInteractionBlock(options, 5));
  for (auto _ : state) benchmark::DoNotOptimize(MinEigenvalue(q));
}
BENCHMARK(BM_MinEigenvalue)->Arg(5)->Arg(20)->Arg(60);

void BM_DigitalNet(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int s = static_cast<int>(state.range(1));
  for (auto _ : state) {
    PointSet net = DigitalNet(m, s);
    benchmark::DoNotOptimize(net.points.data());
  }
}
BENCHMARK(BM_DigitalNet)->Args({10, 4})->Args({10, 49})->Args({14, 9});

void BM_MapToSphere(benchmark::State& state) {
  const PointSet net = DigitalNet(10, static_cast<int>(state.range(0)));
  const HeightMap heights = state.range(1) == 0 ? HeightMap::kEqualArea : HeightMap::kLinear;
  for (auto _ : state) {
    PointSet sphere = MapToSphere(net, heights);
    benchmark::DoNotOptimize(sphere.points.data());
  }
}
BENCHMARK(BM_MapToSphere)->ArgsProduct({{4, 19, 49}, {0, 1}});

void BM_ExactQcqp(benchmark::State& state) {
  const QcqpInstance instance = GenerateSamplerInstance(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    OracleSolution s = ExactQcqp(instance);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_ExactQcqp)->Arg(5)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_LinearizeAndSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const QcqpInstance instance = GenerateSamplerInstance(n, 3);
  SolveOptions solve;
  solve.polish = false;
  for (auto _ : state) {
    SolveReport report = SolveLinearized(Linearize(instance, DefaultNumPoints(n)), solve);
    benchmark::DoNotOptimize(report.x.data());
  }
}
BENCHMARK(BM_LinearizeAndSolve)->Arg(5)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_DiagonalLinearized(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(9);
  QcqpInstance instance;
  Eigen::VectorXd a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = rng.Uniform(1.0, 2.0);
    b[i] = rng.Uniform(1.0, 2.0);
  }
  instance.objective = SpdMatrix::Diagonal(a);
  instance.objective_center = Eigen::VectorXd::Constant(n, 2.0);
  instance.constraint = Ellipsoid(SpdMatrix::Diagonal(b), Eigen::VectorXd::Zero(n), n * 0.5);
  instance.lower = Eigen::VectorXd::Constant(n, -1.0);
  instance.upper = Eigen::VectorXd::Constant(n, 1.0);
  LinearizeOptions linearize;
  linearize.boundary.sampler = BoundarySampler::kSphere;
  linearize.boundary.seed = 1;
  linearize.allow_unbounded_cover = true;
  SolveOptions solve;
  solve.polish = false;
  solve.tolerance = 1e-6;
  for (auto _ : state) {
    SolveReport report = SolveLinearized(Linearize(instance, 256, linearize), solve);
    benchmark::DoNotOptimize(report.x.data());
  }
}
BENCHMARK(BM_DiagonalLinearized)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace moo

BENCHMARK_MAIN();
