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

// Experiment generators and the benchmark suite runner: interaction-ignoring
// error curves and boundary-sampler comparisons against the exact oracle.

#ifndef MOO_BENCH_H_
#define MOO_BENCH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "moo/interaction.h"
#include "moo/lowdisc.h"
#include "moo/qcqp.h"

namespace moo {

// Single-user instance with J = num_items items and `num_slots` slots over
// the local polytope, interaction blocks from RandomInteractionBlock.
struct InteractionExperimentOptions {
  int num_slots = 2;
  double gamma = 1.0;
  // Repair slack for Q_p and Q_r.
  double epsilon = 2.0;
  // Cross-slot effects are drawn from U[cross_min, cross_max]; negative
  // entries model substitution between items shown together.
  double cross_min = -0.3;
  double cross_max = 0.3;
  double p_tilde_min = 0.2;
  double p_tilde_max = 1.0;
  // P = threshold_factor * u'Q_r u at the uniform slate u.
  double threshold_factor = 1.5;
};

struct InteractionExperimentInstance {
  // Interaction-aware problem: minimize x'(Q_p + gamma/2 I)x subject to
  // x'Q_r x <= P and the local polytope.
  QcqpInstance truth;
  // Same problem with Q_p, Q_r replaced by their diagonals, i.e. the
  // single-slot estimates. Coincides with truth when there is no interaction.
  QcqpInstance naive;
};

InteractionExperimentInstance GenerateInteractionInstance(
    int num_items, std::uint64_t seed, const InteractionExperimentOptions& options = {});

struct InteractionErrorRow {
  int n = 0;
  std::uint64_t seed = 0;
  // f* and f(x_hat), both under the true objective.
  double true_objective = 0.0;
  double naive_objective = 0.0;
  // (f(x_hat) - f*) / f*.
  double relative_error = 0.0;
  // (x_hat - b)' B (x_hat - b) - level under the true constraint (> 0 means
  // the naive solution breaks the true constraint).
  double naive_violation = 0.0;
  double seconds = 0.0;
};

InteractionErrorRow RunInteractionCell(int num_items, std::uint64_t seed,
                                       const InteractionExperimentOptions& options = {});

// Random box-constrained instance for sampler comparisons:
//   A, B = (G'G / n + I) with Gaussian G, ellipsoid centered at x0 ~ U[0.5, 1.5]^n
//   with level 0.25 x0'Bx0, objective center 0, bounds [0, 2]^n.
QcqpInstance GenerateSamplerInstance(int dimension, std::uint64_t seed);

struct SamplerErrorRow {
  int n = 0;
  std::uint64_t seed = 0;
  BoundarySampler sampler = BoundarySampler::kNet;
  int num_points = 0;
  double objective = 0.0;
  double oracle_objective = 0.0;
  // |x*(N) - x*| / |x*|.
  double relative_error = 0.0;
  double seconds = 0.0;
  std::vector<TracePoint> trace;
};

// Solves P(N) with the given sampler (N = DefaultNumPoints(n) when
// num_points is 0) and compares with the exact oracle. A non-empty schedule
// produces a refinement trace ending at its last entry instead.
SamplerErrorRow RunSamplerCell(const QcqpInstance& instance, int n, std::uint64_t seed,
                               BoundarySampler sampler, int num_points,
                               const std::vector<int>& schedule = {});

struct BenchConfig {
  std::vector<int> interaction_dims;
  std::vector<int> sampler_dims;
  std::vector<std::uint64_t> seeds;
  std::vector<BoundarySampler> samplers = {BoundarySampler::kNet, BoundarySampler::kCube,
                                           BoundarySampler::kSphere};
  // 0 selects DefaultNumPoints.
  int num_points = 0;
  // Optional refinement schedule; writes trace_<id>.csv per sampler cell.
  std::vector<int> schedule;
  InteractionExperimentOptions interaction;
  // Adds a seconds column; off by default so outputs are reproducible.
  bool timing = false;
  // Cells not started within this budget are reported as "timeout".
  double timeout_seconds = 600.0;
};

// Writes results.csv, summary.csv (medians per experiment, n and method) and
// trace files into `output_dir`, creating it if needed. Throws
// InvalidArgumentError for an invalid config and Error if the directory is
// not writable.
void RunSuite(const BenchConfig& config, const std::string& output_dir);

}  // namespace moo

#endif  // MOO_BENCH_H_
