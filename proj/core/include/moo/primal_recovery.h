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

// Primal serving probabilities from dual multipliers, and sampled serving
// plans.

#ifndef MOO_PRIMAL_RECOVERY_H_
#define MOO_PRIMAL_RECOVERY_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "moo/dual_solver.h"
#include "moo/problem_model.h"
#include "moo/qp.h"

namespace moo {

struct ServingDistribution {
  int num_users = 0;
  int num_items = 0;
  int num_slots = 0;
  // Flat layout (i * J + j) * K + k.
  Eigen::VectorXd x;

  double at(int user, int item, int slot) const {
    return x[(user * num_items + item) * num_slots + slot];
  }
  // Largest violation of 0 <= x <= 1, sum_j x = 1, sum_k x <= 1.
  double MaxViolation() const;
};

// Euclidean projection onto one user's local polytope, solved exactly by the
// dual active-set method with the slot equalities kept as equalities. The
// solution carries its KKT residuals.
QpSolution ProjectLocal(const Eigen::VectorXd& point, const LocalPolytope& polytope);

struct RecoveryOptions {
  // Accept a dual solution that did not converge; the result is flagged.
  bool allow_unconverged = false;
};

struct RecoveryResult {
  ServingDistribution distribution;
  // Largest KKT residual over the per-user projections.
  double max_kkt_residual = 0.0;
  bool from_unconverged_dual = false;
};

// x_i = projection of (mu0 $ + mu1 d + p)_i / gamma onto the local polytope,
// for every user. Throws InvalidArgumentError for a non-converged dual unless
// allowed, and on dimension mismatch.
RecoveryResult RecoverPrimal(const DualSolution& dual, const RankingProblem& problem,
                             const RecoveryOptions& options = {});

struct ServingPlan {
  int num_users = 0;
  int num_slots = 0;
  // Row-major n x K item indices.
  std::vector<int> items;
  // Users for which some slot exhausted the resample cap and fell back to
  // renormalized sampling over unused items.
  std::vector<int> fallback_users;

  int item(int user, int slot) const { return items[user * num_slots + slot]; }
};

inline constexpr int kDefaultResampleCap = 100;

// For each user, slots k = 0..K-1 in order: draw j with probability
// proportional to x_{ijk}, redrawing while j is already in the slate, at
// most `resample_cap` times per slot. Every user draws from its own stream
// StreamSeed(seed, i), so plans do not depend on evaluation order.
ServingPlan SampleServingPlan(const ServingDistribution& distribution, std::uint64_t seed,
                              int resample_cap = kDefaultResampleCap);

}  // namespace moo

#endif  // MOO_PRIMAL_RECOVERY_H_
