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

#include "moo/primal_recovery.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "moo/error.h"
#include "moo/random.h"

namespace moo {

double ServingDistribution::MaxViolation() const {
  double worst = 0.0;
  for (int v = 0; v < x.size(); ++v) {
    worst = std::max({worst, -x[v], x[v] - 1.0});
  }
  for (int i = 0; i < num_users; ++i) {
    for (int k = 0; k < num_slots; ++k) {
      double sum = 0.0;
      for (int j = 0; j < num_items; ++j) sum += at(i, j, k);
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    for (int j = 0; j < num_items; ++j) {
      double sum = 0.0;
      for (int k = 0; k < num_slots; ++k) sum += at(i, j, k);
      worst = std::max(worst, sum - 1.0);
    }
  }
  return worst;
}

QpSolution ProjectLocal(const Eigen::VectorXd& point, const LocalPolytope& polytope) {
  if (point.size() != polytope.dimension()) {
    throw InvalidArgumentError("ProjectLocal: point has dimension " +
                               std::to_string(point.size()) + ", expected " +
                               std::to_string(polytope.dimension()));
  }
  const LocalPolytope::DenseSystem system = polytope.Dense();
  QpProblem qp;
  qp.hessian = Eigen::MatrixXd::Identity(point.size(), point.size());
  qp.linear = -point;
  qp.eq_matrix = system.eq_matrix;
  qp.eq_rhs = system.eq_rhs;
  qp.ineq_matrix = system.ineq_matrix;
  qp.ineq_rhs = system.ineq_rhs;
  return SolveDenseQp(qp);
}

RecoveryResult RecoverPrimal(const DualSolution& dual, const RankingProblem& problem,
                             const RecoveryOptions& options) {
  const int jk = problem.slate_dimension();
  const int local_rows = 2 * jk + 2 * problem.num_slots() + 2 * problem.num_items();
  if (dual.y.size() != 2 + problem.num_users() * local_rows) {
    throw InvalidArgumentError("RecoverPrimal: dual vector does not match the problem");
  }
  if (!dual.converged && !options.allow_unconverged) {
    throw InvalidArgumentError(
        "RecoverPrimal: dual solution did not converge (set allow_unconverged to proceed)");
  }
  const LocalPolytope polytope = LocalPolytope::Create(problem.num_items(), problem.num_slots());
  const Eigen::VectorXd target = (dual.y[0] * problem.dollar() +
                                  dual.y[1] * problem.impression_flag() + problem.click_prob()) /
                                 problem.gamma();
  RecoveryResult out;
  out.from_unconverged_dual = !dual.converged;
  out.distribution.num_users = problem.num_users();
  out.distribution.num_items = problem.num_items();
  out.distribution.num_slots = problem.num_slots();
  out.distribution.x.resize(problem.dimension());
  for (int i = 0; i < problem.num_users(); ++i) {
    const QpSolution projection = ProjectLocal(target.segment(i * jk, jk), polytope);
    out.distribution.x.segment(i * jk, jk) = projection.x;
    out.max_kkt_residual = std::max(out.max_kkt_residual, projection.kkt.Max());
  }
  return out;
}

ServingPlan SampleServingPlan(const ServingDistribution& distribution, std::uint64_t seed,
                              int resample_cap) {
  const int n = distribution.num_users;
  const int items = distribution.num_items;
  const int slots = distribution.num_slots;
  if (slots > items) throw InvalidArgumentError("SampleServingPlan: K > J");
  if (distribution.x.size() != static_cast<Eigen::Index>(n) * items * slots) {
    throw InvalidArgumentError("SampleServingPlan: distribution has the wrong size");
  }
  if (resample_cap < 0) throw InvalidArgumentError("SampleServingPlan: negative resample cap");
  ServingPlan plan;
  plan.num_users = n;
  plan.num_slots = slots;
  plan.items.assign(static_cast<std::size_t>(n) * slots, -1);
  std::vector<double> weights(items);
  for (int i = 0; i < n; ++i) {
    Rng rng(StreamSeed(seed, static_cast<std::uint64_t>(i)));
    std::vector<bool> used(items, false);
    bool fallback = false;
    for (int k = 0; k < slots; ++k) {
      double total = 0.0;
      for (int j = 0; j < items; ++j) {
        weights[j] = std::max(0.0, distribution.at(i, j, k));
        total += weights[j];
      }
      auto draw = [&](const std::vector<double>& w, double sum) {
        const double u = rng.Uniform() * sum;
        double acc = 0.0;
        int last_positive = -1;
        for (int j = 0; j < items; ++j) {
          if (w[j] <= 0.0) continue;
          acc += w[j];
          last_positive = j;
          if (u < acc) return j;
        }
        return last_positive;
      };
      int chosen = -1;
      if (total > 0.0) {
        for (int attempt = 0; attempt <= resample_cap; ++attempt) {
          const int j = draw(weights, total);
          if (!used[j]) {
            chosen = j;
            break;
          }
        }
      }
      if (chosen < 0) {
        fallback = true;
        std::vector<double> rest(items, 0.0);
        double rest_total = 0.0;
        for (int j = 0; j < items; ++j) {
          if (!used[j]) {
            rest[j] = weights[j];
            rest_total += weights[j];
          }
        }
        if (rest_total <= 0.0) {
          for (int j = 0; j < items; ++j) rest[j] = used[j] ? 0.0 : 1.0;
          rest_total = items - k;
        }
        chosen = draw(rest, rest_total);
      }
      used[chosen] = true;
      plan.items[static_cast<std::size_t>(i) * slots + k] = chosen;
    }
    if (fallback) plan.fallback_users.push_back(i);
  }
  return plan;
}

}  // namespace moo
