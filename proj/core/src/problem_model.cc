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

#include "moo/problem_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "moo/error.h"
#include "moo/random.h"

namespace moo {
namespace {

using Triplet = Eigen::Triplet<double>;

void Require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgumentError(message);
}

std::set<int> ValidatedItemSet(const std::vector<int>& items, int num_items,
                               const char* name) {
  std::set<int> out;
  for (int j : items) {
    Require(j >= 0 && j < num_items,
            std::string(name) + " item index out of range: " + std::to_string(j));
    Require(out.insert(j).second,
            std::string(name) + " item listed twice: " + std::to_string(j));
  }
  return out;
}

// Triplets of K_i with row and column offsets.
void AppendLocalTriplets(int num_items, int num_slots, int row_offset,
                         int col_offset, double sign, bool transpose,
                         std::vector<Triplet>& out) {
  const int jk = num_items * num_slots;
  auto emit = [&](int row, int col, double value) {
    if (transpose) {
      out.emplace_back(col_offset + col, row_offset + row, sign * value);
    } else {
      out.emplace_back(row_offset + row, col_offset + col, sign * value);
    }
  };
  for (int v = 0; v < jk; ++v) {
    emit(v, v, 1.0);
    emit(jk + v, v, -1.0);
  }
  for (int j = 0; j < num_items; ++j) {
    for (int k = 0; k < num_slots; ++k) {
      const int v = j * num_slots + k;
      emit(2 * jk + k, v, 1.0);
      emit(2 * jk + num_slots + k, v, -1.0);
      emit(2 * jk + 2 * num_slots + j, v, 1.0);
      emit(2 * jk + 2 * num_slots + num_items + j, v, -1.0);
    }
  }
}

Eigen::VectorXd LocalBound(int num_items, int num_slots) {
  const int jk = num_items * num_slots;
  Eigen::VectorXd b(2 * jk + 2 * num_slots + 2 * num_items);
  b.segment(0, jk).setOnes();
  b.segment(jk, jk).setZero();
  b.segment(2 * jk, num_slots).setOnes();
  b.segment(2 * jk + num_slots, num_slots).setConstant(-1.0);
  b.segment(2 * jk + 2 * num_slots, num_items).setOnes();
  b.segment(2 * jk + 2 * num_slots + num_items, num_items).setZero();
  return b;
}

}  // namespace

RankingProblem RankingProblem::Create(const ProblemConfig& config) {
  const int n = config.num_users;
  const int items = config.num_items;
  const int slots = config.num_slots;
  Require(n > 0 && items > 0 && slots > 0, "dimensions must be positive");
  Require(slots <= items, "K > J: no slate without repeated items exists");
  const int dim = n * items * slots;
  Require(static_cast<int>(config.click_prob.size()) == dim,
          "click_prob must have n*J*K entries");
  Require(static_cast<int>(config.item_value.size()) == items,
          "item_value must have J entries");
  Require(config.gamma > 0.0 && std::isfinite(config.gamma), "gamma must be positive");
  Require(std::isfinite(config.revenue_threshold) &&
              std::isfinite(config.impression_threshold),
          "thresholds must be finite");

  const std::set<int> sponsored = ValidatedItemSet(config.sponsored, items, "sponsored");
  const std::set<int> impression =
      ValidatedItemSet(config.impression, items, "impression");

  RankingProblem out;
  out.num_users_ = n;
  out.num_items_ = items;
  out.num_slots_ = slots;
  out.click_prob_ = Eigen::Map<const Eigen::VectorXd>(config.click_prob.data(), dim);
  for (int v = 0; v < dim; ++v) {
    const double p = out.click_prob_[v];
    Require(std::isfinite(p) && p >= 0.0 && p <= 1.0,
            "click probability out of [0, 1] at flat index " + std::to_string(v));
  }
  out.item_value_ = Eigen::Map<const Eigen::VectorXd>(config.item_value.data(), items);
  for (int j = 0; j < items; ++j) {
    const double c = out.item_value_[j];
    Require(std::isfinite(c) && c >= 0.0, "item values must be nonnegative");
    Require((c > 0.0) == sponsored.contains(j),
            "item value must be positive exactly on sponsored items (item " +
                std::to_string(j) + ")");
  }

  out.impression_flag_.resize(dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < items; ++j) {
      for (int k = 0; k < slots; ++k) {
        out.impression_flag_[out.Index(i, j, k)] = impression.contains(j) ? 1.0 : 0.0;
      }
    }
  }
  if (!config.impression_flag.empty()) {
    Require(static_cast<int>(config.impression_flag.size()) == dim,
            "impression_flag must have n*J*K entries");
    for (int v = 0; v < dim; ++v) {
      Require(config.impression_flag[v] == out.impression_flag_[v],
              "impression_flag disagrees with the impression item set at flat index " +
                  std::to_string(v));
    }
  }

  out.dollar_.resize(dim);
  for (int v = 0; v < dim; ++v) {
    out.dollar_[v] = out.click_prob_[v] * out.item_value_[(v / slots) % items];
  }
  out.revenue_threshold_ = config.revenue_threshold;
  out.impression_threshold_ = config.impression_threshold;
  out.gamma_ = config.gamma;
  out.sponsored_.assign(sponsored.begin(), sponsored.end());
  out.impression_.assign(impression.begin(), impression.end());
  return out;
}

double RankingProblem::Objective(const Eigen::VectorXd& x) const {
  return -x.dot(click_prob_) + 0.5 * gamma_ * x.squaredNorm();
}

ProblemConfig RankingProblem::ToConfig() const {
  ProblemConfig config;
  config.num_users = num_users_;
  config.num_items = num_items_;
  config.num_slots = num_slots_;
  config.click_prob.assign(click_prob_.begin(), click_prob_.end());
  config.item_value.assign(item_value_.begin(), item_value_.end());
  config.impression_flag.assign(impression_flag_.begin(), impression_flag_.end());
  config.revenue_threshold = revenue_threshold_;
  config.impression_threshold = impression_threshold_;
  config.gamma = gamma_;
  config.sponsored = sponsored_;
  config.impression = impression_;
  return config;
}

LocalPolytope LocalPolytope::Create(int num_items, int num_slots) {
  Require(num_slots >= 1 && num_items >= 1, "dimensions must be positive");
  Require(num_slots <= num_items, "K > J: local polytope is empty");
  LocalPolytope out;
  out.num_items_ = num_items;
  out.num_slots_ = num_slots;
  out.bound_ = LocalBound(num_items, num_slots);
  std::vector<Triplet> triplets;
  AppendLocalTriplets(num_items, num_slots, 0, 0, 1.0, false, triplets);
  out.matrix_.resize(out.bound_.size(), num_items * num_slots);
  out.matrix_.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

double LocalPolytope::MaxViolation(const Eigen::VectorXd& x) const {
  if (x.size() != dimension()) {
    throw InvalidArgumentError("LocalPolytope: point has wrong dimension");
  }
  const Eigen::VectorXd slack = matrix_ * x - bound_;
  return std::max(0.0, slack.maxCoeff());
}

bool LocalPolytope::Contains(const Eigen::VectorXd& x, double tolerance) const {
  return MaxViolation(x) <= tolerance;
}

Eigen::VectorXd LocalPolytope::UniformPoint() const {
  return Eigen::VectorXd::Constant(dimension(), 1.0 / num_items_);
}

LocalPolytope::DenseSystem LocalPolytope::Dense() const {
  const int jk = dimension();
  DenseSystem out;
  out.eq_matrix = Eigen::MatrixXd::Zero(num_slots_, jk);
  out.eq_rhs = Eigen::VectorXd::Ones(num_slots_);
  out.ineq_matrix = Eigen::MatrixXd::Zero(jk + num_items_, jk);
  out.ineq_rhs = Eigen::VectorXd::Zero(jk + num_items_);
  for (int j = 0; j < num_items_; ++j) {
    for (int k = 0; k < num_slots_; ++k) {
      const int v = j * num_slots_ + k;
      out.eq_matrix(k, v) = 1.0;
      out.ineq_matrix(v, v) = -1.0;
      out.ineq_matrix(jk + j, v) = 1.0;
    }
    out.ineq_rhs[jk + j] = 1.0;
  }
  return out;
}

StackedSystem StackedSystem::Assemble(const RankingProblem& problem) {
  const int n = problem.num_users();
  const int items = problem.num_items();
  const int slots = problem.num_slots();
  const int jk = problem.slate_dimension();
  const int local_rows = 2 * jk + 2 * slots + 2 * items;

  std::vector<Triplet> triplets;
  triplets.reserve(problem.dimension() * 8);
  for (int v = 0; v < problem.dimension(); ++v) {
    if (problem.dollar()[v] != 0.0) triplets.emplace_back(v, 0, problem.dollar()[v]);
    if (problem.impression_flag()[v] != 0.0) {
      triplets.emplace_back(v, 1, problem.impression_flag()[v]);
    }
  }
  for (int i = 0; i < n; ++i) {
    AppendLocalTriplets(items, slots, 2 + i * local_rows, i * jk, -1.0,
                        /*transpose=*/true, triplets);
  }

  StackedSystem out;
  out.a_.resize(problem.dimension(), 2 + n * local_rows);
  out.a_.setFromTriplets(triplets.begin(), triplets.end());
  out.a_.makeCompressed();
  out.a_rows_ = out.a_;
  out.gamma_ = problem.gamma();
  out.xi_.resize(out.a_.cols());
  out.xi_[0] = problem.revenue_threshold();
  out.xi_[1] = problem.impression_threshold();
  const Eigen::VectorXd b = LocalBound(items, slots);
  for (int i = 0; i < n; ++i) out.xi_.segment(2 + i * local_rows, local_rows) = -b;
  return out;
}

Eigen::VectorXd StackedSystem::ApplyM(const Eigen::VectorXd& y) const {
  const Eigen::VectorXd ay = a_rows_ * y;
  return (a_.transpose() * ay) / gamma_;
}

Eigen::VectorXd StackedSystem::LinearTerm(const Eigen::VectorXd& click_prob) const {
  return xi_ - (a_.transpose() * click_prob) / gamma_;
}

Eigen::VectorXd StackedSystem::PrimalFromDual(const Eigen::VectorXd& click_prob,
                                              const Eigen::VectorXd& y) const {
  return (click_prob + a_rows_ * y) / gamma_;
}

SparseMatrix StackedSystem::ExplicitM() const {
  SparseMatrix m = SparseMatrix(a_.transpose()) * a_;
  m /= gamma_;
  m.prune([](Eigen::Index, Eigen::Index, double value) { return value != 0.0; });
  m.makeCompressed();
  return m;
}

std::int64_t CountNonzeros(const SparseMatrix& matrix) {
  std::int64_t count = 0;
  for (int col = 0; col < matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(matrix, col); it; ++it) {
      if (it.value() != 0.0) ++count;
    }
  }
  return count;
}

std::int64_t CountNonzeros(const Eigen::MatrixXd& matrix) {
  return (matrix.array() != 0.0).count();
}

double SparsityRatio(const SparseMatrix& matrix) {
  if (matrix.rows() == 0 || matrix.cols() == 0) {
    throw InvalidArgumentError("SparsityRatio: empty matrix");
  }
  return static_cast<double>(CountNonzeros(matrix)) /
         (static_cast<double>(matrix.rows()) * static_cast<double>(matrix.cols()));
}

double SparsityRatio(const Eigen::MatrixXd& matrix) {
  if (matrix.size() == 0) throw InvalidArgumentError("SparsityRatio: empty matrix");
  return static_cast<double>(CountNonzeros(matrix)) / static_cast<double>(matrix.size());
}

double PredictedDualSparsity(int num_users, int num_items, int num_slots, int beta) {
  const double n = num_users, j = num_items, k = num_slots, b = beta;
  const double numerator = 1.0 + n * (j + b + k * (3.0 + b) + 7.0 * j * k);
  const double root = 1.0 + n * j + n * k + n * j * k;
  return numerator / (root * root);
}

RankingProblem RandomProblem(const RandomProblemOptions& options, std::uint64_t seed) {
  Rng rng(seed);
  const int n = options.num_users;
  const int items = options.num_items;
  const int slots = options.num_slots;
  Require(n > 0 && items > 0 && slots > 0 && slots <= items,
          "RandomProblem: invalid dimensions");

  auto pick = [&](const std::vector<int>& explicit_set, int count) {
    if (!explicit_set.empty()) return explicit_set;
    std::vector<int> all(items);
    std::iota(all.begin(), all.end(), 0);
    for (int t = items - 1; t > 0; --t) std::swap(all[t], all[rng.UniformInt(t + 1)]);
    all.resize(std::min(count, items));
    std::sort(all.begin(), all.end());
    return all;
  };

  ProblemConfig config;
  config.num_users = n;
  config.num_items = items;
  config.num_slots = slots;
  config.gamma = options.gamma;
  config.sponsored = pick(options.sponsored, options.num_sponsored);
  config.impression = pick(options.impression, options.num_impression);
  config.click_prob.resize(n * items * slots);
  for (double& p : config.click_prob) p = rng.Uniform(0.05, 0.95);
  config.item_value.assign(items, 0.0);
  for (int j : config.sponsored) config.item_value[j] = rng.Uniform(0.5, 2.0);

  // Feasible reference point: 1/4 uniform + 3/4 a revenue-greedy slate.
  RankingProblem draft = RankingProblem::Create(config);
  Eigen::VectorXd mix = Eigen::VectorXd::Constant(draft.dimension(), 0.25 / items);
  for (int i = 0; i < n; ++i) {
    std::vector<bool> used(items, false);
    for (int k = 0; k < slots; ++k) {
      int best = -1;
      for (int j = 0; j < items; ++j) {
        if (used[j]) continue;
        if (best < 0 || draft.dollar()[draft.Index(i, j, k)] >
                            draft.dollar()[draft.Index(i, best, k)]) {
          best = j;
        }
      }
      used[best] = true;
      mix[draft.Index(i, best, k)] += 0.75;
    }
  }
  config.revenue_threshold = options.threshold_scale * mix.dot(draft.dollar());
  config.impression_threshold = options.threshold_scale * mix.dot(draft.impression_flag());
  return RankingProblem::Create(config);
}

}  // namespace moo
