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

// Multi-slot ranking problem: users i, items j, slots k, serving
// probabilities x_{ijk}. Every flat vector in this library uses the layout
//   index(i, j, k) = (i * J + j) * K + k.

#ifndef MOO_PROBLEM_MODEL_H_
#define MOO_PROBLEM_MODEL_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace moo {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Plain description of a problem, as read from a problem file.
struct ProblemConfig {
  int num_users = 0;
  int num_items = 0;
  int num_slots = 0;
  std::vector<double> click_prob;           // n*J*K entries
  std::vector<double> item_value;           // J entries, > 0 only on sponsored items
  std::vector<double> impression_flag;      // n*J*K entries; empty = derive from `impression`
  double revenue_threshold = 0.0;
  double impression_threshold = 0.0;
  double gamma = 1.0;
  std::vector<int> sponsored;
  std::vector<int> impression;
};

// Validated, immutable problem:
//   minimize   -x'p + (gamma/2) x'x
//   subject to x'$ >= R,  x'd >= I,  x_i in K_i for every user i,
// where $ = p * c elementwise.
class RankingProblem {
 public:
  // Throws InvalidArgumentError on dimension mismatches, probabilities outside
  // [0, 1], K > J, gamma <= 0, or value/indicator vectors inconsistent with
  // the sponsored and impression sets.
  static RankingProblem Create(const ProblemConfig& config);

  int num_users() const { return num_users_; }
  int num_items() const { return num_items_; }
  int num_slots() const { return num_slots_; }
  // n * J * K.
  int dimension() const { return num_users_ * slate_dimension(); }
  // J * K, the per-user block size.
  int slate_dimension() const { return num_items_ * num_slots_; }
  int Index(int user, int item, int slot) const {
    return (user * num_items_ + item) * num_slots_ + slot;
  }

  const Eigen::VectorXd& click_prob() const { return click_prob_; }
  const Eigen::VectorXd& item_value() const { return item_value_; }
  const Eigen::VectorXd& dollar() const { return dollar_; }
  const Eigen::VectorXd& impression_flag() const { return impression_flag_; }
  double revenue_threshold() const { return revenue_threshold_; }
  double impression_threshold() const { return impression_threshold_; }
  double gamma() const { return gamma_; }
  const std::vector<int>& sponsored() const { return sponsored_; }
  const std::vector<int>& impression() const { return impression_; }

  // -x'p + (gamma/2) x'x.
  double Objective(const Eigen::VectorXd& x) const;
  ProblemConfig ToConfig() const;

 private:
  RankingProblem() = default;

  int num_users_ = 0;
  int num_items_ = 0;
  int num_slots_ = 0;
  Eigen::VectorXd click_prob_;
  Eigen::VectorXd item_value_;
  Eigen::VectorXd dollar_;
  Eigen::VectorXd impression_flag_;
  double revenue_threshold_ = 0.0;
  double impression_threshold_ = 0.0;
  double gamma_ = 1.0;
  std::vector<int> sponsored_;
  std::vector<int> impression_;
};

// Per-user constraint system K_i x_i <= b_i for one slate of J items and K
// slots. Rows, in order:
//   x <= 1 (JK), -x <= 0 (JK),
//   sum_j x_jk <= 1 (K), -sum_j x_jk <= -1 (K),
//   sum_k x_jk <= 1 (J), -sum_k x_jk <= 0 (J).
// The slot equalities are stored as paired inequalities.
class LocalPolytope {
 public:
  // Throws InvalidArgumentError unless 1 <= K <= J.
  static LocalPolytope Create(int num_items, int num_slots);

  int num_items() const { return num_items_; }
  int num_slots() const { return num_slots_; }
  int dimension() const { return num_items_ * num_slots_; }
  int num_rows() const { return static_cast<int>(bound_.size()); }

  const SparseRowMatrix& matrix() const { return matrix_; }
  const Eigen::VectorXd& bound() const { return bound_; }

  // max(K x - b), clipped below at 0.
  double MaxViolation(const Eigen::VectorXd& x) const;
  bool Contains(const Eigen::VectorXd& x, double tolerance = 1e-9) const;
  // x_jk = 1/J; feasible whenever K <= J.
  Eigen::VectorXd UniformPoint() const;

  // The same set as dense blocks with the slot equalities kept as
  // equalities and the implied rows (x <= 1, sum_k x_jk >= 0) dropped:
  //   sum_j x_jk = 1,  -x <= 0,  sum_k x_jk <= 1.
  struct DenseSystem {
    Eigen::MatrixXd eq_matrix;
    Eigen::VectorXd eq_rhs;
    Eigen::MatrixXd ineq_matrix;
    Eigen::VectorXd ineq_rhs;
  };
  DenseSystem Dense() const;

 private:
  LocalPolytope() = default;

  int num_items_ = 0;
  int num_slots_ = 0;
  SparseRowMatrix matrix_;
  Eigen::VectorXd bound_;
};

// Dual data of the ranking problem: A = ($ : d : -K'), xi = (R, I, -b')',
// M = A'A / gamma, dual variable y = (mu0, mu1, eta).
class StackedSystem {
 public:
  static StackedSystem Assemble(const RankingProblem& problem);

  // n*J*K rows, 2 + n*(rows of K_i) columns.
  const SparseMatrix& constraint_matrix() const { return a_; }
  const SparseRowMatrix& constraint_matrix_rows() const { return a_rows_; }
  const Eigen::VectorXd& xi() const { return xi_; }
  double gamma() const { return gamma_; }
  int dual_dimension() const { return static_cast<int>(a_.cols()); }
  int primal_dimension() const { return static_cast<int>(a_.rows()); }

  // M y = A'(A y) / gamma; M is never formed.
  Eigen::VectorXd ApplyM(const Eigen::VectorXd& y) const;
  // xi - A'p / gamma.
  Eigen::VectorXd LinearTerm(const Eigen::VectorXd& click_prob) const;
  // (p + A y) / gamma, the unconstrained Lagrangian minimizer.
  Eigen::VectorXd PrimalFromDual(const Eigen::VectorXd& click_prob,
                                 const Eigen::VectorXd& y) const;
  // Explicit sparse M with exact zeros pruned. Intended for sparsity analysis
  // and small instances.
  SparseMatrix ExplicitM() const;

 private:
  StackedSystem() = default;

  SparseMatrix a_;
  SparseRowMatrix a_rows_;
  Eigen::VectorXd xi_;
  double gamma_ = 1.0;
};

// Number of entries that are exactly nonzero.
std::int64_t CountNonzeros(const SparseMatrix& matrix);
std::int64_t CountNonzeros(const Eigen::MatrixXd& matrix);

// (#nonzeros) / (rows * cols). Throws InvalidArgumentError on empty input.
double SparsityRatio(const SparseMatrix& matrix);
double SparsityRatio(const Eigen::MatrixXd& matrix);

// Predicted sparsity of M when p > 0 everywhere and the sponsored and
// impression sets overlap:
//   (1 + n(J + beta + K(3 + beta) + 7JK)) / (1 + nJ + nK + nJK)^2,
// with beta = |sponsored| + |impression|.
double PredictedDualSparsity(int num_users, int num_items, int num_slots, int beta);

// Synthetic instance generator.
struct RandomProblemOptions {
  int num_users = 2;
  int num_items = 3;
  int num_slots = 2;
  double gamma = 1.0;
  // Explicit item sets; when empty, `num_sponsored` / `num_impression` items
  // are drawn at random.
  std::vector<int> sponsored;
  std::vector<int> impression;
  int num_sponsored = 1;
  int num_impression = 1;
  // Thresholds are set to the revenue and impression of a feasible mix of
  // the uniform point and a revenue-greedy slate, scaled by this factor
  // (values <= 1 keep the problem feasible).
  double threshold_scale = 1.0;
};

RankingProblem RandomProblem(const RandomProblemOptions& options, std::uint64_t seed);

}  // namespace moo

#endif  // MOO_PROBLEM_MODEL_H_
