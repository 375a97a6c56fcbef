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

// Per-user interaction matrices over the J*K slate coordinates, their
// positive-definite repair, and the QCQP they induce.

#ifndef MOO_INTERACTION_H_
#define MOO_INTERACTION_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "moo/ellipsoid.h"
#include "moo/qcqp.h"

namespace moo {

// Parameters of one J*K x J*K block in the slate layout (index j*K + k).
struct InteractionBlock {
  int num_items = 0;
  int num_slots = 0;
  // Prior event probability of each item, in (0, 1].
  std::vector<double> p_tilde;
  // Cross blocks for pairs (j, j'), j < j', in lexicographic order; each is
  // K x K with a zero diagonal. Empty means all zero.
  std::vector<Eigen::MatrixXd> cross;
  // Optional per-slot factor on the diagonal blocks (K entries); empty means
  // ones, giving diagonal blocks p_tilde_j I_K.
  std::vector<double> slot_weights;

  int dimension() const { return num_items * num_slots; }
};

// Symmetric matrix with diagonal blocks p_tilde_j diag(slot_weights) and
// off-diagonal blocks Q_{jj'} = cross, Q_{j'j} = cross'. Throws
// InvalidArgumentError on a nonzero cross-block diagonal or p_tilde outside
// (0, 1].
Eigen::MatrixXd AssembleBlock(const InteractionBlock& block);

// Smallest eigenvalue by Householder tridiagonalization and Sturm-sequence
// bisection, to absolute accuracy ~1e-14 * |Q|. Throws NumericalError if
// the bisection fails to settle.
double MinEigenvalue(const Eigen::MatrixXd& symmetric);

// Repairs are triggered when the smallest eigenvalue is below this.
inline constexpr double kRepairTrigger = 1e-10;

struct RepairResult {
  Eigen::MatrixXd matrix;
  bool repaired = false;
  double min_eigenvalue_before = 0.0;
  double min_eigenvalue_after = 0.0;
  // Amount added to the diagonal (0 when not repaired).
  double shift = 0.0;
};

// Returns Q when its smallest eigenvalue is >= kRepairTrigger, else
// Q + (epsilon - lambda_min) I. Throws InvalidArgumentError for epsilon <= 0
// or a non-symmetric Q.
RepairResult RepairPositiveDefinite(const Eigen::MatrixXd& q, double epsilon);

// Block-diagonal Diag(Q_1, ..., Q_n) of repaired per-user blocks.
class InteractionModel {
 public:
  // Repairs every block with the same epsilon.
  static InteractionModel Create(const std::vector<Eigen::MatrixXd>& blocks, double epsilon);

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int dimension() const { return dimension_; }
  double epsilon() const { return epsilon_; }
  const std::vector<Eigen::MatrixXd>& blocks() const { return blocks_; }
  const std::vector<RepairResult>& repairs() const { return repairs_; }
  bool any_repaired() const;
  // Smallest eigenvalue over all repaired blocks.
  double MinEigenvalue() const;

  Eigen::MatrixXd ToDense() const;
  Eigen::VectorXd Apply(const Eigen::VectorXd& x) const;
  // The same model with every off-diagonal entry dropped.
  InteractionModel DiagonalPart() const;

 private:
  std::vector<Eigen::MatrixXd> blocks_;
  std::vector<RepairResult> repairs_;
  double epsilon_ = 0.0;
  int dimension_ = 0;
};

// The set {x : (x - c)' Q_r (x - c) <= threshold + c' Q_r c}. Throws
// NumericalError if Q_r is not positive definite and InvalidArgumentError
// when the level is <= 0.
Ellipsoid ToEllipsoidConstraint(const Eigen::MatrixXd& q_r, double threshold,
                                const Eigen::VectorXd& center);

// Response model r = f(-Q_p x) built from a positive scaling and a shift.
struct DependentResponse {
  // f(v) = -scale * v + shift with scale > 0.
  double scale = 1.0;
  Eigen::VectorXd shift;

  Eigen::VectorXd Apply(const Eigen::VectorXd& v) const { return -scale * v + shift; }
};

// Rewrites x' f(-Q_p x) <= P as an ellipsoid: Q_r = scale Q_p and
// c = -Q_r^{-1} shift / 2, so that x' r = (x - c)' Q_r (x - c) - c' Q_r c.
Ellipsoid DependentResponseConstraint(const Eigen::MatrixXd& q_p, const DependentResponse& f,
                                      double threshold);

// minimize x'(Q_p + gamma/2 I)x  s.t.  x'Q_r x <= threshold, plus optional
// linear rows (copied from `linear`, whose objective and ellipsoid are
// ignored). Pass a default QcqpInstance for no linear rows.
QcqpInstance BuildQcqp(const InteractionModel& q_p, const InteractionModel& q_r, double gamma,
                       double threshold, const QcqpInstance& linear = {});

// Synthetic blocks: p_tilde ~ U[p_min, p_max], slot weights 1/(1+k) when
// `slot_decay`, cross coefficients ~ U[cross_min, cross_max] off the diagonal.
struct BlockGeneratorOptions {
  int num_items = 3;
  int num_slots = 2;
  double p_tilde_min = 0.2;
  double p_tilde_max = 1.0;
  // Cross-slot entries are drawn from U[cross_min, cross_max].
  double cross_min = 0.0;
  double cross_max = 0.3;
  bool slot_decay = true;
};

InteractionBlock RandomInteractionBlock(const BlockGeneratorOptions& options,
                                        std::uint64_t seed);

}  // namespace moo

#endif  // MOO_INTERACTION_H_
