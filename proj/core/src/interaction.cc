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

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "moo/error.h"
#include "moo/random.h"

namespace moo {
namespace {

void RequireSymmetric(const Eigen::MatrixXd& q, const char* who) {
  if (q.rows() != q.cols() || q.rows() == 0) {
    throw InvalidArgumentError(std::string(who) + ": matrix must be square and nonempty");
  }
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgumentError(std::string(who) + ": matrix is not symmetric");
  }
}

}  // namespace

Eigen::MatrixXd AssembleBlock(const InteractionBlock& block) {
  const int items = block.num_items;
  const int slots = block.num_slots;
  if (items <= 0 || slots <= 0) throw InvalidArgumentError("AssembleBlock: empty block");
  if (static_cast<int>(block.p_tilde.size()) != items) {
    throw InvalidArgumentError("AssembleBlock: p_tilde must have J entries");
  }
  const int pairs = items * (items - 1) / 2;
  if (!block.cross.empty() && static_cast<int>(block.cross.size()) != pairs) {
    throw InvalidArgumentError("AssembleBlock: expected J(J-1)/2 cross blocks");
  }
  if (!block.slot_weights.empty() && static_cast<int>(block.slot_weights.size()) != slots) {
    throw InvalidArgumentError("AssembleBlock: slot_weights must have K entries");
  }
  const int dim = items * slots;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j < items; ++j) {
    const double p = block.p_tilde[j];
    if (!(p > 0.0 && p <= 1.0)) {
      throw InvalidArgumentError("AssembleBlock: p_tilde out of (0, 1] for item " +
                                 std::to_string(j));
    }
    for (int k = 0; k < slots; ++k) {
      const double w = block.slot_weights.empty() ? 1.0 : block.slot_weights[k];
      if (!(w > 0.0)) throw InvalidArgumentError("AssembleBlock: slot weights must be positive");
      q(j * slots + k, j * slots + k) = p * w;
    }
  }
  int pair = 0;
  for (int j = 0; j < items; ++j) {
    for (int jp = j + 1; jp < items; ++jp, ++pair) {
      if (block.cross.empty()) continue;
      const Eigen::MatrixXd& c = block.cross[pair];
      if (c.rows() != slots || c.cols() != slots) {
        throw InvalidArgumentError("AssembleBlock: cross blocks must be K x K");
      }
      for (int k = 0; k < slots; ++k) {
        if (c(k, k) != 0.0) {
          throw InvalidArgumentError("AssembleBlock: cross block (" + std::to_string(j) + ", " +
                                     std::to_string(jp) + ") has a nonzero diagonal");
        }
      }
      q.block(j * slots, jp * slots, slots, slots) = c;
      q.block(jp * slots, j * slots, slots, slots) = c.transpose();
    }
  }
  return q;
}

RepairResult RepairPositiveDefinite(const Eigen::MatrixXd& q, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgumentError("RepairPositiveDefinite: epsilon must be positive");
  }
  RequireSymmetric(q, "RepairPositiveDefinite");
  RepairResult out;
  out.min_eigenvalue_before = MinEigenvalue(q);
  out.matrix = q;
  if (out.min_eigenvalue_before < kRepairTrigger) {
    out.repaired = true;
    out.shift = epsilon - out.min_eigenvalue_before;
    out.matrix.diagonal().array() += out.shift;
    out.min_eigenvalue_after = MinEigenvalue(out.matrix);
  } else {
    out.min_eigenvalue_after = out.min_eigenvalue_before;
  }
  return out;
}

InteractionModel InteractionModel::Create(const std::vector<Eigen::MatrixXd>& blocks,
                                          double epsilon) {
  if (blocks.empty()) throw InvalidArgumentError("InteractionModel: no blocks");
  InteractionModel out;
  out.epsilon_ = epsilon;
  for (const Eigen::MatrixXd& block : blocks) {
    RepairResult repair = RepairPositiveDefinite(block, epsilon);
    out.dimension_ += static_cast<int>(block.rows());
    out.blocks_.push_back(repair.matrix);
    out.repairs_.push_back(std::move(repair));
  }
  return out;
}

bool InteractionModel::any_repaired() const {
  return std::any_of(repairs_.begin(), repairs_.end(),
                     [](const RepairResult& r) { return r.repaired; });
}

double InteractionModel::MinEigenvalue() const {
  double out = repairs_.front().min_eigenvalue_after;
  for (const RepairResult& r : repairs_) out = std::min(out, r.min_eigenvalue_after);
  return out;
}

Eigen::MatrixXd InteractionModel::ToDense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dimension_, dimension_);
  int offset = 0;
  for (const Eigen::MatrixXd& block : blocks_) {
    out.block(offset, offset, block.rows(), block.cols()) = block;
    offset += static_cast<int>(block.rows());
  }
  return out;
}

Eigen::VectorXd InteractionModel::Apply(const Eigen::VectorXd& x) const {
  if (x.size() != dimension_) throw InvalidArgumentError("InteractionModel: dimension mismatch");
  Eigen::VectorXd out(dimension_);
  int offset = 0;
  for (const Eigen::MatrixXd& block : blocks_) {
    const int size = static_cast<int>(block.rows());
    out.segment(offset, size) = block * x.segment(offset, size);
    offset += size;
  }
  return out;
}

InteractionModel InteractionModel::DiagonalPart() const {
  InteractionModel out = *this;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    out.blocks_[b] = Eigen::MatrixXd(blocks_[b].diagonal().asDiagonal());
    RepairResult& r = out.repairs_[b];
    r.matrix = out.blocks_[b];
    r.repaired = false;
    r.shift = 0.0;
    r.min_eigenvalue_before = r.min_eigenvalue_after = blocks_[b].diagonal().minCoeff();
  }
  return out;
}

Ellipsoid ToEllipsoidConstraint(const Eigen::MatrixXd& q_r, double threshold,
                                const Eigen::VectorXd& center) {
  RequireSymmetric(q_r, "ToEllipsoidConstraint");
  if (center.size() != q_r.rows()) {
    throw InvalidArgumentError("ToEllipsoidConstraint: center dimension mismatch");
  }
  SpdMatrix shape = SpdMatrix::Dense(q_r);
  const double level = threshold + shape.QuadraticForm(center);
  if (!(level > 0.0)) {
    throw InvalidArgumentError("ToEllipsoidConstraint: level P + c'Q_r c = " +
                               std::to_string(level) + " is not positive");
  }
  return Ellipsoid(std::move(shape), center, level);
}

Ellipsoid DependentResponseConstraint(const Eigen::MatrixXd& q_p, const DependentResponse& f,
                                      double threshold) {
  if (!(f.scale > 0.0)) {
    throw InvalidArgumentError("DependentResponseConstraint: scale must be positive");
  }
  RequireSymmetric(q_p, "DependentResponseConstraint");
  const int n = static_cast<int>(q_p.rows());
  const Eigen::VectorXd shift = f.shift.size() == 0 ? Eigen::VectorXd::Zero(n) : f.shift;
  if (shift.size() != n) {
    throw InvalidArgumentError("DependentResponseConstraint: shift dimension mismatch");
  }
  const Eigen::MatrixXd q_r = f.scale * q_p;
  const SpdMatrix shape = SpdMatrix::Dense(q_r);
  const Eigen::VectorXd center = -0.5 * shape.ApplyInverse(shift);
  return ToEllipsoidConstraint(q_r, threshold, center);
}

QcqpInstance BuildQcqp(const InteractionModel& q_p, const InteractionModel& q_r, double gamma,
                       double threshold, const QcqpInstance& linear) {
  if (q_p.dimension() != q_r.dimension()) {
    throw InvalidArgumentError("BuildQcqp: Q_p and Q_r dimensions differ");
  }
  if (!(gamma >= 0.0)) throw InvalidArgumentError("BuildQcqp: gamma must be nonnegative");
  const int n = q_p.dimension();
  Eigen::MatrixXd a = q_p.ToDense();
  a.diagonal().array() += 0.5 * gamma;
  QcqpInstance out;
  out.objective = SpdMatrix::Dense(a);
  out.objective_center = Eigen::VectorXd::Zero(n);
  out.constraint = ToEllipsoidConstraint(q_r.ToDense(), threshold, Eigen::VectorXd::Zero(n));
  out.eq_matrix = linear.eq_matrix;
  out.eq_rhs = linear.eq_rhs;
  out.ineq_matrix = linear.ineq_matrix;
  out.ineq_rhs = linear.ineq_rhs;
  out.lower = linear.lower;
  out.upper = linear.upper;
  out.Validate();
  return out;
}

InteractionBlock RandomInteractionBlock(const BlockGeneratorOptions& options,
                                        std::uint64_t seed) {
  Rng rng(seed);
  InteractionBlock block;
  block.num_items = options.num_items;
  block.num_slots = options.num_slots;
  for (int j = 0; j < options.num_items; ++j) {
    block.p_tilde.push_back(rng.Uniform(options.p_tilde_min, options.p_tilde_max));
  }
  if (options.slot_decay) {
    for (int k = 0; k < options.num_slots; ++k) block.slot_weights.push_back(1.0 / (1.0 + k));
  }
  for (int j = 0; j < options.num_items; ++j) {
    for (int jp = j + 1; jp < options.num_items; ++jp) {
      Eigen::MatrixXd c(options.num_slots, options.num_slots);
      for (int col = 0; col < options.num_slots; ++col) {
        for (int row = 0; row < options.num_slots; ++row) {
          c(row, col) = row == col ? 0.0 : rng.Uniform(options.cross_min, options.cross_max);
        }
      }
      block.cross.push_back(std::move(c));
    }
  }
  return block;
}

}  // namespace moo
