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

#include "moo/ellipsoid.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "moo/error.h"

namespace moo {

SpdMatrix SpdMatrix::Dense(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw InvalidArgumentError("SpdMatrix: matrix must be square and nonempty");
  }
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidArgumentError("SpdMatrix: matrix is not symmetric");
  }
  SpdMatrix out;
  out.is_diagonal_ = false;
  out.dense_ = 0.5 * (matrix + matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out.dense_);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("SpdMatrix: eigendecomposition failed");
  }
  out.eigenvalues_ = solver.eigenvalues();
  out.eigenvectors_ = solver.eigenvectors();
  if (out.min_eigenvalue() <= 0.0) {
    throw NumericalError("SpdMatrix: matrix is not positive definite (min eigenvalue " +
                         std::to_string(out.min_eigenvalue()) + ")");
  }
  if (out.condition_number() > kMaxConditionNumber) {
    throw NumericalError("SpdMatrix: condition number exceeds 1e12");
  }
  return out;
}

SpdMatrix SpdMatrix::Diagonal(const Eigen::VectorXd& diagonal) {
  if (diagonal.size() == 0) {
    throw InvalidArgumentError("SpdMatrix: empty diagonal");
  }
  if (diagonal.minCoeff() <= 0.0) {
    throw NumericalError("SpdMatrix: diagonal entries must be positive");
  }
  SpdMatrix out;
  out.is_diagonal_ = true;
  out.eigenvalues_ = diagonal;
  if (out.condition_number() > kMaxConditionNumber) {
    throw NumericalError("SpdMatrix: condition number exceeds 1e12");
  }
  return out;
}

SpdMatrix SpdMatrix::Identity(int dimension, double scale) {
  return Diagonal(Eigen::VectorXd::Constant(dimension, scale));
}

Eigen::VectorXd SpdMatrix::Diagonal() const {
  return is_diagonal_ ? eigenvalues_ : Eigen::VectorXd(dense_.diagonal());
}

Eigen::MatrixXd SpdMatrix::ToDense() const {
  if (is_diagonal_) return eigenvalues_.asDiagonal();
  return dense_;
}

Eigen::VectorXd SpdMatrix::Apply(const Eigen::VectorXd& x) const {
  if (is_diagonal_) return eigenvalues_.cwiseProduct(x);
  return dense_ * x;
}

Eigen::VectorXd SpdMatrix::ApplySpectral(const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& weights) const {
  if (is_diagonal_) return weights.cwiseProduct(x);
  return eigenvectors_ * weights.cwiseProduct(eigenvectors_.transpose() * x);
}

Eigen::VectorXd SpdMatrix::ApplySqrt(const Eigen::VectorXd& x) const {
  return ApplySpectral(x, eigenvalues_.cwiseSqrt());
}

Eigen::VectorXd SpdMatrix::ApplyInverseSqrt(const Eigen::VectorXd& x) const {
  return ApplySpectral(x, eigenvalues_.cwiseSqrt().cwiseInverse());
}

Eigen::VectorXd SpdMatrix::ApplyInverse(const Eigen::VectorXd& x) const {
  return ApplySpectral(x, eigenvalues_.cwiseInverse());
}

double SpdMatrix::QuadraticForm(const Eigen::VectorXd& x) const {
  if (is_diagonal_) return x.cwiseAbs2().dot(eigenvalues_);
  return x.dot(dense_ * x);
}

Ellipsoid::Ellipsoid(SpdMatrix shape, Eigen::VectorXd center, double level)
    : shape_(std::move(shape)), center_(std::move(center)), level_(level) {
  if (center_.size() != shape_.dimension()) {
    throw InvalidArgumentError("Ellipsoid: center dimension does not match shape");
  }
  if (!(level_ > 0.0) || !std::isfinite(level_)) {
    throw InvalidArgumentError("Ellipsoid: level must be finite and positive");
  }
}

double Ellipsoid::Evaluate(const Eigen::VectorXd& x) const {
  return shape_.QuadraticForm(x - center_);
}

bool Ellipsoid::Contains(const Eigen::VectorXd& x, double tolerance) const {
  return Evaluate(x) <= level_ + tolerance;
}

Eigen::VectorXd Ellipsoid::Normal(const Eigen::VectorXd& x) const {
  return shape_.Apply(x - center_);
}

Eigen::VectorXd Ellipsoid::FromSphere(const Eigen::VectorXd& u) const {
  return std::sqrt(level_) * shape_.ApplyInverseSqrt(u) + center_;
}

Eigen::VectorXd Ellipsoid::ToSphere(const Eigen::VectorXd& x) const {
  return shape_.ApplySqrt(x - center_) / std::sqrt(level_);
}

}  // namespace moo
