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

#ifndef MOO_ELLIPSOID_H_
#define MOO_ELLIPSOID_H_

#include <Eigen/Core>

namespace moo {

// Symmetric positive definite matrix stored either densely or as a diagonal.
// Dense matrices carry their eigendecomposition so that square roots and
// inverse square roots are exact to working precision. Immutable.
class SpdMatrix {
 public:
  // Largest accepted condition number.
  static constexpr double kMaxConditionNumber = 1e12;

  SpdMatrix() = default;

  // Throws InvalidArgumentError if `matrix` is not square or not symmetric
  // (relative tolerance 1e-12), NumericalError if it is not positive definite
  // or its condition number exceeds kMaxConditionNumber.
  static SpdMatrix Dense(const Eigen::MatrixXd& matrix);
  static SpdMatrix Diagonal(const Eigen::VectorXd& diagonal);
  static SpdMatrix Identity(int dimension, double scale = 1.0);

  int dimension() const { return static_cast<int>(eigenvalues_.size()); }
  bool is_diagonal() const { return is_diagonal_; }

  // Diagonal entries. For dense matrices this is the diagonal of the matrix.
  Eigen::VectorXd Diagonal() const;
  Eigen::MatrixXd ToDense() const;

  Eigen::VectorXd Apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd ApplySqrt(const Eigen::VectorXd& x) const;
  Eigen::VectorXd ApplyInverseSqrt(const Eigen::VectorXd& x) const;
  Eigen::VectorXd ApplyInverse(const Eigen::VectorXd& x) const;
  double QuadraticForm(const Eigen::VectorXd& x) const;

  double min_eigenvalue() const { return eigenvalues_.minCoeff(); }
  double max_eigenvalue() const { return eigenvalues_.maxCoeff(); }
  double condition_number() const { return max_eigenvalue() / min_eigenvalue(); }

 private:
  Eigen::VectorXd ApplySpectral(const Eigen::VectorXd& x,
                                const Eigen::VectorXd& weights) const;

  bool is_diagonal_ = true;
  Eigen::MatrixXd dense_;
  // Eigen-pairs; for diagonal matrices the eigenvalues are the diagonal and
  // no eigenvectors are stored.
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

// The set S = {x : (x - center)' B (x - center) <= level} with B symmetric
// positive definite and level > 0, together with the affine map between the
// unit sphere and the boundary of S:
//   FromSphere(u) = sqrt(level) B^{-1/2} u + center,
//   ToSphere(x)   = B^{1/2} (x - center) / sqrt(level).
class Ellipsoid {
 public:
  Ellipsoid() = default;
  // Throws InvalidArgumentError on dimension mismatch or level <= 0.
  Ellipsoid(SpdMatrix shape, Eigen::VectorXd center, double level);

  int dimension() const { return shape_.dimension(); }
  const SpdMatrix& shape() const { return shape_; }
  const Eigen::VectorXd& center() const { return center_; }
  double level() const { return level_; }

  // (x - center)' B (x - center).
  double Evaluate(const Eigen::VectorXd& x) const;
  // Evaluate(x) - level.
  double Violation(const Eigen::VectorXd& x) const { return Evaluate(x) - level_; }
  bool Contains(const Eigen::VectorXd& x, double tolerance = 0.0) const;

  // Outward normal B (x - center); the gradient of Evaluate up to a factor 2.
  Eigen::VectorXd Normal(const Eigen::VectorXd& x) const;

  Eigen::VectorXd FromSphere(const Eigen::VectorXd& u) const;
  Eigen::VectorXd ToSphere(const Eigen::VectorXd& x) const;

 private:
  SpdMatrix shape_;
  Eigen::VectorXd center_;
  double level_ = 1.0;
};

}  // namespace moo

#endif  // MOO_ELLIPSOID_H_
