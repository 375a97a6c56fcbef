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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "moo/error.h"
#include "moo/interaction.h"

namespace moo {
namespace {

// Reduces a symmetric matrix to tridiagonal form T = H' Q H with Householder
// reflections; returns the diagonal and the off-diagonal.
void Tridiagonalize(Eigen::MatrixXd a, Eigen::VectorXd& diag, Eigen::VectorXd& off) {
  const int n = static_cast<int>(a.rows());
  off = Eigen::VectorXd::Zero(std::max(n - 1, 0));
  for (int k = 0; k + 2 < n; ++k) {
    const int len = n - k - 1;
    Eigen::VectorXd v = a.col(k).tail(len);
    const double norm = v.norm();
    if (norm == 0.0) {
      off[k] = 0.0;
      continue;
    }
    const double alpha = v[0] > 0.0 ? -norm : norm;
    v[0] -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) {
      off[k] = a(k + 1, k);
      continue;
    }
    v /= vnorm;
    auto block = a.bottomRightCorner(len, len);
    const Eigen::VectorXd p = block * v;
    const Eigen::VectorXd w = 2.0 * (p - v.dot(p) * v);
    block.noalias() -= v * w.transpose() + w * v.transpose();
    a.col(k).tail(len).setZero();
    a.row(k).tail(len).setZero();
    off[k] = alpha;
  }
  if (n >= 2) off[n - 2] = a(n - 1, n - 2);
  diag = a.diagonal();
}

// Number of eigenvalues of the tridiagonal matrix strictly below x.
int CountBelow(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double x,
               double pivot_floor) {
  int count = 0;
  double q = diag[0] - x;
  for (int i = 0;; ++i) {
    if (q == 0.0) q = -pivot_floor;
    if (q < 0.0) ++count;
    if (i + 1 >= diag.size()) break;
    q = diag[i + 1] - x - off[i] * off[i] / q;
  }
  return count;
}

}  // namespace

double MinEigenvalue(const Eigen::MatrixXd& symmetric) {
  const int n = static_cast<int>(symmetric.rows());
  if (n == 0 || symmetric.cols() != n) {
    throw InvalidArgumentError("MinEigenvalue: matrix must be square and nonempty");
  }
  if (n == 1) return symmetric(0, 0);
  Eigen::VectorXd diag, off;
  Tridiagonalize(symmetric, diag, off);

  // Gershgorin bracket.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < n; ++i) {
    const double radius = (i > 0 ? std::abs(off[i - 1]) : 0.0) +
                          (i + 1 < n ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - radius);
    hi = std::max(hi, diag[i] + radius);
  }
  const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
  const double pivot_floor = std::numeric_limits<double>::epsilon() * scale;
  lo -= pivot_floor;
  hi += pivot_floor;
  for (int iter = 0; iter < 300; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return hi;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale) return 0.5 * (lo + hi);
    if (CountBelow(diag, off, mid, pivot_floor) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw NumericalError("MinEigenvalue: bisection did not converge");
}

}  // namespace moo
