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
#include <vector>

#include <Eigen/QR>

#include "moo/error.h"
#include "moo/qp.h"

namespace moo {

Eigen::VectorXd SolveNnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                          double tolerance) {
  if (a.rows() != b.size()) throw InvalidArgumentError("NNLS: shape mismatch");
  const int n = static_cast<int>(a.cols());
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff() * std::max(1.0, b.cwiseAbs().maxCoeff()));
  const double tol = tolerance * scale;

  auto solve_passive = [&]() {
    std::vector<int> cols;
    for (int j = 0; j < n; ++j) {
      if (passive[j]) cols.push_back(j);
    }
    Eigen::MatrixXd sub(a.rows(), cols.size());
    for (int k = 0; k < static_cast<int>(cols.size()); ++k) sub.col(k) = a.col(cols[k]);
    const Eigen::VectorXd s_sub = sub.colPivHouseholderQr().solve(b);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < static_cast<int>(cols.size()); ++k) s[cols[k]] = s_sub[k];
    return s;
  };

  const int max_outer = 3 * n + 10;
  for (int outer = 0; outer < max_outer; ++outer) {
    const Eigen::VectorXd w = a.transpose() * (b - a * z);
    int enter = -1;
    double best = tol;
    for (int j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > best) {
        best = w[j];
        enter = j;
      }
    }
    if (enter < 0) break;
    passive[enter] = true;
    for (int inner = 0; inner <= n; ++inner) {
      Eigen::VectorXd s = solve_passive();
      double alpha = 1.0;
      bool clipped = false;
      for (int j = 0; j < n; ++j) {
        if (passive[j] && s[j] <= 0.0) {
          clipped = true;
          const double denom = z[j] - s[j];
          if (denom > 0.0) alpha = std::min(alpha, z[j] / denom);
        }
      }
      if (!clipped) {
        z = s;
        break;
      }
      z += alpha * (s - z);
      for (int j = 0; j < n; ++j) {
        if (passive[j] && z[j] <= tol) {
          passive[j] = false;
          z[j] = 0.0;
        }
      }
    }
  }
  return z;
}

}  // namespace moo
