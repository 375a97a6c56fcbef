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

// Reference implementations used only by the tests. They are written from
// the problem definitions and share no code with the library solvers.

#ifndef MOO_TESTS_TEST_ORACLES_H_
#define MOO_TESTS_TEST_ORACLES_H_

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "moo/problem_model.h"

namespace moo::testing {

// Stacked matrix A = ($ : d : -K_1' ... -K_n') built densely from the problem
// data, with each local block ordered [I; -I; S; -S; T; -T] where S sums over
// items per slot and T sums over slots per item.
Eigen::MatrixXd DenseStackedMatrix(const RankingProblem& problem);
// (R, I, -b_1, ..., -b_n).
Eigen::VectorXd DenseStackedRhs(const RankingProblem& problem);

// Numerator of the closed-form sparsity ratio scaled to the stacked layout:
// nnz(M) = 4 (1 + n(J + beta + K(3 + beta) + 7JK)) when the sponsored and
// impression sets overlap.
std::int64_t ClosedFormDualNonzeros(int n, int num_items, int num_slots, int beta);

std::int64_t CountDenseNonzeros(const Eigen::MatrixXd& m);

struct EnumerationResult {
  Eigen::VectorXd y;
  double objective = 0.0;
  int candidates = 0;
};

// min 0.5 y'My - q'y over y >= 0 by checking the KKT conditions on every
// support set. M may be singular. Dimension <= 22.
EnumerationResult EnumerateNonnegativeQp(const Eigen::MatrixXd& m, const Eigen::VectorXd& q);

// min 0.5 x'Hx + g'x s.t. Ex = e, Cx <= c, H positive definite, by
// enumerating active inequality sets. Rows of C <= 16.
struct DenseQpResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  bool feasible = false;
};
DenseQpResult EnumerateDenseQp(const Eigen::MatrixXd& h, const Eigen::VectorXd& g,
                               const Eigen::MatrixXd& e_matrix, const Eigen::VectorXd& e_rhs,
                               const Eigen::MatrixXd& c_matrix, const Eigen::VectorXd& c_rhs);

// Convex program for the barrier oracle:
//   minimize    0.5 x'Hx + g'x
//   subject to  E x = e,  C x <= c,  (x - center)' Q (x - center) <= level.
struct ConvexProgram {
  Eigen::MatrixXd h;
  Eigen::VectorXd g;
  Eigen::MatrixXd e_matrix;
  Eigen::VectorXd e_rhs;
  Eigen::MatrixXd c_matrix;
  Eigen::VectorXd c_rhs;
  bool has_quadratic = false;
  Eigen::MatrixXd q;
  Eigen::VectorXd center;
  double level = 0.0;
};

struct BarrierResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  // False when phase one finds no strictly feasible point.
  bool feasible = false;
  int newton_steps = 0;
};

// Primal log-barrier method with a phase-one search for a strictly feasible
// point. Stops when the duality-gap bound m/t falls below gap_tolerance.
BarrierResult SolveByBarrier(const ConvexProgram& program, double gap_tolerance = 1e-11);

// Ranking primal from the definitions: minimize -p'x + gamma/2 |x|^2 with
// $'x >= R, d'x >= I, 0 <= x, sum_j x_ijk = 1, sum_k x_ijk <= 1.
ConvexProgram RankingProgram(const RankingProblem& problem);

// True when every elementary dyadic box of volume 2^{t-m} holds exactly 2^t
// points. Points are rows in [0,1)^s; the count must be 2^m.
bool ElementaryBoxesBalanced(const Eigen::MatrixXd& points, int m, int t);

// Normalized area of {u in S^2 : <u, axis> >= h}.
inline double CapAreaS2(double h) { return 0.5 * (1.0 - h); }

// s+1 unit vectors in R^s with pairwise inner product -1/s, randomly rotated.
Eigen::MatrixXd RegularSimplex(int s, std::uint64_t seed);

// Random orthogonal matrix (QR of a Gaussian matrix).
Eigen::MatrixXd RandomRotation(int s, std::uint64_t seed);

}  // namespace moo::testing

#endif  // MOO_TESTS_TEST_ORACLES_H_
