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

// Single-ellipsoid QCQPs and their outer polyhedral approximation by
// tangent planes at boundary points:
//   minimize    (x - a)' A (x - a)
//   subject to  (x - b)' B (x - b) <= level,  E x = e,  C x <= c,
//               lower <= x <= upper.

#ifndef MOO_QCQP_H_
#define MOO_QCQP_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "moo/ellipsoid.h"
#include "moo/lowdisc.h"
#include "moo/qp.h"

namespace moo {

struct QcqpInstance {
  SpdMatrix objective;
  Eigen::VectorXd objective_center;
  Ellipsoid constraint;
  Eigen::MatrixXd eq_matrix;  // may have 0 rows
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ineq_matrix;  // may have 0 rows
  Eigen::VectorXd ineq_rhs;
  // Empty vectors mean no bound; entries may be infinite.
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dimension() const { return objective.dimension(); }
  // Throws InvalidArgumentError on inconsistent shapes.
  void Validate() const;
  double Objective(const Eigen::VectorXd& x) const;
  // Largest violation of the linear rows and bounds (0 when satisfied).
  double LinearViolation(const Eigen::VectorXd& x) const;
  bool IsFeasible(const Eigen::VectorXd& x, double tolerance = 1e-9) const;
  bool has_bounds() const { return lower.size() > 0 || upper.size() > 0; }
  int num_linear_rows() const {
    return static_cast<int>(eq_rhs.size() + ineq_rhs.size());
  }
};

// Supporting half-spaces (x_j - b)' B x <= level + (x_j - b)' B b of the
// ellipsoid at boundary points x_j, one per row.
struct TangentRows {
  Eigen::MatrixXd normals;  // N x n
  Eigen::VectorXd rhs;
};

TangentRows BuildTangentRows(const Ellipsoid& ellipsoid, const Eigen::MatrixXd& points);

struct CoverCertificate {
  bool bounded = false;
  // Rank of the normal matrix.
  int rank = 0;
  // Residual |N'z| / |z| of the auxiliary program (normals scaled to unit
  // length); ~0 when bounded.
  double worst_residual = 0.0;
};

// Bounded iff the normals B(x_j - b) positively span R^n, i.e. the tangent
// polytope has no recession direction. Decided by a rank test plus the
// auxiliary program min |N'z| over z >= 1 (solved as nonnegative least
// squares): positive spanning holds iff the normals span R^n and admit a
// strictly positive vanishing combination.
CoverCertificate CertifyCover(const Eigen::MatrixXd& points, const Ellipsoid& ellipsoid);

struct LinearizeOptions {
  BoundaryOptions boundary;
  // Skip the bounded-cover requirement; the linear rows or bounds must then
  // keep the problem bounded (needed when N < n + 1).
  bool allow_unbounded_cover = false;
  // Keep the boundary points in the result (dropped automatically when
  // N * n exceeds this many entries, to save memory).
  std::int64_t max_stored_point_entries = 20'000'000;
};

struct LinearizedQp {
  QcqpInstance instance;
  PointSet points;  // may be empty, see LinearizeOptions
  TangentRows tangents;
  CoverCertificate cover;
  bool cover_checked = false;
  int num_points() const { return static_cast<int>(tangents.rhs.size()); }
};

// max(1024, 2^m) with 2^m the smallest power of two >= 10 * dimension.
int DefaultNumPoints(int dimension);

// Throws InvalidArgumentError when N < n + 1 or the cover is unbounded,
// unless allow_unbounded_cover is set.
LinearizedQp Linearize(const QcqpInstance& instance, int num_points,
                       const LinearizeOptions& options = {});
// Same with explicitly supplied boundary points.
LinearizedQp LinearizeWithPoints(const QcqpInstance& instance, PointSet points,
                                 const LinearizeOptions& options = {});

struct SolveOptions {
  double tolerance = 1e-9;
  // Instances with at most this many variables use the dense active-set
  // solver; larger ones need a diagonal objective and use the dual
  // projected-gradient path.
  int dense_dimension_limit = 2000;
  int max_iterations = 200000;
  // Project x*(N) onto the true feasible set when n <= polish_dimension_limit.
  bool polish = true;
  int polish_dimension_limit = 100;
};

struct TracePoint {
  int num_points = 0;
  double objective = 0.0;
  // |x*(N) - reference|; NaN without a reference.
  double error = 0.0;
  double relative_error = 0.0;
  double constraint_violation = 0.0;
};

struct SolveReport {
  Eigen::VectorXd x;
  double objective = 0.0;
  int num_points = 0;
  // (x - b)' B (x - b) - level at x.
  double constraint_violation = 0.0;
  bool in_s = false;
  bool converged = false;
  std::string solver;
  int iterations = 0;
  KktResiduals kkt;
  bool polished = false;
  Eigen::VectorXd polished_x;
  double polished_objective = 0.0;
  double solve_seconds = 0.0;
  std::vector<TracePoint> trace;
};

SolveReport SolveLinearized(const LinearizedQp& problem, const SolveOptions& options = {});

// Solves P(N) for every N in a strictly increasing schedule using nested
// point sets (prefixes of one set of max(schedule) points). The returned
// report is the one for the largest N, with the trace filled in. When
// `reference` is non-null, trace errors are measured against it.
SolveReport Refine(const QcqpInstance& instance, const std::vector<int>& schedule,
                   const LinearizeOptions& linearize_options = {},
                   const SolveOptions& solve_options = {},
                   const Eigen::VectorXd* reference = nullptr);

struct CertificateBundle {
  // (i) objectives equal within 1e-8 -> solutions equal within 1e-6.
  bool objectives_match = false;
  bool solutions_match = false;
  bool equal_objective_check = true;
  // (ii) x*(N) outside U -> the oracle solution is on the boundary of S.
  bool outside_u = false;
  bool oracle_on_boundary = false;
  bool boundary_check = true;
  // (iii) least-squares slope of log(error) against log(N) over the trace.
  bool slope_available = false;
  double error_slope = 0.0;
};

// Throws InvalidArgumentError when the oracle solution has the wrong size.
CertificateBundle CheckCertificates(const QcqpInstance& instance, const SolveReport& report,
                                    const Eigen::VectorXd& oracle_x,
                                    double oracle_objective);

}  // namespace moo

#endif  // MOO_QCQP_H_
