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

// File formats for the command-line tool: JSON documents for problems,
// models and reports, CSV for point sets and serving plans. Doubles are
// written with round-trip precision.

#ifndef MOO_SERIALIZATION_H_
#define MOO_SERIALIZATION_H_

#include <string>

#include <Eigen/Core>
#include <json.hpp>

#include "moo/bench.h"
#include "moo/dual_solver.h"
#include "moo/ellipsoid.h"
#include "moo/interaction.h"
#include "moo/lowdisc.h"
#include "moo/oracle.h"
#include "moo/primal_recovery.h"
#include "moo/problem_model.h"
#include "moo/qcqp.h"

namespace moo {

using Json = nlohmann::json;

// Throws Error when the file cannot be read or parsed.
Json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const Json& value);

// {n, J, K, p, c, d, R, I, gamma, sponsored, impression}; p and d in the flat
// (i, j, k) layout. d may be omitted and is then derived from `impression`.
Json ProblemToJson(const RankingProblem& problem);
// Throws InvalidArgumentError on missing or mistyped fields, and whatever
// RankingProblem::Create throws.
RankingProblem ProblemFromJson(const Json& value);

Json DualToJson(const DualSolution& dual);
DualSolution DualFromJson(const Json& value);

// {J, K, p_tilde, offdiag, slot_weights}; offdiag lists the K x K blocks for
// pairs j < j' in lexicographic order, each as an array of rows.
Json InteractionBlockToJson(const InteractionBlock& block);
InteractionBlock InteractionBlockFromJson(const Json& value);

// {"epsilon": e, "blocks": [...]}; a bare block object is accepted as a
// one-block model. Blocks are assembled, then repaired.
InteractionModel InteractionModelFromJson(const Json& value, double default_epsilon = 1e-3);

// Square matrices are arrays of rows. "B_diag" may replace "B".
// {"B", "center", "level"}.
Json EllipsoidToJson(const Ellipsoid& ellipsoid);
Ellipsoid EllipsoidFromJson(const Json& value);

// {"A" | "A_diag", "a", "constraint", "eq_matrix", "eq_rhs", "ineq_matrix",
//  "ineq_rhs", "lower", "upper"}; all but A and constraint are optional.
// Infinite bounds are written as null.
Json QcqpToJson(const QcqpInstance& instance);
QcqpInstance QcqpFromJson(const Json& value);

Json SolveReportToJson(const SolveReport& report);
Json OracleSolutionToJson(const OracleSolution& solution);

// {interaction_dims, sampler_dims, seeds, samplers, num_points, schedule,
//  timing, timeout_seconds, interaction: {...}}; every field optional.
BenchConfig BenchConfigFromJson(const Json& value);

// One point per line, no header.
void WritePointsCsv(const std::string& path, const Eigen::MatrixXd& points);
// Throws Error on ragged rows or unparsable numbers.
Eigen::MatrixXd ReadPointsCsv(const std::string& path);

// Header `user,slot,item`, then one row per (user, slot).
void WritePlanCsv(const std::string& path, const ServingPlan& plan);

}  // namespace moo

#endif  // MOO_SERIALIZATION_H_
