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

#include "moo/serialization.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "moo/error.h"

namespace moo {
namespace {

const Json& Field(const Json& value, const char* name) {
  if (!value.is_object() || !value.contains(name)) {
    throw InvalidArgumentError(std::string("missing field '") + name + "'");
  }
  return value.at(name);
}

template <typename T>
T Get(const Json& value, const char* name) {
  try {
    return Field(value, name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError(std::string("field '") + name + "': " + e.what());
  }
}

template <typename T>
T GetOr(const Json& value, const char* name, T fallback) {
  if (!value.is_object() || !value.contains(name) || value.at(name).is_null()) return fallback;
  return Get<T>(value, name);
}

Json VectorJson(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

// Infinite entries become null.
Json BoundJson(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isfinite(v[i])) {
      out.push_back(v[i]);
    } else {
      out.push_back(nullptr);
    }
  }
  return out;
}

Json MatrixJson(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(VectorJson(m.row(r).transpose()));
  return out;
}

Eigen::VectorXd ToVector(const Json& value, const char* name) {
  if (!value.is_array()) throw InvalidArgumentError(std::string("field '") + name + "' must be an array");
  Eigen::VectorXd out(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) {
      throw InvalidArgumentError(std::string("field '") + name + "' has a non-numeric entry");
    }
    out[static_cast<Eigen::Index>(i)] = value[i].get<double>();
  }
  return out;
}

Eigen::VectorXd BoundFromJson(const Json& value, const char* name, double missing) {
  if (!value.is_array()) throw InvalidArgumentError(std::string("field '") + name + "' must be an array");
  Eigen::VectorXd out(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i].is_null()) {
      out[static_cast<Eigen::Index>(i)] = missing;
    } else if (value[i].is_number()) {
      out[static_cast<Eigen::Index>(i)] = value[i].get<double>();
    } else {
      throw InvalidArgumentError(std::string("field '") + name + "' has a non-numeric entry");
    }
  }
  return out;
}

Eigen::MatrixXd ToMatrix(const Json& value, const char* name, Eigen::Index cols = -1) {
  if (!value.is_array()) throw InvalidArgumentError(std::string("field '") + name + "' must be an array of rows");
  if (value.empty()) return Eigen::MatrixXd(0, cols < 0 ? 0 : cols);
  const Eigen::Index width = static_cast<Eigen::Index>(value[0].size());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(value.size()), width);
  for (std::size_t r = 0; r < value.size(); ++r) {
    const Eigen::VectorXd row = ToVector(value[r], name);
    if (row.size() != width) throw InvalidArgumentError(std::string("field '") + name + "' has ragged rows");
    out.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return out;
}

std::vector<double> ToStd(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Json KktJson(const KktResiduals& kkt) {
  return {{"stationarity", kkt.stationarity},
          {"primal_feasibility", kkt.primal_feasibility},
          {"dual_feasibility", kkt.dual_feasibility},
          {"complementarity", kkt.complementarity}};
}

// JSON has no NaN; emit null instead.
Json Number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

void WriteJsonFile(const std::string& path, const Json& value) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << value.dump(2) << '\n';
  if (!out) throw Error("write failed: " + path);
}

Json ProblemToJson(const RankingProblem& problem) {
  return {{"n", problem.num_users()},
          {"J", problem.num_items()},
          {"K", problem.num_slots()},
          {"p", VectorJson(problem.click_prob())},
          {"c", VectorJson(problem.item_value())},
          {"d", VectorJson(problem.impression_flag())},
          {"R", problem.revenue_threshold()},
          {"I", problem.impression_threshold()},
          {"gamma", problem.gamma()},
          {"sponsored", problem.sponsored()},
          {"impression", problem.impression()}};
}

RankingProblem ProblemFromJson(const Json& value) {
  ProblemConfig config;
  config.num_users = Get<int>(value, "n");
  config.num_items = Get<int>(value, "J");
  config.num_slots = Get<int>(value, "K");
  config.click_prob = ToStd(ToVector(Field(value, "p"), "p"));
  config.item_value = ToStd(ToVector(Field(value, "c"), "c"));
  if (value.contains("d")) config.impression_flag = ToStd(ToVector(value.at("d"), "d"));
  config.revenue_threshold = Get<double>(value, "R");
  config.impression_threshold = Get<double>(value, "I");
  config.gamma = Get<double>(value, "gamma");
  config.sponsored = GetOr<std::vector<int>>(value, "sponsored", {});
  config.impression = GetOr<std::vector<int>>(value, "impression", {});
  return RankingProblem::Create(config);
}

Json DualToJson(const DualSolution& dual) {
  return {{"y", VectorJson(dual.y)},
          {"mu0", dual.mu0},
          {"mu1", dual.mu1},
          {"eta", VectorJson(dual.eta)},
          {"iterations", dual.iterations},
          {"converged", dual.converged},
          {"primal_residual", dual.primal_residual},
          {"dual_residual", dual.dual_residual},
          {"objective", dual.objective},
          {"wall_seconds", dual.wall_seconds}};
}

DualSolution DualFromJson(const Json& value) {
  DualSolution dual;
  dual.y = ToVector(Field(value, "y"), "y");
  dual.mu0 = GetOr<double>(value, "mu0", dual.y.size() > 0 ? dual.y[0] : 0.0);
  dual.mu1 = GetOr<double>(value, "mu1", dual.y.size() > 1 ? dual.y[1] : 0.0);
  if (value.contains("eta")) {
    dual.eta = ToVector(value.at("eta"), "eta");
  } else if (dual.y.size() > 2) {
    dual.eta = dual.y.tail(dual.y.size() - 2);
  }
  dual.iterations = GetOr<int>(value, "iterations", 0);
  dual.converged = GetOr<bool>(value, "converged", false);
  dual.primal_residual = GetOr<double>(value, "primal_residual", 0.0);
  dual.dual_residual = GetOr<double>(value, "dual_residual", 0.0);
  dual.objective = GetOr<double>(value, "objective", 0.0);
  dual.wall_seconds = GetOr<double>(value, "wall_seconds", 0.0);
  return dual;
}

Json InteractionBlockToJson(const InteractionBlock& block) {
  Json cross = Json::array();
  for (const Eigen::MatrixXd& c : block.cross) cross.push_back(MatrixJson(c));
  return {{"J", block.num_items},
          {"K", block.num_slots},
          {"p_tilde", block.p_tilde},
          {"offdiag", cross},
          {"slot_weights", block.slot_weights}};
}

InteractionBlock InteractionBlockFromJson(const Json& value) {
  InteractionBlock block;
  block.num_items = Get<int>(value, "J");
  block.num_slots = Get<int>(value, "K");
  block.p_tilde = Get<std::vector<double>>(value, "p_tilde");
  block.slot_weights = GetOr<std::vector<double>>(value, "slot_weights", {});
  if (block.num_items < 1 || block.num_slots < 1) {
    throw InvalidArgumentError("fields 'J' and 'K' must be positive");
  }
  if (block.p_tilde.size() != static_cast<std::size_t>(block.num_items)) {
    throw InvalidArgumentError("field 'p_tilde' must have J entries");
  }
  if (!block.slot_weights.empty() &&
      block.slot_weights.size() != static_cast<std::size_t>(block.num_slots)) {
    throw InvalidArgumentError("field 'slot_weights' must have K entries");
  }
  if (value.contains("offdiag")) {
    const Json& cross = value.at("offdiag");
    if (!cross.is_array()) throw InvalidArgumentError("field 'offdiag' must be an array");
    for (const Json& c : cross) block.cross.push_back(ToMatrix(c, "offdiag"));
  }
  const std::size_t pairs =
      static_cast<std::size_t>(block.num_items) * (block.num_items - 1) / 2;
  if (!block.cross.empty() && block.cross.size() != pairs) {
    throw InvalidArgumentError("field 'offdiag' must list one block per item pair");
  }
  for (const Eigen::MatrixXd& c : block.cross) {
    if (c.rows() != block.num_slots || c.cols() != block.num_slots) {
      throw InvalidArgumentError("offdiag blocks must be K x K");
    }
  }
  return block;
}

InteractionModel InteractionModelFromJson(const Json& value, double default_epsilon) {
  const double epsilon = GetOr<double>(value, "epsilon", default_epsilon);
  std::vector<Eigen::MatrixXd> blocks;
  if (value.contains("blocks")) {
    for (const Json& b : value.at("blocks")) blocks.push_back(AssembleBlock(InteractionBlockFromJson(b)));
  } else {
    blocks.push_back(AssembleBlock(InteractionBlockFromJson(value)));
  }
  return InteractionModel::Create(blocks, epsilon);
}

Json EllipsoidToJson(const Ellipsoid& ellipsoid) {
  Json out = {{"center", VectorJson(ellipsoid.center())}, {"level", ellipsoid.level()}};
  if (ellipsoid.shape().is_diagonal()) {
    out["B_diag"] = VectorJson(ellipsoid.shape().Diagonal());
  } else {
    out["B"] = MatrixJson(ellipsoid.shape().ToDense());
  }
  return out;
}

namespace {

SpdMatrix SpdFromJson(const Json& value, const char* dense, const char* diagonal) {
  if (value.contains(diagonal)) return SpdMatrix::Diagonal(ToVector(value.at(diagonal), diagonal));
  return SpdMatrix::Dense(ToMatrix(Field(value, dense), dense));
}

}  // namespace

Ellipsoid EllipsoidFromJson(const Json& value) {
  SpdMatrix shape = SpdFromJson(value, "B", "B_diag");
  Eigen::VectorXd center = value.contains("center")
                               ? ToVector(value.at("center"), "center")
                               : Eigen::VectorXd::Zero(shape.dimension());
  return Ellipsoid(std::move(shape), std::move(center), Get<double>(value, "level"));
}

Json QcqpToJson(const QcqpInstance& instance) {
  Json out;
  if (instance.objective.is_diagonal()) {
    out["A_diag"] = VectorJson(instance.objective.Diagonal());
  } else {
    out["A"] = MatrixJson(instance.objective.ToDense());
  }
  out["a"] = VectorJson(instance.objective_center);
  out["constraint"] = EllipsoidToJson(instance.constraint);
  if (instance.eq_rhs.size() > 0) {
    out["eq_matrix"] = MatrixJson(instance.eq_matrix);
    out["eq_rhs"] = VectorJson(instance.eq_rhs);
  }
  if (instance.ineq_rhs.size() > 0) {
    out["ineq_matrix"] = MatrixJson(instance.ineq_matrix);
    out["ineq_rhs"] = VectorJson(instance.ineq_rhs);
  }
  if (instance.lower.size() > 0) out["lower"] = BoundJson(instance.lower);
  if (instance.upper.size() > 0) out["upper"] = BoundJson(instance.upper);
  return out;
}

QcqpInstance QcqpFromJson(const Json& value) {
  QcqpInstance instance;
  instance.objective = SpdFromJson(value, "A", "A_diag");
  const int n = instance.objective.dimension();
  instance.objective_center =
      value.contains("a") ? ToVector(value.at("a"), "a") : Eigen::VectorXd::Zero(n);
  instance.constraint = EllipsoidFromJson(Field(value, "constraint"));
  instance.eq_matrix = value.contains("eq_matrix") ? ToMatrix(value.at("eq_matrix"), "eq_matrix", n)
                                                   : Eigen::MatrixXd(0, n);
  instance.eq_rhs = value.contains("eq_rhs") ? ToVector(value.at("eq_rhs"), "eq_rhs")
                                             : Eigen::VectorXd(0);
  instance.ineq_matrix = value.contains("ineq_matrix")
                             ? ToMatrix(value.at("ineq_matrix"), "ineq_matrix", n)
                             : Eigen::MatrixXd(0, n);
  instance.ineq_rhs = value.contains("ineq_rhs") ? ToVector(value.at("ineq_rhs"), "ineq_rhs")
                                                 : Eigen::VectorXd(0);
  const double inf = std::numeric_limits<double>::infinity();
  if (value.contains("lower")) instance.lower = BoundFromJson(value.at("lower"), "lower", -inf);
  if (value.contains("upper")) instance.upper = BoundFromJson(value.at("upper"), "upper", inf);
  instance.Validate();
  return instance;
}

Json SolveReportToJson(const SolveReport& report) {
  Json trace = Json::array();
  for (const TracePoint& p : report.trace) {
    trace.push_back({{"N", p.num_points},
                     {"objective", p.objective},
                     {"error", Number(p.error)},
                     {"relative_error", Number(p.relative_error)},
                     {"constraint_violation", p.constraint_violation}});
  }
  Json out = {{"x", VectorJson(report.x)},
              {"objective", report.objective},
              {"num_points", report.num_points},
              {"constraint_violation", report.constraint_violation},
              {"in_s", report.in_s},
              {"converged", report.converged},
              {"solver", report.solver},
              {"iterations", report.iterations},
              {"kkt", KktJson(report.kkt)},
              {"polished", report.polished},
              {"solve_seconds", report.solve_seconds},
              {"trace", trace}};
  if (report.polished) {
    out["polished_x"] = VectorJson(report.polished_x);
    out["polished_objective"] = report.polished_objective;
  }
  return out;
}

Json OracleSolutionToJson(const OracleSolution& solution) {
  return {{"x", VectorJson(solution.x)},
          {"objective", solution.objective},
          {"multiplier", solution.multiplier},
          {"method", solution.method},
          {"kkt", KktJson(solution.kkt)},
          {"inner_solves", solution.inner_solves}};
}

BenchConfig BenchConfigFromJson(const Json& value) {
  if (!value.is_object()) throw InvalidArgumentError("bench config must be an object");
  BenchConfig config;
  config.interaction_dims = GetOr<std::vector<int>>(value, "interaction_dims", {});
  config.sampler_dims = GetOr<std::vector<int>>(value, "sampler_dims", {});
  config.seeds = GetOr<std::vector<std::uint64_t>>(value, "seeds", {});
  if (value.contains("samplers")) {
    config.samplers.clear();
    for (const std::string& name : Get<std::vector<std::string>>(value, "samplers")) {
      config.samplers.push_back(ParseBoundarySampler(name));
    }
  }
  config.num_points = GetOr<int>(value, "num_points", 0);
  config.schedule = GetOr<std::vector<int>>(value, "schedule", {});
  config.timing = GetOr<bool>(value, "timing", false);
  config.timeout_seconds = GetOr<double>(value, "timeout_seconds", config.timeout_seconds);
  if (value.contains("interaction")) {
    const Json& j = value.at("interaction");
    InteractionExperimentOptions& o = config.interaction;
    o.num_slots = GetOr<int>(j, "num_slots", o.num_slots);
    o.gamma = GetOr<double>(j, "gamma", o.gamma);
    o.epsilon = GetOr<double>(j, "epsilon", o.epsilon);
    o.cross_min = GetOr<double>(j, "cross_min", o.cross_min);
    o.cross_max = GetOr<double>(j, "cross_max", o.cross_max);
    o.p_tilde_min = GetOr<double>(j, "p_tilde_min", o.p_tilde_min);
    o.p_tilde_max = GetOr<double>(j, "p_tilde_max", o.p_tilde_max);
    o.threshold_factor = GetOr<double>(j, "threshold_factor", o.threshold_factor);
  }
  return config;
}

void WritePointsCsv(const std::string& path, const Eigen::MatrixXd& points) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out.precision(17);
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      if (c > 0) out << ',';
      out << points(r, c);
    }
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

Eigen::MatrixXd ReadPointsCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(field, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0) throw Error(path + ":" + std::to_string(line_number) + ": bad number '" + field + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(path + ":" + std::to_string(line_number) + ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return out;
}

void WritePlanCsv(const std::string& path, const ServingPlan& plan) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << "user,slot,item\n";
  for (int i = 0; i < plan.num_users; ++i) {
    for (int k = 0; k < plan.num_slots; ++k) out << i << ',' << k << ',' << plan.item(i, k) << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

}  // namespace moo
