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
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "moo/bench.h"
#include "moo/error.h"
#include "moo/oracle.h"
#include "moo/problem_model.h"
#include "moo/random.h"

namespace moo {
namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string FormatDouble(double value) {
  std::ostringstream out;
  out << std::setprecision(17) << value;
  return out.str();
}

double Median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

InteractionExperimentInstance GenerateInteractionInstance(
    int num_items, std::uint64_t seed, const InteractionExperimentOptions& options) {
  if (num_items < options.num_slots) {
    throw InvalidArgumentError("GenerateInteractionInstance: need J >= K");
  }
  BlockGeneratorOptions block_options;
  block_options.num_items = num_items;
  block_options.num_slots = options.num_slots;
  block_options.cross_min = options.cross_min;
  block_options.cross_max = options.cross_max;
  block_options.p_tilde_min = options.p_tilde_min;
  block_options.p_tilde_max = options.p_tilde_max;
  block_options.slot_decay = true;
  const InteractionModel q_p = InteractionModel::Create(
      {AssembleBlock(RandomInteractionBlock(block_options, StreamSeed(seed, 1)))},
      options.epsilon);
  const InteractionModel q_r = InteractionModel::Create(
      {AssembleBlock(RandomInteractionBlock(block_options, StreamSeed(seed, 2)))},
      options.epsilon);

  const LocalPolytope polytope = LocalPolytope::Create(num_items, options.num_slots);
  const LocalPolytope::DenseSystem local = polytope.Dense();
  QcqpInstance linear;
  linear.eq_matrix = local.eq_matrix;
  linear.eq_rhs = local.eq_rhs;
  linear.ineq_matrix = local.ineq_matrix;
  linear.ineq_rhs = local.ineq_rhs;

  const Eigen::VectorXd uniform = polytope.UniformPoint();
  const double threshold = options.threshold_factor * uniform.dot(q_r.Apply(uniform));

  InteractionExperimentInstance out;
  out.truth = BuildQcqp(q_p, q_r, options.gamma, threshold, linear);
  out.naive = BuildQcqp(q_p.DiagonalPart(), q_r.DiagonalPart(), options.gamma, threshold, linear);
  return out;
}

InteractionErrorRow RunInteractionCell(int num_items, std::uint64_t seed,
                                       const InteractionExperimentOptions& options) {
  const auto start = Clock::now();
  const InteractionExperimentInstance instance =
      GenerateInteractionInstance(num_items, seed, options);
  const OracleSolution truth = ExactQcqp(instance.truth);
  const OracleSolution naive = ExactQcqp(instance.naive);
  InteractionErrorRow row;
  row.n = num_items;
  row.seed = seed;
  row.true_objective = truth.objective;
  row.naive_objective = instance.truth.Objective(naive.x);
  row.relative_error = (row.naive_objective - row.true_objective) / row.true_objective;
  row.naive_violation = instance.truth.constraint.Violation(naive.x);
  row.seconds = Since(start);
  return row;
}

QcqpInstance GenerateSamplerInstance(int dimension, std::uint64_t seed) {
  if (dimension < 2) throw InvalidArgumentError("GenerateSamplerInstance: dimension must be >= 2");
  Rng rng(seed);
  auto random_pd = [&]() {
    const Eigen::MatrixXd g = rng.NormalMatrix(dimension, dimension);
    Eigen::MatrixXd m = g.transpose() * g / dimension;
    m.diagonal().array() += 1.0;
    return Eigen::MatrixXd(0.5 * (m + m.transpose()));
  };
  const Eigen::MatrixXd a = random_pd();
  const Eigen::MatrixXd b = random_pd();
  Eigen::VectorXd x0(dimension);
  for (int i = 0; i < dimension; ++i) x0[i] = rng.Uniform(0.5, 1.5);
  QcqpInstance out;
  out.objective = SpdMatrix::Dense(a);
  out.objective_center = Eigen::VectorXd::Zero(dimension);
  out.constraint = Ellipsoid(SpdMatrix::Dense(b), x0, 0.25 * x0.dot(b * x0));
  out.lower = Eigen::VectorXd::Zero(dimension);
  out.upper = Eigen::VectorXd::Constant(dimension, 2.0);
  out.Validate();
  return out;
}

SamplerErrorRow RunSamplerCell(const QcqpInstance& instance, int n, std::uint64_t seed,
                               BoundarySampler sampler, int num_points,
                               const std::vector<int>& schedule) {
  const auto start = Clock::now();
  const OracleSolution oracle = ExactQcqp(instance);
  LinearizeOptions linearize;
  linearize.boundary.sampler = sampler;
  linearize.boundary.seed = StreamSeed(seed, 0x5a5a + static_cast<std::uint64_t>(n));
  // The box keeps every P(N) bounded, so short schedule prefixes are allowed
  // to miss a positively spanning cover.
  linearize.allow_unbounded_cover = true;
  SolveOptions solve;
  solve.polish = false;
  SolveReport report;
  if (schedule.empty()) {
    const int count = num_points > 0 ? num_points : DefaultNumPoints(n);
    report = SolveLinearized(Linearize(instance, count, linearize), solve);
  } else {
    report = Refine(instance, schedule, linearize, solve, &oracle.x);
  }
  SamplerErrorRow row;
  row.n = n;
  row.seed = seed;
  row.sampler = sampler;
  row.num_points = report.num_points;
  row.objective = report.objective;
  row.oracle_objective = oracle.objective;
  row.relative_error = (report.x - oracle.x).norm() / oracle.x.norm();
  row.trace = report.trace;
  row.seconds = Since(start);
  return row;
}

void RunSuite(const BenchConfig& config, const std::string& output_dir) {
  for (int n : config.interaction_dims) {
    if (n < 2) throw InvalidArgumentError("bench config: interaction dims must be >= 2");
  }
  for (int n : config.sampler_dims) {
    if (n < 2) throw InvalidArgumentError("bench config: sampler dims must be >= 2");
  }
  if ((!config.interaction_dims.empty() || !config.sampler_dims.empty()) &&
      config.seeds.empty()) {
    throw InvalidArgumentError("bench config: no seeds");
  }
  if (!config.sampler_dims.empty() && config.samplers.empty()) {
    throw InvalidArgumentError("bench config: no samplers");
  }
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw Error("cannot create output directory " + output_dir + ": " + ec.message());
  const std::filesystem::path dir(output_dir);

  struct Row {
    std::string experiment;
    int n;
    std::uint64_t seed;
    std::string method;
    int num_points;
    double objective;
    double reference;
    double error;
    double seconds;
    std::string status;
  };
  std::vector<Row> rows;
  const auto suite_start = Clock::now();
  auto out_of_time = [&]() { return Since(suite_start) > config.timeout_seconds; };
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (int n : config.interaction_dims) {
    for (std::uint64_t seed : config.seeds) {
      if (out_of_time()) {
        rows.push_back({"ignore_interaction", n, seed, "ignore-interaction", 0, nan, nan, nan, 0.0,
                        "timeout"});
        continue;
      }
      try {
        const InteractionErrorRow r = RunInteractionCell(n, seed, config.interaction);
        rows.push_back({"ignore_interaction", n, seed, "ignore-interaction", 0, r.naive_objective,
                        r.true_objective, r.relative_error, r.seconds, "ok"});
      } catch (const InfeasibleError&) {
        rows.push_back({"ignore_interaction", n, seed, "ignore-interaction", 0, nan, nan, nan,
                        0.0, "infeasible"});
      }
    }
  }
  for (int n : config.sampler_dims) {
    for (std::uint64_t seed : config.seeds) {
      const QcqpInstance instance = GenerateSamplerInstance(n, seed);
      for (BoundarySampler sampler : config.samplers) {
        const std::string method = BoundarySamplerName(sampler);
        if (out_of_time()) {
          rows.push_back({"sampler", n, seed, method, 0, nan, nan, nan, 0.0, "timeout"});
          continue;
        }
        const SamplerErrorRow r =
            RunSamplerCell(instance, n, seed, sampler, config.num_points, config.schedule);
        rows.push_back({"sampler", n, seed, method, r.num_points, r.objective,
                        r.oracle_objective, r.relative_error, r.seconds, "ok"});
        if (!r.trace.empty()) {
          std::ofstream trace = OpenOutput(dir / ("trace_" + method + "_n" + std::to_string(n) +
                                                  "_s" + std::to_string(seed) + ".csv"));
          trace << "N,objective,error\n";
          for (const TracePoint& p : r.trace) {
            trace << p.num_points << ',' << FormatDouble(p.objective) << ','
                  << FormatDouble(p.relative_error) << '\n';
          }
        }
      }
    }
  }

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.experiment, a.n, a.seed, a.method) <
           std::tie(b.experiment, b.n, b.seed, b.method);
  });
  {
    std::ofstream out = OpenOutput(dir / "results.csv");
    out << "experiment,n,seed,method,num_points,objective,reference_objective,error,status";
    if (config.timing) out << ",seconds";
    out << '\n';
    for (const Row& r : rows) {
      out << r.experiment << ',' << r.n << ',' << r.seed << ',' << r.method << ','
          << r.num_points << ',' << FormatDouble(r.objective) << ','
          << FormatDouble(r.reference) << ',' << FormatDouble(r.error) << ',' << r.status;
      if (config.timing) out << ',' << FormatDouble(r.seconds);
      out << '\n';
    }
  }

  // Wide summary: one median-error column per method.
  const std::vector<std::string> method_order = {"ignore-interaction", "net", "cube", "sphere"};
  std::set<std::string> present;
  for (const Row& r : rows) present.insert(r.method);
  std::vector<std::string> methods;
  for (const std::string& m : method_order) {
    if (present.contains(m)) methods.push_back(m);
  }
  std::map<std::pair<std::string, int>, std::map<std::string, std::vector<double>>> groups;
  for (const Row& r : rows) {
    auto& bucket = groups[{r.experiment, r.n}][r.method];
    if (r.status == "ok") bucket.push_back(r.error);
  }
  std::ofstream summary = OpenOutput(dir / "summary.csv");
  summary << "experiment,n";
  for (const std::string& m : methods) summary << ',' << m;
  summary << '\n';
  for (const auto& [key, by_method] : groups) {
    summary << key.first << ',' << key.second;
    for (const std::string& m : methods) {
      summary << ',';
      const auto it = by_method.find(m);
      if (it != by_method.end() && !it->second.empty()) summary << FormatDouble(Median(it->second));
    }
    summary << '\n';
  }
}

}  // namespace moo
