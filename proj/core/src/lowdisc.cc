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

#include "moo/lowdisc.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include "moo/error.h"
#include "moo/random.h"
#include "sobol_table.h"

namespace moo {
namespace {

constexpr int kBits = 32;
constexpr double kTwoPow32 = 4294967296.0;
// Compositions enumerated when computing t; beyond this t is left unknown.
constexpr double kMaxCompositions = 2e5;

// Generator columns of one coordinate: bit c of the point index contributes
// columns[c] (a 32-bit binary fraction) by XOR.
using Generator = std::vector<std::uint32_t>;

Generator SobolGenerator(int dimension, int m) {
  Generator v(std::max(m, 1));
  const internal::SobolEntry& entry = internal::kSobolTable[dimension];
  if (dimension == 0) {
    for (int c = 0; c < static_cast<int>(v.size()); ++c) v[c] = 1u << (kBits - 1 - c);
    return v;
  }
  const int degree = entry.degree;
  std::vector<std::uint32_t> direction(std::max<int>(v.size(), degree));
  for (int k = 0; k < degree; ++k) direction[k] = entry.initial[k];
  for (int k = degree; k < static_cast<int>(direction.size()); ++k) {
    std::uint32_t value = direction[k - degree] ^ (direction[k - degree] << degree);
    for (int i = 1; i < degree; ++i) {
      if ((entry.polynomial >> (degree - i)) & 1u) value ^= direction[k - i] << i;
    }
    direction[k] = value;
  }
  for (int c = 0; c < static_cast<int>(v.size()); ++c) {
    v[c] = direction[c] << (kBits - 1 - c);
  }
  return v;
}

Generator RadicalInverseGenerator(int m) {
  // i / 2^m: bit c of i has weight 2^{c - m}.
  Generator v(std::max(m, 1), 0u);
  for (int c = 0; c < m; ++c) v[c] = 1u << (kBits - m + c);
  return v;
}

// Row r (output digit r + 1) of a generator restricted to m columns, packed
// as an m-bit mask.
std::uint64_t GeneratorRow(const Generator& g, int row, int m) {
  std::uint64_t mask = 0;
  for (int c = 0; c < m; ++c) {
    if ((g[c] >> (kBits - 1 - row)) & 1u) mask |= std::uint64_t{1} << c;
  }
  return mask;
}

// True if every composition (d_1..d_s) of `strength` stacks linearly
// independent generator rows.
bool HasStrength(const std::vector<Generator>& generators, int m, int strength) {
  const int s = static_cast<int>(generators.size());
  std::vector<std::vector<std::uint64_t>> rows(s);
  for (int d = 0; d < s; ++d) {
    for (int r = 0; r < strength; ++r) rows[d].push_back(GeneratorRow(generators[d], r, m));
  }
  // Depth-first over compositions with an incrementally reduced basis.
  std::function<bool(int, int, std::vector<std::uint64_t>&)> visit =
      [&](int d, int remaining, std::vector<std::uint64_t>& basis) -> bool {
    if (d == s - 1) {
      std::vector<std::uint64_t> local = basis;
      for (int r = 0; r < remaining; ++r) {
        std::uint64_t row = rows[d][r];
        for (std::uint64_t b : local) row = std::min(row, row ^ b);
        if (row == 0) return false;
        local.push_back(row);
        std::sort(local.rbegin(), local.rend());
      }
      return true;
    }
    std::vector<std::uint64_t> local = basis;
    for (int take = 0; take <= remaining; ++take) {
      if (take > 0) {
        std::uint64_t row = rows[d][take - 1];
        for (std::uint64_t b : local) row = std::min(row, row ^ b);
        if (row == 0) return false;
        local.push_back(row);
        std::sort(local.rbegin(), local.rend());
      }
      if (!visit(d + 1, remaining - take, local)) return false;
    }
    return true;
  };
  std::vector<std::uint64_t> basis;
  return visit(0, strength, basis);
}

// Smallest t such that the generators define a (t, m, s)-net, or -1 when
// the enumeration is too large.
int QualityParameter(const std::vector<Generator>& generators, int m) {
  const int s = static_cast<int>(generators.size());
  for (int strength = m; strength >= 0; --strength) {
    const double count = boost::math::binomial_coefficient<double>(
        static_cast<unsigned>(strength + s - 1), static_cast<unsigned>(s - 1));
    if (count > kMaxCompositions) return -1;
    if (HasStrength(generators, m, strength)) return m - strength;
  }
  return m;
}

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

const char* PointSpaceName(PointSpace space) {
  switch (space) {
    case PointSpace::kUnitCube:
      return "unit-cube";
    case PointSpace::kUnitSphere:
      return "unit-sphere";
    case PointSpace::kEllipsoidBoundary:
      return "ellipsoid-boundary";
  }
  return "unknown";
}

int MaxSobolDimension() { return internal::kSobolTableSize; }

PointSet DigitalNet(int m, int s, const NetOptions& options) {
  if (s < 1) throw InvalidArgumentError("DigitalNet: dimension must be >= 1");
  if (m < 0 || m > 30) throw InvalidArgumentError("DigitalNet: m must be in [0, 30]");
  const bool hammersley = options.construction == NetConstruction::kHammersley;
  const int sobol_dims = hammersley ? s - 1 : s;
  if (sobol_dims > MaxSobolDimension()) {
    throw InvalidArgumentError("DigitalNet: dimension " + std::to_string(s) +
                               " exceeds the direction-number table (" +
                               std::to_string(MaxSobolDimension()) + ")");
  }
  std::vector<Generator> generators;
  if (hammersley) generators.push_back(RadicalInverseGenerator(m));
  for (int d = 0; d < sobol_dims; ++d) generators.push_back(SobolGenerator(d, m));

  std::vector<std::uint32_t> shift(s, 0u);
  if (options.digital_shift) {
    Rng rng(options.shift_seed);
    for (auto& value : shift) value = static_cast<std::uint32_t>(rng.Bits() >> 32);
  }

  const std::int64_t count = std::int64_t{1} << m;
  PointSet out;
  out.space = PointSpace::kUnitCube;
  out.source = hammersley ? "hammersley" : "sobol";
  out.m = m;
  out.base = 2;
  out.seed = options.digital_shift ? options.shift_seed : 0;
  out.points.resize(count, s);
  for (int d = 0; d < s; ++d) {
    std::uint32_t value = 0;
    for (std::int64_t i = 0; i < count; ++i) {
      if (i > 0 && !hammersley) {
        // Natural order: XOR in the columns of every changed bit.
        std::int64_t changed = i ^ (i - 1);
        for (int c = 0; changed; ++c, changed >>= 1) {
          if (changed & 1) value ^= generators[d][c];
        }
      } else if (hammersley) {
        value = 0;
        for (int c = 0; c < m; ++c) {
          if ((i >> c) & 1) value ^= generators[d][c];
        }
      }
      out.points(i, d) = static_cast<double>(value ^ shift[d]) / kTwoPow32;
    }
  }
  for (int d = 1; d <= s; ++d) {
    std::vector<Generator> prefix(generators.begin(), generators.begin() + d);
    out.t_by_dimension.push_back(QualityParameter(prefix, m));
  }
  out.t = out.t_by_dimension.back();
  return out;
}

bool VerifyNetProperty(const PointSet& cube_points, int t) {
  const int s = cube_points.dimension();
  const int m = cube_points.m;
  if (cube_points.space != PointSpace::kUnitCube || m < 0 ||
      cube_points.size() != (1 << m) || t < 0 || t > m) {
    throw InvalidArgumentError("VerifyNetProperty: expected a cube net of size 2^m");
  }
  const int strength = m - t;
  std::vector<int> parts(s, 0);
  // Enumerate compositions of `strength` into s parts.
  std::function<bool(int, int)> visit = [&](int d, int remaining) -> bool {
    if (d == s - 1) {
      parts[d] = remaining;
      std::vector<int> counts(std::size_t{1} << strength, 0);
      for (int i = 0; i < cube_points.size(); ++i) {
        std::uint64_t key = 0;
        for (int k = 0; k < s; ++k) {
          const auto cell = static_cast<std::uint64_t>(
              std::floor(cube_points.points(i, k) * static_cast<double>(1ULL << parts[k])));
          key = (key << parts[k]) | cell;
        }
        ++counts[key];
      }
      const int expected = 1 << t;
      return std::all_of(counts.begin(), counts.end(),
                         [&](int c) { return c == expected; });
    }
    for (int take = 0; take <= remaining; ++take) {
      parts[d] = take;
      if (!visit(d + 1, remaining - take)) return false;
    }
    return true;
  };
  return visit(0, strength);
}

Eigen::VectorXd MapToSphere(const Eigen::VectorXd& y, HeightMap heights) {
  const int s = static_cast<int>(y.size());
  if (s < 1) throw InvalidArgumentError("MapToSphere: empty point");
  Eigen::VectorXd x(s + 1);
  const double angle = 2.0 * std::numbers::pi * y[0];
  x[0] = std::cos(angle);
  x[1] = std::sin(angle);
  for (int k = 1; k < s; ++k) {
    // Stage d = k + 1 lifts the unit sphere of R^{d} into R^{d+1}.
    const int d = k + 1;
    double height;
    if (heights == HeightMap::kLinear || d == 2) {
      height = 1.0 - 2.0 * y[k];
    } else if (y[k] <= 0.0 || y[k] >= 1.0) {
      height = y[k] <= 0.0 ? 1.0 : -1.0;
    } else {
      // Beta(d/2, d/2) quantile through the Student t with d degrees of freedom.
      const double t =
          boost::math::quantile(boost::math::students_t_distribution<double>(d), y[k]);
      height = -t / std::sqrt(d + t * t);
    }
    const double radius = std::sqrt(std::max(0.0, 1.0 - height * height));
    x.head(k + 1) *= radius;
    x[k + 1] = height;
  }
  return x;
}

PointSet MapToSphere(const PointSet& cube_points, HeightMap heights) {
  if (cube_points.space != PointSpace::kUnitCube) {
    throw InvalidArgumentError("MapToSphere: expected unit-cube points");
  }
  PointSet out = cube_points;
  out.space = PointSpace::kUnitSphere;
  out.points.resize(cube_points.size(), cube_points.dimension() + 1);
  for (int i = 0; i < cube_points.size(); ++i) {
    out.points.row(i) = MapToSphere(Eigen::VectorXd(cube_points.points.row(i)), heights);
  }
  return out;
}

PointSet MapToEllipsoid(const PointSet& sphere_points, const Ellipsoid& ellipsoid) {
  if (sphere_points.space != PointSpace::kUnitSphere) {
    throw InvalidArgumentError("MapToEllipsoid: expected unit-sphere points");
  }
  if (sphere_points.dimension() != ellipsoid.dimension()) {
    throw InvalidArgumentError("MapToEllipsoid: dimension mismatch");
  }
  PointSet out = sphere_points;
  out.space = PointSpace::kEllipsoidBoundary;
  for (int i = 0; i < out.size(); ++i) {
    out.points.row(i) = ellipsoid.FromSphere(Eigen::VectorXd(sphere_points.points.row(i)));
  }
  return out;
}

PointSet EllipsoidToSphere(const PointSet& boundary_points, const Ellipsoid& ellipsoid) {
  if (boundary_points.space != PointSpace::kEllipsoidBoundary ||
      boundary_points.dimension() != ellipsoid.dimension()) {
    throw InvalidArgumentError("EllipsoidToSphere: expected boundary points of this ellipsoid");
  }
  PointSet out = boundary_points;
  out.space = PointSpace::kUnitSphere;
  for (int i = 0; i < out.size(); ++i) {
    out.points.row(i) = ellipsoid.ToSphere(Eigen::VectorXd(boundary_points.points.row(i)));
  }
  return out;
}

const char* BoundarySamplerName(BoundarySampler sampler) {
  switch (sampler) {
    case BoundarySampler::kNet:
      return "net";
    case BoundarySampler::kCube:
      return "cube";
    case BoundarySampler::kSphere:
      return "sphere";
  }
  return "unknown";
}

BoundarySampler ParseBoundarySampler(const std::string& name) {
  if (name == "net") return BoundarySampler::kNet;
  if (name == "cube") return BoundarySampler::kCube;
  if (name == "sphere") return BoundarySampler::kSphere;
  throw InvalidArgumentError("unknown sampler '" + name + "' (expected net, cube or sphere)");
}

PointSet GenerateBoundaryPoints(const Ellipsoid& ellipsoid, int count,
                                const BoundaryOptions& options) {
  const int dim = ellipsoid.dimension();
  if (dim < 2) throw InvalidArgumentError("GenerateBoundaryPoints: dimension must be >= 2");
  if (count < 1) throw InvalidArgumentError("GenerateBoundaryPoints: count must be >= 1");
  PointSet sphere;
  switch (options.sampler) {
    case BoundarySampler::kNet: {
      if (!IsPowerOfTwo(count)) {
        throw InvalidArgumentError("GenerateBoundaryPoints: net size must be a power of two");
      }
      const int m = std::countr_zero(static_cast<unsigned>(count));
      sphere = MapToSphere(DigitalNet(m, dim - 1, options.net), options.heights);
      break;
    }
    case BoundarySampler::kCube: {
      Rng rng(options.seed);
      PointSet cube;
      cube.space = PointSpace::kUnitCube;
      cube.source = "uniform-cube";
      cube.seed = options.seed;
      cube.points.resize(count, dim - 1);
      for (int i = 0; i < count; ++i) {
        for (int d = 0; d < dim - 1; ++d) cube.points(i, d) = rng.Uniform();
      }
      sphere = MapToSphere(cube, options.heights);
      break;
    }
    case BoundarySampler::kSphere: {
      Rng rng(options.seed);
      sphere.space = PointSpace::kUnitSphere;
      sphere.source = "uniform-sphere";
      sphere.seed = options.seed;
      sphere.points.resize(count, dim);
      for (int i = 0; i < count; ++i) sphere.points.row(i) = rng.UnitVector(dim);
      break;
    }
  }
  return MapToEllipsoid(sphere, ellipsoid);
}

double RieszEnergy(const Eigen::MatrixXd& points, double exponent) {
  const int n = static_cast<int>(points.rows());
  if (n < 2) throw InvalidArgumentError("RieszEnergy: need at least two points");
  if (!(exponent > 0.0)) throw InvalidArgumentError("RieszEnergy: exponent must be positive");
  double energy = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double distance = (points.row(i) - points.row(j)).norm();
      if (distance == 0.0) {
        throw InvalidArgumentError("RieszEnergy: coincident points " + std::to_string(i) +
                                   " and " + std::to_string(j));
      }
      energy += 2.0 * std::pow(distance, -exponent);
    }
  }
  return energy;
}

double SphericalCapMeasure(int ambient_dimension, double height) {
  if (ambient_dimension < 2) throw InvalidArgumentError("SphericalCapMeasure: dimension < 2");
  if (height >= 1.0) return 0.0;
  if (height <= -1.0) return 1.0;
  const double k = ambient_dimension - 1;
  const double small = 0.5 * boost::math::ibeta(0.5 * k, 0.5, 1.0 - height * height);
  return height >= 0.0 ? small : 1.0 - small;
}

double CapDiscrepancy(const Eigen::MatrixXd& sphere_points, int num_caps, std::uint64_t seed) {
  const int n = static_cast<int>(sphere_points.rows());
  const int dim = static_cast<int>(sphere_points.cols());
  if (n == 0) throw InvalidArgumentError("CapDiscrepancy: empty point set");
  Rng rng(seed);
  double worst = 0.0;
  for (int c = 0; c < num_caps; ++c) {
    const Eigen::VectorXd axis = rng.UnitVector(dim);
    const double height = rng.Uniform(-1.0, 1.0);
    const Eigen::VectorXd projections = sphere_points * axis;
    const double inside = static_cast<double>((projections.array() >= height).count());
    worst = std::max(worst, std::abs(inside / n - SphericalCapMeasure(dim, height)));
  }
  return worst;
}

}  // namespace moo
