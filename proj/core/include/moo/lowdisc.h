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

// Base-2 digital nets, the cylindrical map from the unit cube to the unit
// sphere, the affine map from the sphere to an ellipsoid boundary, and Riesz
// energies of point sets.

#ifndef MOO_LOWDISC_H_
#define MOO_LOWDISC_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "moo/ellipsoid.h"

namespace moo {

enum class PointSpace { kUnitCube, kUnitSphere, kEllipsoidBoundary };

const char* PointSpaceName(PointSpace space);

// One point per row.
struct PointSet {
  PointSpace space = PointSpace::kUnitCube;
  Eigen::MatrixXd points;
  // "sobol", "hammersley", "uniform-cube", "uniform-sphere", ...
  std::string source;
  // Net parameters; t = -1 when the set is not a net.
  int t = -1;
  int m = -1;
  int base = 2;
  // t of the projection onto the first d+1 coordinates, d = 0..s-1.
  std::vector<int> t_by_dimension;
  std::uint64_t seed = 0;

  int size() const { return static_cast<int>(points.rows()); }
  int dimension() const { return static_cast<int>(points.cols()); }
};

enum class NetConstruction {
  // First 2^m points of the Sobol sequence (Joe-Kuo direction numbers).
  // Prefixes of larger nets, so point sets for increasing m are nested.
  kSobolPrefix,
  // Coordinate 0 is i / 2^m, the rest are Sobol coordinates 0..s-2. Gives
  // t = 0 for s <= 3; not nested in m.
  kHammersley,
};

struct NetOptions {
  NetConstruction construction = NetConstruction::kSobolPrefix;
  // XOR every coordinate with a random 32-bit digit vector. Preserves t.
  bool digital_shift = false;
  std::uint64_t shift_seed = 0;
};

// Number of coordinates the Sobol direction-number table supports.
int MaxSobolDimension();

// 2^m points in [0,1)^s with exact dyadic coordinates (32 bits). Throws
// InvalidArgumentError if s exceeds the direction-number table, m > 30 or
// s < 1.
PointSet DigitalNet(int m, int s, const NetOptions& options = {});

// Checks every elementary dyadic box of volume 2^{t-m} holds exactly 2^t
// points. The set must be a cube point set of size 2^m.
bool VerifyNetProperty(const PointSet& cube_points, int t);

enum class HeightMap {
  // Height of stage d drawn so that the output is uniform on every sphere:
  // t = 1 - 2 F^{-1}(y) with F the Beta(d/2, d/2) distribution function.
  // Coincides with the linear map on the 2-sphere.
  kEqualArea,
  // t = 1 - 2y at every stage. Area preserving on the 2-sphere only.
  kLinear,
};

// Cylindrical composition: y_1 -> (cos 2 pi y_1, sin 2 pi y_1), then
// x_d = (sqrt(1 - t_d^2) x_{d-1}, t_d). Maps [0,1)^s to unit vectors in R^{s+1}.
PointSet MapToSphere(const PointSet& cube_points, HeightMap heights = HeightMap::kEqualArea);
Eigen::VectorXd MapToSphere(const Eigen::VectorXd& y, HeightMap heights = HeightMap::kEqualArea);

// x -> sqrt(level) B^{-1/2} x + center for every point.
PointSet MapToEllipsoid(const PointSet& sphere_points, const Ellipsoid& ellipsoid);
// Inverse of MapToEllipsoid.
PointSet EllipsoidToSphere(const PointSet& boundary_points, const Ellipsoid& ellipsoid);

enum class BoundarySampler {
  kNet,      // digital net -> sphere -> ellipsoid
  kCube,     // uniform random cube points -> sphere -> ellipsoid
  kSphere,   // normalized Gaussian vectors -> ellipsoid
};

const char* BoundarySamplerName(BoundarySampler sampler);
// Accepts "net", "cube", "sphere". Throws InvalidArgumentError otherwise.
BoundarySampler ParseBoundarySampler(const std::string& name);

struct BoundaryOptions {
  BoundarySampler sampler = BoundarySampler::kNet;
  std::uint64_t seed = 0;
  NetOptions net;
  HeightMap heights = HeightMap::kEqualArea;
};

// Points on the boundary of the ellipsoid (dimension >= 2). For the net
// sampler `count` must be a power of two.
PointSet GenerateBoundaryPoints(const Ellipsoid& ellipsoid, int count,
                                const BoundaryOptions& options = {});

// sum over ordered pairs i != j of |x_i - x_j|^{-exponent}. Throws
// InvalidArgumentError for fewer than two points or coincident points.
double RieszEnergy(const Eigen::MatrixXd& points, double exponent);

// Normalized surface measure of the cap {u : <u, axis> >= height} on the unit
// sphere in R^{ambient}.
double SphericalCapMeasure(int ambient_dimension, double height);

// Largest |empirical fraction - cap measure| over `num_caps` random caps
// (uniform axis, uniform height in (-1, 1)) for unit vectors in rows.
double CapDiscrepancy(const Eigen::MatrixXd& sphere_points, int num_caps,
                      std::uint64_t seed);

}  // namespace moo

#endif  // MOO_LOWDISC_H_
