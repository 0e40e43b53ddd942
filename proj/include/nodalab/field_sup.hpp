#pragma once

#include "nodalab/spectra.hpp"

#include <variant>

namespace nodalab {

struct Ball {
  Point center;
  double radius = 0.0;
};

/// Axis-aligned closed cube.
struct Cube {
  Point center;
  double half_side = 0.0;
};

using Region = std::variant<Ball, Cube>;

/// The concentric region scaled by `factor` (2B, 2q, ...).
Region scaled(const Region& region, double factor);
/// Radius of the smallest concentric ball containing the region.
double circumradius(const Region& region);
/// Box: the region lies inside [0,L]^d. Torus: circumradius < r0.
bool fits_in(const Region& region, const Geometry& geometry);
bool contains(const Region& region, const Point& x);

/// Samples of an analytic mode on a tensor lattice {x_0[i]} x {x_1[j]} x {x_2[k]}, x fastest.
struct TensorSamples {
  std::array<std::vector<double>, 3> coords;
  Eigen::ArrayXd values;
  /// |∇u| at each sample, when requested.
  Eigen::ArrayXd gradient_norm;
};

TensorSamples evaluate_tensor(const EigenMode& mode, std::array<std::vector<double>, 3> coords,
                              bool with_gradient = false);

/// sup |u| (or sup |∇u|) over the lattice points of a region.
struct LocalSup {
  double value = 0.0;
  Point argmax;
  /// Bound on sup over the continuum region minus `value`: G · (half lattice diagonal).
  double error_bound = 0.0;
  std::int64_t samples = 0;
};

/// Lattice refinement for a region: 4 on small regions of analytic fields, 1 otherwise.
int auto_oversampling(const ScalarGrid& grid, const Region& region);

/// sup over lattice points j·h/f (global lattice anchored at the origin) inside the region.
/// Analytic fields are evaluated exactly; plain grids need f = 1.
LocalSup local_sup(const ScalarGrid& grid, const Region& region, int oversampling);

/// sup |∇u| over the region; analytic gradient or the stored gradient arrays.
LocalSup local_gradient_sup(const ScalarGrid& grid, const Region& region, int oversampling);

/// Upper bound for |∇u| used in certified sup errors.
double gradient_bound(const ScalarGrid& grid);

}  // namespace nodalab
