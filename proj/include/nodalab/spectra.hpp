#pragma once

#include "nodalab/geometry.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nodalab {

/// Analytic form of one term of an eigenfunction.
///  - sin_product: prod_i sin(pi m_i x_i / L_i)          (Dirichlet box)
///  - plane_cos:   cos(2 pi sum_i k_i x_i / L_i)         (torus)
///  - plane_sin:   sin(2 pi sum_i k_i x_i / L_i)         (torus)
enum class Phase { sin_product, plane_cos, plane_sin };

std::string to_string(Phase phase);
Phase phase_from_string(const std::string& name);

struct ModeTerm {
  IntVector k;
  Phase phase = Phase::plane_cos;
  double coeff = 1.0;
};

/// Eigenvalue of a single term on the given geometry.
double term_eigenvalue(const Geometry& geometry, const ModeTerm& term);

/// An exact Laplace eigenfunction -Δu = λu on a flat geometry, stored as a
/// finite combination of analytic terms sharing the same λ.
struct EigenMode {
  Geometry geometry;
  double eigenvalue = 0.0;
  std::vector<ModeTerm> terms;

  double value(const Point& x) const;
  Point gradient(const Point& x) const;

  /// sqrt(λ) * sum |c_i|, an upper bound for |∇u| everywhere.
  double gradient_bound() const;

  /// Throws std::invalid_argument if a term violates the eigenvalue relation.
  void validate() const;
};

EigenMode box_mode(const Geometry& geometry, const IntVector& m);

/// Real basis of the eigenspace λ = 4π²n on the unit flat torus: for each
/// lexicographically positive k with |k|² = n, cos(2πk·x) then sin(2πk·x).
/// Level 0 gives the constant function. Levels without lattice points give
/// an empty basis.
std::vector<EigenMode> torus_eigenspace(const Geometry& geometry, int level);

/// Lattice vectors k in Z^d with |k|² = n, lexicographically sorted.
std::vector<IntVector> lattice_points_on_sphere(int dimension, int n);

/// Standard normal draws: std::mt19937_64 seeded with `seed`, uniforms from the
/// top 53 bits, Box–Muller pairs (cos branch first).
std::vector<double> standard_normals(std::uint64_t seed, std::size_t count);

/// Random element of span(basis) with coefficient vector normalized to unit length.
EigenMode random_combination(std::span<const EigenMode> basis, std::uint64_t seed);

/// Coefficients applied to each basis element by random_combination.
std::vector<double> random_coefficients(std::size_t count, std::uint64_t seed);

/// A sampled scalar field on the cell-corner lattice x = i·h, h = L/N.
/// The box lattice has N+1 points per axis (both walls sampled); the torus
/// lattice has N points per axis with periodic indexing.
struct ScalarGrid {
  Geometry geometry;
  int resolution = 0;
  LatticeIndexer lattice;
  Eigen::ArrayXd values;
  std::vector<Eigen::ArrayXd> gradient;
  /// λ of the sampled eigenfunction, or 0 for plain fields.
  double eigenvalue = 0.0;
  /// Analytic source, when the field came from an EigenMode.
  std::optional<EigenMode> mode;
  std::string source;

  int dimension() const { return geometry.dimension; }
  double spacing(int axis) const { return geometry.sides[axis] / resolution; }
  int points_per_axis() const { return geometry.periodic() ? resolution : resolution + 1; }
  std::int64_t size() const { return lattice.size(); }
  Point position(std::int64_t index) const;
  /// Volume of the dual cell of a lattice point; these sum to the geometry volume.
  double dual_cell_volume(std::int64_t index) const;
  bool has_gradient() const { return !gradient.empty(); }
};

/// Smallest N with at least `samples_per_wavelength` samples per wavelength 2π/√λ on every axis.
int minimum_resolution(const Geometry& geometry, double eigenvalue,
                       double samples_per_wavelength = 16.0);

/// Samples a mode on the lattice. Refuses resolutions below the 16-per-wavelength floor.
ScalarGrid sample_field(const EigenMode& mode, int resolution, bool with_gradient = false);

/// Samples an arbitrary function (no analytic source attached).
ScalarGrid sample_function(const Geometry& geometry, int resolution,
                           const std::function<double(const Point&)>& f,
                           double eigenvalue = 0.0, std::string source = "function");

}  // namespace nodalab
