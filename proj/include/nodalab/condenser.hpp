#pragma once

#include "nodalab/kernels.hpp"

#include <Eigen/Sparse>

#include <optional>

namespace nodalab {

/// A condenser (K, U) on a regular lattice x = origin + j·h.
/// u_mask marks the nodes of the open set U, k_mask the nodes of K (K ⊂ U).
/// Nodes outside U carry temperature 0, nodes of K carry 1.
struct CondenserSpec {
  int dimension = 3;
  LatticeIndexer lattice;
  double spacing = 0.0;
  Point origin;
  std::vector<char> u_mask;
  std::vector<char> k_mask;
  bool allow_empty_k = false;
  std::string shape;
  /// Set when U is an axis-aligned box whose walls lie on lattice planes.
  std::optional<Box> u_box;

  Point position(std::int64_t index) const;
  std::int64_t node_count() const { return lattice.size(); }
  std::int64_t k_count() const;
  double k_volume() const;
  /// Nearest lattice index of a point; nullopt outside the lattice.
  std::optional<std::int64_t> nearest_index(const Point& x) const;

  /// Throws std::invalid_argument unless U avoids the outer lattice layer,
  /// K ⊂ U with two nodes of margin to the complement of U, and K is nonempty
  /// (unless allowed).
  void validate() const;
};

/// Empty condenser lattice spanning [lo, hi] at spacing h (hi rounded up to the lattice).
CondenserSpec condenser_lattice(const Point& lo, const Point& hi, double h);

/// U = open box with walls at lattice planes lo, hi.
void set_u_box(CondenserSpec& spec, const Box& box);
/// U = open ball.
void set_u_ball(CondenserSpec& spec, const Point& center, double radius);
/// Adds to K the nodes with pred(x) true.
template <typename Pred>
void add_to_k(CondenserSpec& spec, Pred pred) {
  for (std::int64_t i = 0; i < spec.node_count(); ++i)
    if (pred(spec.position(i))) spec.k_mask[i] = 1;
}

/// Concentric shells: K = closed ball of radius a, U = open ball of radius b, both centered
/// at `center`, on the lattice of spacing h over the unit cube.
CondenserSpec concentric_condenser(int dimension, double a, double b, double h,
                                   const Point& center);

/// Test shapes for K inside the box U = [0.1, 0.9]^d of the unit cube at spacing h:
/// "sphere", "cube", "slab", "l_shape", "two_balls".
CondenserSpec shape_condenser(int dimension, const std::string& shape, double h);
const std::vector<std::string>& condenser_shapes();

/// Linear system on the unknown nodes U \ K.
struct CondenserSystem {
  CondenserSpec spec;
  /// Lattice index of every unknown; -1 entries in `unknown_of` mark pinned nodes.
  std::vector<std::int64_t> node_of;
  std::vector<std::int64_t> unknown_of;
  /// Negative discrete Laplacian (2d+1 stencil, 1/h^2 scaling) on the unknowns.
  Eigen::SparseMatrix<double, Eigen::RowMajor> A;
  /// Contribution of the pinned value 1 on K.
  Eigen::VectorXd b;

  std::int64_t unknowns() const { return static_cast<std::int64_t>(node_of.size()); }
  /// Lattice field with K = 1 (or `k_value`) and 0 outside U.
  Eigen::ArrayXd full_field(const Eigen::VectorXd& v, double k_value = 1.0) const;
  /// Multilinear interpolation of a lattice field.
  double interpolate(const Eigen::ArrayXd& field, const Point& x) const;
};

CondenserSystem assemble(const CondenserSpec& spec);

struct SolveReport {
  Eigen::VectorXd solution;
  double residual = 0.0;
  int iterations = 0;
};

/// Conjugate gradient on a symmetric positive definite system; throws NumericalError
/// after 10·sqrt(n) iterations without reaching the relative residual `tolerance`.
SolveReport solve_spd(const Eigen::SparseMatrix<double, Eigen::RowMajor>& M, const Eigen::VectorXd& rhs,
                      double tolerance, const Eigen::VectorXd* guess = nullptr);

/// Discrete Dirichlet energy h^{d-2} Σ_edges (v_i - v_j)^2 of a lattice field.
double dirichlet_energy(const CondenserSpec& spec, const Eigen::ArrayXd& field);
/// h^{d-2} Σ over edges from K to a non-K node of (1 - v_j).
double boundary_flux(const CondenserSpec& spec, const Eigen::ArrayXd& field);

/// Midpoints of the lattice edges joining K to a non-K node.
std::vector<Point> k_boundary_faces(const CondenserSpec& spec);

}  // namespace nodalab
