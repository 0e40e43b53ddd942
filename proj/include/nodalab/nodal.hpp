#pragma once

#include "nodalab/spectra.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <vector>

namespace nodalab {

/// Nodal domains of a sampled field. Label 0 marks zero cells; domains are
/// numbered 1..count() in order of first appearance in lattice order.
struct DomainLabeling {
  Eigen::ArrayXi labels;
  std::vector<int> signs;
  std::vector<double> volumes;
  std::vector<double> max_abs;
  std::vector<std::int64_t> argmax;
  double zero_volume = 0.0;
  /// Cells with |value| <= threshold were treated as zero.
  double zero_threshold = 0.0;

  int count() const { return static_cast<int>(signs.size()); }
  // Domain ids are 1-based.
  int sign(int id) const { return signs.at(id - 1); }
  double volume(int id) const { return volumes.at(id - 1); }
  double peak(int id) const { return max_abs.at(id - 1); }
  std::int64_t peak_index(int id) const { return argmax.at(id - 1); }
};

constexpr double kDefaultZeroTolerance = 1e-9;

/// Face-adjacency union-find labeling of {u > 0} and {u < 0}; torus adjacency wraps.
/// Throws std::invalid_argument("degenerate field") if every sample is zero.
DomainLabeling label_nodal_domains(const ScalarGrid& grid,
                                   double zero_tolerance = kDefaultZeroTolerance);

struct DomainRadii {
  int domain_id = 0;
  double inradius = 0.0;
  Point incenter;
  double centered_inradius = 0.0;
};

/// Per-domain distances to the complement of the domain, from an exact
/// squared Euclidean distance transform on a window around each domain.
std::vector<DomainRadii> inradius_report(const DomainLabeling& labeling, const ScalarGrid& grid);

/// Decides whether a point lies in a given nodal domain. With an analytic
/// mode the sign is evaluated exactly and connectivity is taken from the
/// labels of the lattice cell containing the point; plain grids use the
/// nearest lattice point.
class DomainMembership {
 public:
  DomainMembership(const ScalarGrid& grid, const DomainLabeling& labeling, int domain_id);
  bool contains(const Point& x) const;

 private:
  const ScalarGrid& grid_;
  const DomainLabeling& labeling_;
  int domain_id_;
  int sign_;
};

/// Refinement of the lattice used when counting volume inside small balls.
constexpr int kDeficiencyOversampling = 8;

/// Volume fraction of B(x_max, δλ^{-1/2}) lying outside the domain, counted
/// on the lattice h/8 (analytic fields) or the grid itself (plain fields).
double deficiency_ratio(const DomainLabeling& labeling, const ScalarGrid& grid, int domain_id,
                        double delta);

struct ClassicalBounds {
  /// min over domains of Vol(Ω) λ^{d/2}
  double faber_krahn_min = 0.0;
  /// Smallest r such that every ball of radius r around a lattice point meets
  /// both signs or a zero cell.
  double zero_hitting_radius = 0.0;
};

ClassicalBounds classical_bounds_report(const DomainLabeling& labeling, const ScalarGrid& grid,
                                        double eigenvalue);

/// Faber–Krahn constant Vol(B)·λ₁(B)^{d/2} of the unit ball: π j₀² (d=2), (4π/3) j_{1/2}³ (d=3).
double faber_krahn_constant(int dimension);

/// One CSV row per domain:
/// lambda,domain_id,sign,volume,inradius,centered_inradius,argmax_x,argmax_y[,argmax_z],faber_krahn
void write_domain_csv(std::ostream& out, const DomainLabeling& labeling,
                      const std::vector<DomainRadii>& radii, const ScalarGrid& grid,
                      bool header = true);

}  // namespace nodalab
