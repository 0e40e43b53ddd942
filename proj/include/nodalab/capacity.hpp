#pragma once

#include "nodalab/heat.hpp"
#include "nodalab/nodal.hpp"

namespace nodalab {

struct CapacityResult {
  double energy_value = 0.0;
  double flux_value = 0.0;
  double relative_gap = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::int64_t unknowns = 0;
  /// Equilibrium potential on the condenser lattice.
  Eigen::ArrayXd potential;
};

/// Minimal discrete Dirichlet energy among lattice functions equal to 1 on K and
/// 0 outside U, with the flux through ∂K as a cross-check.
CapacityResult variational_capacity(const CondenserSpec& condenser);

/// cap of concentric spheres (d=3) or circles (d=2) of radii a < b.
double concentric_capacity(int dimension, double a, double b);

struct HeatBoundCheck {
  double cap = 0.0;
  double psi = 0.0;
  /// ∫_0^t inf_{y∈∂K} p_U(s, x, y) ds
  double kernel_integral = 0.0;
  /// ψ(t, x) - cap · kernel_integral
  double margin1 = 0.0;
  double psi_r2 = 0.0;
  /// cap / (ψ(r^2, x) r^{d-2})
  double proposition_ratio = 0.0;
  /// Share of kernel_integral from s < t/100.
  double small_time_fraction = 0.0;
  bool tail_warning = false;
};

/// Needs U to be a lattice-aligned box, x ∈ U \ K, K ⊂ B(x, r).
HeatBoundCheck capacity_heat_bound_check(const CondenserSpec& condenser, const Point& x, double t, double r,
                                         int time_nodes = 160, int steps = 40);

/// Radius of the smallest ball around x containing all K nodes.
double enclosing_radius(const CondenserSpec& condenser, const Point& x);

struct NodalCapacityReport {
  double lambda = 0.0;
  double delta = 0.0;
  /// δ λ^{-1/2}
  double rho = 0.0;
  int domain_id = 0;
  double spacing = 0.0;
  double half_width = 0.0;
  std::int64_t k_nodes = 0;
  bool vacuous = false;
  double cap = 0.0;
  /// ψ_{K,U}(δ²/λ, x_max)
  double psi = 0.0;
  double normalized_cap = 0.0;
  double normalized_temp = 0.0;
  /// mass of the zero-Dirichlet flow on U \ K at x_max after time δ²/λ
  double mass_u_minus_k = 0.0;
  /// Probability of leaving U before δ²/λ (box kernel)
  double exit_tail = 0.0;
  /// e^{-δ²}
  double decay = 0.0;
  /// mass_u_minus_k + exit_tail - decay
  double majorization_margin = 0.0;
  /// ψ + exit_tail - (1 - mass_u_minus_k)
  double raising_margin = 0.0;
};

/// Builds K from B(x_max, δλ^{-1/2}) \ Ω eroded by one node, U a box around x_max, and
/// measures capacity, temperature and the mass majorization. Needs δλ^{-1/2} < r0/2.
NodalCapacityReport nodal_capacity_experiment(const ScalarGrid& grid, const DomainLabeling& labeling,
                                              int domain_id, double delta);

nlohmann::json to_json(const NodalCapacityReport& report);

/// Vol(K) / cap(K, U)^{d/(d-2)}; d = 3 only.
double mazya_check(const CondenserSpec& condenser);

}  // namespace nodalab
