#pragma once

#include "nodalab/condenser.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace nodalab {

/// Temperature ψ_{K,U}(t, ·) on the unknowns of a condenser system.
struct HeatFlowState {
  double time = 0.0;
  int step = 0;
  Eigen::VectorXd temperature;
  double step_size = 0.0;
  /// Largest relative CG residual over the steps taken so far.
  double solver_residual = 0.0;
};

/// Solver tolerance of every implicit step.
inline constexpr double kStepTolerance = 1e-12;
/// Solver tolerance of the elliptic equilibrium solve.
inline constexpr double kEquilibriumTolerance = 1e-12;

/// Implicit Euler for v' = -A v + source·b from `initial`, landing exactly on t_end with
/// ceil(t_end / step_size) equal steps. Returns the final state and every `checkpoint_every`-th.
std::vector<HeatFlowState> evolve(const CondenserSystem& system, const Eigen::VectorXd& initial,
                                  double t_end, double step_size, bool with_source,
                                  int checkpoint_every = 0);

/// ψ_{K,U}: boundary value 1 on K, 0 outside U, zero initial data.
/// Requires step_size <= t_end / 10.
std::vector<HeatFlowState> heat_flow_psi(const CondenserSystem& system, double t_end, double step_size,
                                         int checkpoint_every = 0);

/// Discrete harmonic potential: 1 on K, 0 outside U.
SolveReport equilibrium_potential(const CondenserSystem& system);

struct DeficitCheck {
  double discrepancy = 0.0;
  int steps = 0;
  double time = 0.0;
};

/// sup |(ψ^eq - ψ(t)) - P_t ψ^eq| where P_t is the zero-Dirichlet flow on U \ K with the same steps.
DeficitCheck deficit_identity_check(const CondenserSystem& system, double t, double step_size);

struct IntersectionCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
};

/// ∫_{W1∩W2}(p_{W1} - p_{W1∩W2}) dy <= 1 - ∫_{W2} p_{W2} dy, axis integrals in closed form.
IntersectionCheck intersection_check(const Box& w1, const Box& w2, const Point& x, double t);

struct KernelBoundRow {
  double t = 0.0;
  double dist = 0.0;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
};

struct KernelBoundReport {
  /// Upper Gaussian bound p <= C1 t^{-d/2} exp(-C2 dist^2 / t) with C2 fixed.
  double c1 = 0.0;
  double c2 = 0.2;
  double upper_min_margin = 0.0;
  /// Largest C3 with p >= C3 t^{-d/2} exp(-dist^2 / 4t).
  double c3 = 0.0;
  /// Largest ε with p_box / p_torus >= 1 - exp(-ε/t) for t <= norris_t0 and pairs in the inner box
  /// whose direct displacement is the minimal torus image.
  double norris_epsilon = 0.0;
  double norris_t0 = 0.0;
  int norris_samples = 0;
  std::vector<KernelBoundRow> rows;
};

/// Upper and lower Gaussian bounds for the torus kernel over (t, x, y), and the
/// boundary-blindness ratio for the box of half-width r0 centered in the torus.
KernelBoundReport kernel_bound_report(const Geometry& torus, const std::vector<double>& t_grid,
                                      const std::vector<std::pair<Point, Point>>& pairs,
                                      double norris_t0 = 0.05);

/// Random pairs in the torus cell, half of them inside the inner 3/4 box around the center.
std::vector<std::pair<Point, Point>> sample_point_pairs(const Geometry& torus, int count,
                                                        std::uint64_t seed);

void write_kernel_bound_csv(std::ostream& out, const KernelBoundReport& report);
nlohmann::json to_json(const KernelBoundReport& report);

/// Writes the lattice field of a state as float64 plus a JSON sidecar {t, step, residual, ...}.
std::vector<std::filesystem::path> save_checkpoint(const CondenserSystem& system, const HeatFlowState& state,
                                                   const std::filesystem::path& stem);

}  // namespace nodalab
