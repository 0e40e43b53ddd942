#pragma once

#include "nodalab/field_sup.hpp"
#include "nodalab/nodal.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>

namespace nodalab {

/// N(f, R) = log2(sup_{2R}|f| / sup_R|f|), both sups on the same lattice.
/// oversampling = 0 picks auto_oversampling(grid, 2R).
/// Throws std::invalid_argument if 2R does not fit or sup_R |f| = 0.
double doubling_index(const ScalarGrid& grid, const Region& region, int oversampling = 0);

using SubcubeIndex = std::array<int, 3>;

/// Record of one cube-chain run inside Q_δ around the maximum point of a domain.
struct ChainReport {
  double lambda = 0.0;
  double delta = 0.0;
  int A = 0;
  int A_prime = 0;
  Point q_delta_center;
  double q_delta_side = 0.0;
  double subcube_side = 0.0;
  int oversampling = 1;

  /// Vol(q \ Ω)/Vol(q) for all A^d subcubes, lattice order of subcube indices.
  std::vector<double> volume_fractions;
  double max_volume_fraction = 0.0;
  /// All fractions <= 1/2.
  bool partition_premise_holds = false;

  SubcubeIndex q0{0, 0, 0};
  /// q_1, q_2, ...
  std::vector<SubcubeIndex> chain;
  /// N(q_0), N(q_1), ...
  std::vector<double> N_sequence;
  /// sup_{q_k}|u|, aligned with N_sequence.
  std::vector<double> sup_sequence;

  /// sup over Ω (refined around x_max) and over (2A'+1)q_c.
  double sup_domain = 0.0;
  double sup_block = 0.0;
  /// sup_{q_0}|u| >= sup_Ω|u|.
  bool q0_hypothesis_holds = false;

  /// Certified lattice error of a sup, in log2 units, doubled.
  double epsilon_grid = 0.0;
  /// log2(sup_{q_k}/sup_{q_0}) - sum_{j<k} N(q_j), k = 1..
  std::vector<double> telescoping_slack;
  int telescoping_violations = 0;

  /// Least-squares shape of N(q_k) >= c2 * sum_{j<k} N(q_j) - c3.
  double c2_fit = 0.0;
  double c3_fit = 0.0;
  bool growth_verified = false;

  double df_ratio = 0.0;
  double sup_ratio = 0.0;
  bool truncated = false;
};

struct ChainOptions {
  /// 0: enough lattice refinement for 4 lattice steps per subcube side.
  int oversampling = 0;
  /// Sample points per axis inside each subcube for volume fractions.
  int fraction_samples = 4;
};

/// Partitions Q_δ (side 2δλ^{-1/2}/√d, centered at the domain maximum) into A^d
/// subcubes and follows the argmax chain from the maximal subcube of (2A'+1)q_c.
ChainReport run_chain(const ScalarGrid& grid, const DomainLabeling& labeling, int domain_id,
                      double delta, int A, const ChainOptions& options = {});

nlohmann::json to_json(const ChainReport& report);

struct RemezWitness {
  double sup_B = 0.0;
  double sup_E = 0.0;
  double vol_ratio = 0.0;
  double N = 0.0;
  double implied_constant = 1.0;
};

/// Smallest C >= 1 with sup_B <= C sup_E (C vol_ratio)^{C N}, by bisection.
double remez_implied_constant(double sup_B, double sup_E, double vol_ratio, double N);

/// E is a mask over grid points; it must be a nonempty subset of the lattice points of B.
RemezWitness remez_witness(const ScalarGrid& grid, const Ball& ball, const std::vector<char>& E);

/// Lattice points of a ball (grid indices), torus-wrapped.
std::vector<std::int64_t> ball_indices(const ScalarGrid& grid, const Ball& ball);

/// r · sup_{B(x,r/2)}|∇u| / sup_{B(x,r)}|u|.
double gradient_check(const ScalarGrid& grid, const Point& center, double r);

struct DoublingRow {
  double lambda = 0.0;
  int level = 0;
  std::uint64_t seed = 0;
  double n_max = 0.0;
};

/// Random eigenspace element per (level, seed) and the max doubling index over random balls
/// with radii in [0.05 r0, 0.5 r0). Sorted by λ.
std::vector<DoublingRow> df_sweep(const Geometry& geometry, const std::vector<int>& levels,
                                  const std::vector<std::uint64_t>& seeds, int balls_per_field,
                                  double samples_per_wavelength = 16.0);

struct TheoremRow {
  double lambda = 0.0;
  int level = 0;
  std::uint64_t seed = 0;
  int domains = 0;
  double min_centered_inradius = 0.0;
  double min_inradius = 0.0;
  double inverse_sqrt_lambda = 0.0;
  /// λ^{-1/2} (log λ)^{-(d-2)/2}
  double predicted_shape = 0.0;
};

/// Labels one field and records the minimum inradii over its domains.
TheoremRow theorem_row(const EigenMode& mode, int level, std::uint64_t seed,
                       double samples_per_wavelength = 16.0);

/// Minimum centered inradius over all nodal domains of each random eigenspace element.
std::vector<TheoremRow> main_theorem_sweep(const Geometry& geometry, const std::vector<int>& levels,
                                           const std::vector<std::uint64_t>& seeds,
                                           double samples_per_wavelength = 16.0);

/// The random field used for (level, seed) by the sweeps; nullopt if the level is empty.
std::optional<EigenMode> sweep_mode(const Geometry& geometry, int level, std::uint64_t seed);

}  // namespace nodalab
