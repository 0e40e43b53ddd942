#include "nodalab/doubling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

namespace nodalab {

double doubling_index(const ScalarGrid& grid, const Region& region, int oversampling) {
  const Region doubled = scaled(region, 2.0);
  if (!fits_in(doubled, grid.geometry))
    throw std::invalid_argument("doubled region does not fit in the geometry");
  const int f = oversampling > 0 ? oversampling : auto_oversampling(grid, doubled);
  const LocalSup inner = local_sup(grid, region, f);
  if (!(inner.value > 0.0)) throw std::invalid_argument("vanishing on inner region");
  const LocalSup outer = local_sup(grid, doubled, f);
  return std::log2(outer.value / inner.value);
}

namespace {

double h_max(const ScalarGrid& grid) {
  double h = 0.0;
  for (int a = 0; a < grid.dimension(); ++a) h = std::max(h, grid.spacing(a));
  return h;
}

}  // namespace

ChainReport run_chain(const ScalarGrid& grid, const DomainLabeling& labeling, int domain_id,
                      double delta, int A, const ChainOptions& options) {
  if (A < 5 || A % 4 != 1) throw std::invalid_argument("A must be of the form 4A'+1 with A' >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(grid.eigenvalue > 0.0)) throw std::invalid_argument("run_chain needs a positive eigenvalue");
  if (domain_id < 1 || domain_id > labeling.count()) throw std::invalid_argument("unknown domain id");

  const int d = grid.dimension();
  ChainReport r;
  r.lambda = grid.eigenvalue;
  r.delta = delta;
  r.A = A;
  r.A_prime = (A - 1) / 4;
  r.q_delta_center = grid.position(labeling.peak_index(domain_id));
  r.q_delta_side = 2.0 * delta / std::sqrt(grid.eigenvalue) / std::sqrt(static_cast<double>(d));
  r.subcube_side = r.q_delta_side / A;
  const Cube q_delta{r.q_delta_center, 0.5 * r.q_delta_side};
  if (!fits_in(q_delta, grid.geometry)) throw std::invalid_argument("Q_delta does not fit in the geometry");

  if (options.oversampling > 0) {
    r.oversampling = options.oversampling;
  } else {
    r.oversampling = static_cast<int>(std::ceil(4.0 * h_max(grid) / r.subcube_side - 1e-9));
    r.oversampling = std::max(r.oversampling, 1);
  }
  if (!grid.mode && r.oversampling > 1)
    throw std::invalid_argument("subcubes are finer than the grid and the field has no analytic mode");

  const double s = r.subcube_side;
  const Point lo = (r.q_delta_center.array() - 0.5 * r.q_delta_side).matrix();
  auto subcube_center = [&](const SubcubeIndex& q) {
    Point c(d);
    for (int a = 0; a < d; ++a) c[a] = lo[a] + (q[a] + 0.5) * s;
    return c;
  };
  auto containing = [&](const Point& x) {
    SubcubeIndex q{0, 0, 0};
    for (int a = 0; a < d; ++a)
      q[a] = std::clamp(static_cast<int>(std::floor((x[a] - lo[a]) / s)), 0, A - 1);
    return q;
  };

  // (i) volume fractions
  const DomainMembership member(grid, labeling, domain_id);
  const int m = std::max(options.fraction_samples, 1);
  const int a2 = d == 3 ? A : 1;
  r.volume_fractions.reserve(static_cast<std::size_t>(A) * A * a2);
  Point y(d);
  for (int k = 0; k < a2; ++k)
    for (int j = 0; j < A; ++j)
      for (int i = 0; i < A; ++i) {
        const SubcubeIndex q{i, j, k};
        const int mk = d == 3 ? m : 1;
        int outside = 0, total = 0;
        for (int kk = 0; kk < mk; ++kk)
          for (int jj = 0; jj < m; ++jj)
            for (int ii = 0; ii < m; ++ii) {
              const std::array<int, 3> sub{ii, jj, kk};
              for (int a = 0; a < d; ++a) y[a] = lo[a] + (q[a] + (sub[a] + 0.5) / m) * s;
              ++total;
              if (!member.contains(y)) ++outside;
            }
        const double frac = static_cast<double>(outside) / total;
        r.volume_fractions.push_back(frac);
        r.max_volume_fraction = std::max(r.max_volume_fraction, frac);
      }
  r.partition_premise_holds = r.max_volume_fraction <= 0.5;

  // Reference sup over the domain: grid peak, refined on the lattice near x_max.
  r.sup_domain = labeling.peak(domain_id);
  {
    const Cube near{r.q_delta_center, h_max(grid)};
    if (grid.mode) {
      const LocalSup refined = local_sup(grid, near, 4);
      if (member.contains(refined.argmax)) r.sup_domain = std::max(r.sup_domain, refined.value);
    }
  }

  // (ii) q0: maximal-sup subcube of the block (2A'+1) q_c.
  const int c_index = 2 * r.A_prime;
  double best = -1.0;
  const int z_lo = d == 3 ? c_index - r.A_prime : 0, z_hi = d == 3 ? c_index + r.A_prime : 0;
  for (int k = z_lo; k <= z_hi; ++k)
    for (int j = c_index - r.A_prime; j <= c_index + r.A_prime; ++j)
      for (int i = c_index - r.A_prime; i <= c_index + r.A_prime; ++i) {
        const SubcubeIndex q{i, j, k};
        const LocalSup sq = local_sup(grid, Cube{subcube_center(q), 0.5 * s}, r.oversampling);
        if (sq.value > best) {
          best = sq.value;
          r.q0 = q;
        }
      }
  r.sup_block = best;
  r.sup_ratio = r.sup_block / r.sup_domain;
  r.q0_hypothesis_holds = best >= r.sup_domain;

  // (iii)-(iv) the chain
  double error_abs = 0.0;
  SubcubeIndex q = r.q0;
  for (int k = 0; k <= r.A_prime; ++k) {
    const Cube cube{subcube_center(q), 0.5 * s};
    const Cube doubled{cube.center, s};
    const Point corner_lo = (doubled.center.array() - s).matrix();
    const Point corner_hi = (doubled.center.array() + s).matrix();
    if (!contains(Region{q_delta}, corner_lo) || !contains(Region{q_delta}, corner_hi)) {
      r.truncated = true;
      break;
    }
    const LocalSup inner = local_sup(grid, cube, r.oversampling);
    const LocalSup outer = local_sup(grid, doubled, r.oversampling);
    if (!(inner.value > 0.0)) throw std::invalid_argument("vanishing on inner region");
    error_abs = std::max(error_abs, outer.error_bound);
    r.sup_sequence.push_back(inner.value);
    r.N_sequence.push_back(std::log2(outer.value / inner.value));
    if (k == r.A_prime) break;
    q = containing(outer.argmax);
    r.chain.push_back(q);
  }

  if (!r.sup_sequence.empty()) {
    const double sup_min = *std::min_element(r.sup_sequence.begin(), r.sup_sequence.end());
    r.epsilon_grid = 2.0 * std::log2(1.0 + error_abs / sup_min);
  }
  double running = 0.0;
  for (std::size_t k = 1; k < r.sup_sequence.size(); ++k) {
    running += r.N_sequence[k - 1];
    const double slack = std::log2(r.sup_sequence[k] / r.sup_sequence[0]) - running;
    r.telescoping_slack.push_back(slack);
    if (slack < -static_cast<double>(k) * r.epsilon_grid) ++r.telescoping_violations;
  }

  // Growth shape: regress N(q_k) on S_k = sum_{j<k} N(q_j).
  std::vector<double> S, Nk;
  running = 0.0;
  for (std::size_t k = 1; k < r.N_sequence.size(); ++k) {
    running += r.N_sequence[k - 1];
    S.push_back(running);
    Nk.push_back(r.N_sequence[k]);
  }
  if (S.size() >= 2) {
    const double n = static_cast<double>(S.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < S.size(); ++i) {
      sx += S[i];
      sy += Nk[i];
      sxx += S[i] * S[i];
      sxy += S[i] * Nk[i];
    }
    const double var = sxx - sx * sx / n;
    if (var > 1e-300) {
      r.c2_fit = (sxy - sx * sy / n) / var;
      r.c3_fit = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < S.size(); ++i) r.c3_fit = std::max(r.c3_fit, r.c2_fit * S[i] - Nk[i]);
    }
  }
  r.growth_verified = r.partition_premise_holds && r.q0_hypothesis_holds && r.sup_ratio > 1.0 &&
                      r.c2_fit > 0.0;

  // (v)
  if (!r.N_sequence.empty())
    r.df_ratio = *std::max_element(r.N_sequence.begin(), r.N_sequence.end()) / std::sqrt(r.lambda);
  return r;
}

nlohmann::json to_json(const ChainReport& r) {
  auto idx = [&](const SubcubeIndex& q) {
    return std::vector<int>(q.begin(), q.begin() + r.q_delta_center.size());
  };
  nlohmann::json chain = nlohmann::json::array();
  for (const auto& q : r.chain) chain.push_back(idx(q));
  return nlohmann::json{
      {"lambda", r.lambda},
      {"delta", r.delta},
      {"A", r.A},
      {"A_prime", r.A_prime},
      {"q_delta_center", std::vector<double>(r.q_delta_center.data(),
                                             r.q_delta_center.data() + r.q_delta_center.size())},
      {"q_delta_side", r.q_delta_side},
      {"subcube_side", r.subcube_side},
      {"oversampling", r.oversampling},
      {"volume_fractions", r.volume_fractions},
      {"max_volume_fraction", r.max_volume_fraction},
      {"partition_premise_holds", r.partition_premise_holds},
      {"q0", idx(r.q0)},
      {"chain", chain},
      {"N_sequence", r.N_sequence},
      {"sup_sequence", r.sup_sequence},
      {"sup_domain", r.sup_domain},
      {"sup_block", r.sup_block},
      {"q0_hypothesis_holds", r.q0_hypothesis_holds},
      {"epsilon_grid", r.epsilon_grid},
      {"telescoping_slack", r.telescoping_slack},
      {"telescoping_violations", r.telescoping_violations},
      {"witnesses",
       {{"c2_fit", r.c2_fit},
        {"c3_fit", std::isfinite(r.c3_fit) ? nlohmann::json(r.c3_fit) : nlohmann::json(nullptr)},
        {"growth_verified", r.growth_verified},
        {"df_ratio", r.df_ratio},
        {"sup_ratio", r.sup_ratio}}},
      {"truncated", r.truncated}};
}

double remez_implied_constant(double sup_B, double sup_E, double vol_ratio, double N) {
  if (!(sup_E > 0.0)) throw std::invalid_argument("sup over E vanishes");
  if (vol_ratio < 1.0) throw std::invalid_argument("E larger than B");
  N = std::max(N, 0.0);
  auto holds = [&](double C) {
    return std::log(C) + std::log(sup_E) + C * N * std::log(C * vol_ratio) >= std::log(sup_B);
  };
  if (holds(1.0)) return 1.0;
  double lo = 1.0, hi = 2.0;
  while (!holds(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericalError("Remez constant bracket overflow");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::vector<std::int64_t> ball_indices(const ScalarGrid& grid, const Ball& ball) {
  const int d = grid.dimension();
  const LatticeIndexer& lat = grid.lattice;
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < d; ++a) {
    const double h = grid.spacing(a);
    lo[a] = static_cast<int>(std::ceil((ball.center[a] - ball.radius) / h - 1e-9));
    hi[a] = static_cast<int>(std::floor((ball.center[a] + ball.radius) / h + 1e-9));
  }
  std::vector<std::int64_t> out;
  Point y(d);
  for (int k = lo[2]; k <= hi[2]; ++k)
    for (int j = lo[1]; j <= hi[1]; ++j)
      for (int i = lo[0]; i <= hi[0]; ++i) {
        std::array<int, 3> g{i, j, k};
        bool inside = true;
        for (int a = 0; a < d; ++a) {
          y[a] = g[a] * grid.spacing(a);
          if (grid.geometry.periodic()) {
            g[a] %= lat.extent[a];
            if (g[a] < 0) g[a] += lat.extent[a];
          } else if (g[a] < 0 || g[a] >= lat.extent[a]) {
            inside = false;
          }
        }
        if (inside && contains(Region{ball}, y)) out.push_back(lat.ravel(g));
      }
  return out;
}

RemezWitness remez_witness(const ScalarGrid& grid, const Ball& ball, const std::vector<char>& E) {
  if (static_cast<std::int64_t>(E.size()) != grid.size())
    throw std::invalid_argument("E mask must cover the grid");
  if (grid.eigenvalue > 0.0 && !(ball.radius < 1.0 / std::sqrt(grid.eigenvalue)))
    throw std::invalid_argument("Remez witness needs r < lambda^{-1/2}");
  const std::vector<std::int64_t> in_ball = ball_indices(grid, ball);
  const std::set<std::int64_t> ball_set(in_ball.begin(), in_ball.end());
  RemezWitness w;
  std::int64_t count_E = 0;
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    if (!E[i]) continue;
    if (!ball_set.count(i)) throw std::invalid_argument("E is not contained in B");
    ++count_E;
    w.sup_E = std::max(w.sup_E, std::abs(grid.values[i]));
  }
  if (count_E == 0) throw std::invalid_argument("E is empty");
  for (std::int64_t i : in_ball) w.sup_B = std::max(w.sup_B, std::abs(grid.values[i]));
  if (!(w.sup_E > 0.0)) throw std::invalid_argument("sup over E vanishes");
  w.vol_ratio = static_cast<double>(in_ball.size()) / static_cast<double>(count_E);
  w.N = doubling_index(grid, ball);
  w.implied_constant = remez_implied_constant(w.sup_B, w.sup_E, w.vol_ratio, w.N);
  return w;
}

double gradient_check(const ScalarGrid& grid, const Point& center, double r) {
  if (grid.eigenvalue > 0.0 && !(r < 1.0 / std::sqrt(grid.eigenvalue)))
    throw std::invalid_argument("gradient check needs r < lambda^{-1/2}");
  const Ball outer{center, r};
  if (!fits_in(outer, grid.geometry)) throw std::invalid_argument("ball does not fit in the geometry");
  const int f = auto_oversampling(grid, outer);
  const LocalSup value = local_sup(grid, outer, f);
  if (!(value.value > 0.0)) throw std::invalid_argument("field vanishes on the ball");
  const LocalSup grad = local_gradient_sup(grid, Ball{center, 0.5 * r}, f);
  return r * grad.value / value.value;
}

std::optional<EigenMode> sweep_mode(const Geometry& geometry, int level, std::uint64_t seed) {
  const std::vector<EigenMode> basis = torus_eigenspace(geometry, level);
  if (basis.empty()) return std::nullopt;
  return random_combination(basis, seed);
}

namespace {

// Uniform in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<DoublingRow> df_sweep(const Geometry& geometry, const std::vector<int>& levels,
                                  const std::vector<std::uint64_t>& seeds, int balls_per_field,
                                  double samples_per_wavelength) {
  std::vector<DoublingRow> rows;
  const double r0 = geometry.injectivity_radius();
  const int d = geometry.dimension;
  for (int level : levels)
    for (std::uint64_t seed : seeds) {
      const auto mode = sweep_mode(geometry, level, seed);
      if (!mode) continue;
      const int n = std::max(minimum_resolution(geometry, mode->eigenvalue, samples_per_wavelength), 8);
      const ScalarGrid grid = sample_field(*mode, n);
      std::mt19937_64 engine(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(level));
      DoublingRow row{mode->eigenvalue, level, seed, 0.0};
      for (int b = 0; b < balls_per_field; ++b) {
        const double radius = r0 * (0.05 + 0.45 * uniform01(engine));
        Point c(d);
        for (int a = 0; a < d; ++a) {
          const double side = geometry.sides[a];
          c[a] = geometry.periodic() ? side * uniform01(engine)
                                     : 2.0 * radius + (side - 4.0 * radius) * uniform01(engine);
        }
        row.n_max = std::max(row.n_max, doubling_index(grid, Ball{c, radius}));
      }
      rows.push_back(row);
    }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const DoublingRow& a, const DoublingRow& b) { return a.lambda < b.lambda; });
  return rows;
}

TheoremRow theorem_row(const EigenMode& mode, int level, std::uint64_t seed,
                       double samples_per_wavelength) {
  const Geometry& geometry = mode.geometry;
  const int n = std::max(minimum_resolution(geometry, mode.eigenvalue, samples_per_wavelength), 8);
  const ScalarGrid grid = sample_field(mode, n);
  const DomainLabeling labeling = label_nodal_domains(grid);
  const auto radii = inradius_report(labeling, grid);
  TheoremRow row;
  row.lambda = mode.eigenvalue;
  row.level = level;
  row.seed = seed;
  row.domains = labeling.count();
  row.min_centered_inradius = std::numeric_limits<double>::infinity();
  row.min_inradius = std::numeric_limits<double>::infinity();
  for (const auto& r : radii) {
    row.min_centered_inradius = std::min(row.min_centered_inradius, r.centered_inradius);
    row.min_inradius = std::min(row.min_inradius, r.inradius);
  }
  row.inverse_sqrt_lambda = 1.0 / std::sqrt(row.lambda);
  const double log_lambda = std::log(row.lambda);
  row.predicted_shape =
      row.inverse_sqrt_lambda * std::pow(log_lambda, -0.5 * (geometry.dimension - 2));
  return row;
}

std::vector<TheoremRow> main_theorem_sweep(const Geometry& geometry, const std::vector<int>& levels,
                                           const std::vector<std::uint64_t>& seeds,
                                           double samples_per_wavelength) {
  std::vector<TheoremRow> rows;
  for (int level : levels)
    for (std::uint64_t seed : seeds) {
      const auto mode = sweep_mode(geometry, level, seed);
      if (!mode) continue;
      if (!(mode->eigenvalue > std::numbers::e))
        throw std::invalid_argument("main theorem sweep needs lambda > e");
      rows.push_back(theorem_row(*mode, level, seed, samples_per_wavelength));
    }
  return rows;
}

}  // namespace nodalab
