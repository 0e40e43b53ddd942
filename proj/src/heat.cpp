#include "nodalab/heat.hpp"

#include "nodalab/spectra_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>

namespace nodalab {

std::vector<HeatFlowState> evolve(const CondenserSystem& system, const Eigen::VectorXd& initial,
                                  double t_end, double step_size, bool with_source,
                                  int checkpoint_every) {
  if (!(t_end >= 0.0)) throw std::invalid_argument("end time must be nonnegative");
  if (!(step_size > 0.0)) throw std::invalid_argument("step size must be positive");
  if (initial.size() != system.unknowns()) throw std::invalid_argument("initial data size mismatch");
  const int steps = t_end == 0.0 ? 0 : static_cast<int>(std::ceil(t_end / step_size - 1e-9));
  const double tau = steps > 0 ? t_end / steps : step_size;

  Eigen::SparseMatrix<double, Eigen::RowMajor> M(system.unknowns(), system.unknowns());
  M.setIdentity();
  M += tau * system.A;
  M.makeCompressed();

  std::vector<HeatFlowState> out;
  HeatFlowState state;
  state.temperature = initial;
  state.step_size = tau;
  for (int n = 1; n <= steps; ++n) {
    Eigen::VectorXd rhs = state.temperature;
    if (with_source) rhs += tau * system.b;
    SolveReport r = solve_spd(M, rhs, kStepTolerance, &state.temperature);
    state.temperature = std::move(r.solution);
    state.solver_residual = std::max(state.solver_residual, r.residual);
    state.step = n;
    state.time = n == steps ? t_end : n * tau;
    if (checkpoint_every > 0 && n % checkpoint_every == 0 && n != steps) out.push_back(state);
  }
  out.push_back(state);
  return out;
}

std::vector<HeatFlowState> heat_flow_psi(const CondenserSystem& system, double t_end, double step_size,
                                         int checkpoint_every) {
  if (!(t_end > 0.0)) throw std::invalid_argument("end time must be positive");
  if (step_size > t_end / 10.0 * (1.0 + 1e-12))
    throw std::invalid_argument("step size must be at most t_end / 10");
  return evolve(system, Eigen::VectorXd::Zero(system.unknowns()), t_end, step_size, true,
                checkpoint_every);
}

SolveReport equilibrium_potential(const CondenserSystem& system) {
  return solve_spd(system.A, system.b, kEquilibriumTolerance);
}

DeficitCheck deficit_identity_check(const CondenserSystem& system, double t, double step_size) {
  const SolveReport eq = equilibrium_potential(system);
  DeficitCheck out;
  out.time = t;
  if (t == 0.0) return out;
  const HeatFlowState psi =
      evolve(system, Eigen::VectorXd::Zero(system.unknowns()), t, step_size, true).back();
  const HeatFlowState decayed = evolve(system, eq.solution, t, step_size, false).back();
  out.steps = psi.step;
  if (system.unknowns() > 0)
    out.discrepancy = ((eq.solution - psi.temperature) - decayed.temperature).cwiseAbs().maxCoeff();
  return out;
}

IntersectionCheck intersection_check(const Box& w1, const Box& w2, const Point& x, double t) {
  const Box w12 = w1.intersection(w2);
  if (!((w12.hi - w12.lo).array() > 0.0).all() || !w12.contains(x))
    throw std::invalid_argument("x must lie in the intersection of the boxes");
  const KernelSpec k1 = KernelSpec::box_images(w1);
  const KernelSpec k2 = KernelSpec::box_images(w2);
  const KernelSpec k12 = KernelSpec::box_images(w12);
  IntersectionCheck out;
  out.lhs = box_kernel_mass_over(k1, t, x, w12) - kernel_mass(k12, t, x);
  out.rhs = 1.0 - kernel_mass(k2, t, x);
  out.margin = out.rhs - out.lhs;
  return out;
}

namespace {

double uniform01(std::mt19937_64& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<std::pair<Point, Point>> sample_point_pairs(const Geometry& torus, int count,
                                                        std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  const int d = torus.dimension;
  const Point center = 0.5 * torus.sides;
  const double inner = 0.75 * torus.injectivity_radius();
  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < count; ++i) {
    Point x(d), y(d);
    for (int a = 0; a < d; ++a) {
      if (i % 2 == 0) {
        x[a] = center[a] + inner * (2.0 * uniform01(engine) - 1.0);
        y[a] = center[a] + inner * (2.0 * uniform01(engine) - 1.0);
      } else {
        x[a] = torus.sides[a] * uniform01(engine);
        y[a] = torus.sides[a] * uniform01(engine);
      }
    }
    pairs.emplace_back(x, y);
  }
  return pairs;
}

KernelBoundReport kernel_bound_report(const Geometry& torus, const std::vector<double>& t_grid,
                                      const std::vector<std::pair<Point, Point>>& pairs,
                                      double norris_t0) {
  if (!torus.periodic()) throw std::invalid_argument("kernel bound report needs a torus");
  const int d = torus.dimension;
  const KernelSpec pm = KernelSpec::torus(torus);
  const double r0 = torus.injectivity_radius();
  const Point center = 0.5 * torus.sides;
  const Box ball_box{(center.array() - r0).matrix(), (center.array() + r0).matrix()};
  const KernelSpec pb = KernelSpec::box_images(ball_box);
  const double inner = 0.75 * r0;

  KernelBoundReport rep;
  rep.norris_t0 = norris_t0;
  rep.c3 = std::numeric_limits<double>::infinity();
  rep.norris_epsilon = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("kernel bound times must lie in (0, 1)");
    for (const auto& [x, y] : pairs) {
      const double dist = torus.distance(x, y);
      const double p = kernel_eval(pm, t, x, y);
      const double scale = std::pow(t, 0.5 * d);
      rep.c1 = std::max(rep.c1, p * scale * std::exp(rep.c2 * dist * dist / t));
      rep.c3 = std::min(rep.c3, p * scale * std::exp(dist * dist / (4.0 * t)));
      rep.rows.push_back({t, dist, p, 0.0, 0.0});
      const bool in_inner = ((x - center).cwiseAbs().array() <= inner).all() &&
                            ((y - center).cwiseAbs().array() <= inner).all() &&
                            ((x - y).cwiseAbs().array() < 0.5 * torus.sides.array()).all();
      if (t <= norris_t0 && in_inner) {
        const double ratio = kernel_eval(pb, t, x, y) / p;
        ++rep.norris_samples;
        if (ratio < 1.0) rep.norris_epsilon = std::min(rep.norris_epsilon, -t * std::log1p(-ratio));
      }
    }
  }
  rep.upper_min_margin = std::numeric_limits<double>::infinity();
  for (auto& row : rep.rows) {
    row.bound = rep.c1 * std::pow(row.t, -0.5 * d) * std::exp(-rep.c2 * row.dist * row.dist / row.t);
    row.margin = row.bound - row.value;
    rep.upper_min_margin = std::min(rep.upper_min_margin, row.margin / row.bound);
  }
  return rep;
}

void write_kernel_bound_csv(std::ostream& out, const KernelBoundReport& report) {
  out << "t,dist,value,bound,margin\n" << std::setprecision(17);
  for (const auto& r : report.rows)
    out << r.t << ',' << r.dist << ',' << r.value << ',' << r.bound << ',' << r.margin << '\n';
}

nlohmann::json to_json(const KernelBoundReport& r) {
  auto finite = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"c1", r.c1},
          {"c2", r.c2},
          {"upper_min_relative_margin", finite(r.upper_min_margin)},
          {"c3", finite(r.c3)},
          {"norris_epsilon", finite(r.norris_epsilon)},
          {"norris_t0", r.norris_t0},
          {"norris_samples", r.norris_samples},
          {"samples", r.rows.size()}};
}

std::vector<std::filesystem::path> save_checkpoint(const CondenserSystem& system, const HeatFlowState& state,
                                                   const std::filesystem::path& stem) {
  const auto bin = std::filesystem::path(stem.string() + ".bin");
  const auto meta = std::filesystem::path(stem.string() + ".json");
  write_float64_le(system.full_field(state.temperature), bin);
  const auto& spec = system.spec;
  nlohmann::json j{{"t", state.time},
                   {"step", state.step},
                   {"residual", state.solver_residual},
                   {"step_size", state.step_size},
                   {"d", spec.dimension},
                   {"shape", std::vector<int>(spec.lattice.extent.begin(),
                                              spec.lattice.extent.begin() + spec.dimension)},
                   {"spacing", spec.spacing},
                   {"origin", std::vector<double>(spec.origin.data(), spec.origin.data() + spec.dimension)},
                   {"layout", "float64 little-endian, x fastest"},
                   {"condenser", spec.shape}};
  std::ofstream(meta) << j.dump(2) << '\n';
  return {bin, meta};
}

}  // namespace nodalab
