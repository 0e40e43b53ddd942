#include "nodalab/capacity.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace nodalab {

CapacityResult variational_capacity(const CondenserSpec& condenser) {
  const CondenserSystem system = assemble(condenser);
  CapacityResult out;
  out.unknowns = system.unknowns();
  if (condenser.k_count() == 0) {
    out.potential = Eigen::ArrayXd::Zero(condenser.node_count());
    return out;
  }
  const SolveReport eq = equilibrium_potential(system);
  out.residual = eq.residual;
  out.iterations = eq.iterations;
  out.potential = system.full_field(eq.solution);
  out.energy_value = dirichlet_energy(condenser, out.potential);
  out.flux_value = boundary_flux(condenser, out.potential);
  out.relative_gap = std::abs(out.energy_value - out.flux_value) /
                     std::max(out.energy_value, std::numeric_limits<double>::min());
  return out;
}

double concentric_capacity(int dimension, double a, double b) {
  constexpr double pi = std::numbers::pi;
  if (!(0.0 < a && a < b)) throw std::invalid_argument("concentric capacity needs 0 < a < b");
  if (dimension == 2) return 2.0 * pi / std::log(b / a);
  if (dimension == 3) return 4.0 * pi / (1.0 / a - 1.0 / b);
  throw std::invalid_argument("concentric capacity only for d = 2, 3");
}

double enclosing_radius(const CondenserSpec& condenser, const Point& x) {
  double r = 0.0;
  for (std::int64_t i = 0; i < condenser.node_count(); ++i)
    if (condenser.k_mask[i]) r = std::max(r, (condenser.position(i) - x).norm());
  return r;
}

namespace {

double psi_at(const CondenserSystem& system, double t, int steps, const Point& x) {
  const HeatFlowState s = heat_flow_psi(system, t, t / steps).back();
  return system.interpolate(system.full_field(s.temperature), x);
}

}  // namespace

HeatBoundCheck capacity_heat_bound_check(const CondenserSpec& condenser, const Point& x, double t, double r,
                                         int time_nodes, int steps) {
  if (!condenser.u_box) throw std::invalid_argument("heat bound check needs a box U");
  if (!(t > 0.0) || !(r > 0.0)) throw std::invalid_argument("t and r must be positive");
  if (steps < 10) throw std::invalid_argument("at least 10 time steps are required");
  const Box& u = *condenser.u_box;
  if (!(((x - u.lo).array() > 0.0).all() && ((u.hi - x).array() > 0.0).all()))
    throw std::invalid_argument("probe must lie inside U");
  const auto near = condenser.nearest_index(x);
  if (near && condenser.k_mask[*near]) throw std::invalid_argument("probe lies in K");
  if (enclosing_radius(condenser, x) > r * (1.0 + 1e-12))
    throw std::invalid_argument("K is not contained in B(x, r)");

  HeatBoundCheck out;
  const CapacityResult cap = variational_capacity(condenser);
  out.cap = cap.energy_value;

  const KernelSpec pu = KernelSpec::box_images(u);
  const std::vector<Point> faces = k_boundary_faces(condenser);
  auto inf_kernel = [&](double s) {
    double m = std::numeric_limits<double>::infinity();
    for (const Point& y : faces) m = std::min(m, kernel_eval(pu, s, x, y));
    return faces.empty() ? 0.0 : m;
  };
  // Trapezoid rule in log s on [t·1e-6, t].
  const double log_lo = std::log(t * 1e-6), log_hi = std::log(t);
  const double du = (log_hi - log_lo) / (time_nodes - 1);
  const double split = std::log(t / 100.0);
  double total = 0.0, early = 0.0, prev = 0.0;
  for (int i = 0; i < time_nodes; ++i) {
    const double u_i = log_lo + i * du;
    const double s = std::exp(u_i);
    const double f = inf_kernel(s) * s;
    if (i > 0) {
      const double piece = 0.5 * (prev + f) * du;
      total += piece;
      if (u_i <= split) early += piece;
    }
    prev = f;
  }
  out.kernel_integral = total;
  out.small_time_fraction = total > 0.0 ? early / total : 0.0;
  out.tail_warning = out.small_time_fraction > 0.01;

  const CondenserSystem system = assemble(condenser);
  out.psi = psi_at(system, t, steps, x);
  out.margin1 = out.psi - out.cap * out.kernel_integral;
  out.psi_r2 = psi_at(system, r * r, steps, x);
  out.proposition_ratio =
      out.cap / (out.psi_r2 * std::pow(r, condenser.dimension - 2));
  return out;
}

NodalCapacityReport nodal_capacity_experiment(const ScalarGrid& grid, const DomainLabeling& labeling,
                                              int domain_id, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(grid.eigenvalue > 0.0)) throw std::invalid_argument("needs a positive eigenvalue");
  if (domain_id < 1 || domain_id > labeling.count()) throw std::invalid_argument("unknown domain id");
  const int d = grid.dimension();
  const double r0 = grid.geometry.injectivity_radius();
  NodalCapacityReport rep;
  rep.lambda = grid.eigenvalue;
  rep.delta = delta;
  rep.domain_id = domain_id;
  rep.rho = delta / std::sqrt(grid.eigenvalue);
  if (rep.rho >= 0.5 * r0) throw std::invalid_argument("delta lambda^{-1/2} must be below r0 / 2");
  rep.spacing = rep.rho / 10.0;
  rep.half_width = std::min(r0, 4.0 * rep.rho);
  rep.decay = std::exp(-delta * delta);

  const Point center = grid.position(labeling.peak_index(domain_id));
  const double h = rep.spacing;
  const int J = static_cast<int>(std::ceil(rep.half_width / h));
  Point lo(d), hi(d);
  Box u_box{Point(d), Point(d)};
  for (int a = 0; a < d; ++a) {
    int jl = -J, jh = J;
    if (!grid.geometry.periodic()) {
      jl = std::max(jl, -static_cast<int>(std::floor(center[a] / h + 1e-9)));
      jh = std::min(jh, static_cast<int>(std::floor((grid.geometry.sides[a] - center[a]) / h + 1e-9)));
    }
    u_box.lo[a] = center[a] + jl * h;
    u_box.hi[a] = center[a] + jh * h;
    lo[a] = center[a] + (jl - 1) * h;
    hi[a] = center[a] + (jh + 1) * h;
  }
  CondenserSpec spec = condenser_lattice(lo, hi, h);
  set_u_box(spec, u_box);
  spec.allow_empty_k = true;
  spec.shape = "nodal";

  // Complement of Ω in the ball, then one erosion step.
  const DomainMembership member(grid, labeling, domain_id);
  std::vector<char> raw(spec.k_mask.size(), 0);
  const double r2 = rep.rho * rep.rho * (1.0 + 1e-12);
  for (std::int64_t i = 0; i < spec.node_count(); ++i) {
    if (!spec.u_mask[i]) continue;
    const Point x = spec.position(i);
    if ((x - center).squaredNorm() <= r2 && !member.contains(x)) raw[i] = 1;
  }
  for (std::int64_t i = 0; i < spec.node_count(); ++i) {
    if (!raw[i]) continue;
    const auto ijk = spec.lattice.unravel(i);
    bool interior = true;
    for (int a = 0; a < d && interior; ++a) {
      if (ijk[a] == 0 || ijk[a] + 1 >= spec.lattice.extent[a]) {
        interior = false;
        break;
      }
      interior = raw[i - spec.lattice.stride[a]] && raw[i + spec.lattice.stride[a]];
    }
    spec.k_mask[i] = interior;
  }
  // K must keep two nodes from the walls of U; nodes too close are dropped.
  for (std::int64_t i = 0; i < spec.node_count(); ++i) {
    if (!spec.k_mask[i]) continue;
    const Point x = spec.position(i);
    const bool clear = ((x - u_box.lo).array() >= 2.0 * h * (1.0 - 1e-9)).all() &&
                       ((u_box.hi - x).array() >= 2.0 * h * (1.0 - 1e-9)).all();
    if (!clear) spec.k_mask[i] = 0;
  }
  rep.k_nodes = spec.k_count();

  const CondenserSystem system = assemble(spec);
  const double t = rep.rho * rep.rho;
  const int steps = 20;
  const auto node = spec.nearest_index(center);
  const KernelSpec pu = KernelSpec::box_images(u_box);
  rep.exit_tail = 1.0 - kernel_mass(pu, t, center);
  const std::int64_t unknown = node ? system.unknown_of[*node] : -1;

  const HeatFlowState mass =
      evolve(system, Eigen::VectorXd::Ones(system.unknowns()), t, t / steps, false).back();
  rep.mass_u_minus_k = unknown >= 0 ? mass.temperature[unknown] : 0.0;

  if (rep.k_nodes == 0) {
    rep.vacuous = true;
  } else {
    rep.cap = variational_capacity(spec).energy_value;
    const HeatFlowState psi = heat_flow_psi(system, t, t / steps).back();
    rep.psi = unknown >= 0 ? psi.temperature[unknown] : 1.0;
  }
  rep.normalized_cap = rep.cap / (delta * delta * std::pow(rep.rho, d - 2));
  rep.normalized_temp = rep.psi / (delta * delta);
  rep.majorization_margin = rep.mass_u_minus_k + rep.exit_tail - rep.decay;
  rep.raising_margin = rep.psi + rep.exit_tail - (1.0 - rep.mass_u_minus_k);
  return rep;
}

nlohmann::json to_json(const NodalCapacityReport& r) {
  return {{"lambda", r.lambda},
          {"delta", r.delta},
          {"rho", r.rho},
          {"domain_id", r.domain_id},
          {"spacing", r.spacing},
          {"half_width", r.half_width},
          {"k_nodes", r.k_nodes},
          {"vacuous", r.vacuous},
          {"cap", r.cap},
          {"psi", r.psi},
          {"normalized_cap", r.normalized_cap},
          {"normalized_temp", r.normalized_temp},
          {"mass_u_minus_k", r.mass_u_minus_k},
          {"exit_tail", r.exit_tail},
          {"decay", r.decay},
          {"majorization_margin", r.majorization_margin},
          {"raising_margin", r.raising_margin}};
}

double mazya_check(const CondenserSpec& condenser) {
  if (condenser.dimension != 3) throw std::invalid_argument("volume-capacity ratio needs d = 3");
  const double volume = condenser.k_volume();
  const double cap = variational_capacity(condenser).energy_value;
  if (!(cap > 0.0)) {
    if (volume > 0.0) throw NumericalError("zero capacity for a set of positive volume; refine the lattice");
    throw std::invalid_argument("empty K");
  }
  return volume / std::pow(cap, 3.0);
}

}  // namespace nodalab
