#include "nodalab/condenser.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>

namespace nodalab {

Point CondenserSpec::position(std::int64_t index) const {
  const auto ijk = lattice.unravel(index);
  Point x(dimension);
  for (int a = 0; a < dimension; ++a) x[a] = origin[a] + ijk[a] * spacing;
  return x;
}

std::int64_t CondenserSpec::k_count() const {
  std::int64_t n = 0;
  for (char c : k_mask) n += c ? 1 : 0;
  return n;
}

double CondenserSpec::k_volume() const {
  return static_cast<double>(k_count()) * std::pow(spacing, dimension);
}

std::optional<std::int64_t> CondenserSpec::nearest_index(const Point& x) const {
  std::array<int, 3> ijk{0, 0, 0};
  for (int a = 0; a < dimension; ++a) {
    const long j = std::lround((x[a] - origin[a]) / spacing);
    if (j < 0 || j >= lattice.extent[a]) return std::nullopt;
    ijk[a] = static_cast<int>(j);
  }
  return lattice.ravel(ijk);
}

void CondenserSpec::validate() const {
  if (dimension < 1 || dimension > 3) throw std::invalid_argument("condenser dimension must be 1..3");
  if (!(spacing > 0.0)) throw std::invalid_argument("condenser spacing must be positive");
  const std::int64_t n = lattice.size();
  if (static_cast<std::int64_t>(u_mask.size()) != n || static_cast<std::int64_t>(k_mask.size()) != n)
    throw std::invalid_argument("condenser masks do not match the lattice");
  bool any_k = false;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto ijk = lattice.unravel(i);
    if (u_mask[i])
      for (int a = 0; a < dimension; ++a)
        if (ijk[a] == 0 || ijk[a] == lattice.extent[a] - 1)
          throw std::invalid_argument("U touches the lattice boundary");
    if (!k_mask[i]) continue;
    any_k = true;
    if (!u_mask[i]) throw std::invalid_argument("K is not contained in U");
    const int rz = dimension == 3 ? 2 : 0, ry = dimension >= 2 ? 2 : 0;
    for (int dz = -rz; dz <= rz; ++dz)
      for (int dy = -ry; dy <= ry; ++dy)
        for (int dx = -2; dx <= 2; ++dx) {
          std::array<int, 3> q{ijk[0] + dx, ijk[1] + dy, ijk[2] + dz};
          bool inside = true;
          for (int a = 0; a < dimension; ++a) inside = inside && q[a] >= 0 && q[a] < lattice.extent[a];
          if (!inside || !u_mask[lattice.ravel(q)])
            throw std::invalid_argument("K is closer than two cells to the boundary of U");
        }
  }
  if (!any_k && !allow_empty_k) throw std::invalid_argument("K is empty");
}

CondenserSpec condenser_lattice(const Point& lo, const Point& hi, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("condenser spacing must be positive");
  const int d = static_cast<int>(lo.size());
  CondenserSpec s;
  s.dimension = d;
  s.spacing = h;
  s.origin = lo;
  std::array<int, 3> extent{1, 1, 1};
  for (int a = 0; a < d; ++a) extent[a] = static_cast<int>(std::ceil((hi[a] - lo[a]) / h - 1e-9)) + 1;
  s.lattice = LatticeIndexer(d, extent);
  s.u_mask.assign(static_cast<std::size_t>(s.lattice.size()), 0);
  s.k_mask.assign(static_cast<std::size_t>(s.lattice.size()), 0);
  return s;
}

void set_u_box(CondenserSpec& spec, const Box& box) {
  std::fill(spec.u_mask.begin(), spec.u_mask.end(), 0);
  const double eps = 1e-9 * spec.spacing;
  for (std::int64_t i = 0; i < spec.node_count(); ++i) {
    const Point x = spec.position(i);
    spec.u_mask[i] = ((x - box.lo).array() > eps).all() && ((box.hi - x).array() > eps).all();
  }
  spec.u_box = box;
}

void set_u_ball(CondenserSpec& spec, const Point& center, double radius) {
  std::fill(spec.u_mask.begin(), spec.u_mask.end(), 0);
  for (std::int64_t i = 0; i < spec.node_count(); ++i)
    spec.u_mask[i] = (spec.position(i) - center).squaredNorm() < radius * radius * (1.0 - 1e-12);
  spec.u_box.reset();
}

CondenserSpec concentric_condenser(int dimension, double a, double b, double h, const Point& center) {
  if (!(0.0 < a && a < b)) throw std::invalid_argument("concentric condenser needs 0 < a < b");
  Point lo(dimension), hi(dimension);
  for (int k = 0; k < dimension; ++k) {
    lo[k] = (std::floor((center[k] - b) / h) - 2.0) * h;
    hi[k] = (std::ceil((center[k] + b) / h) + 2.0) * h;
  }
  CondenserSpec s = condenser_lattice(lo, hi, h);
  set_u_ball(s, center, b);
  add_to_k(s, [&](const Point& x) { return (x - center).squaredNorm() <= a * a * (1.0 + 1e-12); });
  s.shape = "concentric";
  return s;
}

const std::vector<std::string>& condenser_shapes() {
  static const std::vector<std::string> shapes{"sphere", "cube", "slab", "l_shape", "two_balls"};
  return shapes;
}

CondenserSpec shape_condenser(int dimension, const std::string& shape, double h) {
  const double n = std::round(1.0 / h);
  h = 1.0 / n;
  CondenserSpec s = condenser_lattice(Point::Zero(dimension), Point::Ones(dimension), h);
  const double wall_lo = std::round(0.1 / h) * h, wall_hi = std::round(0.9 / h) * h;
  set_u_box(s, Box{Point::Constant(dimension, wall_lo), Point::Constant(dimension, wall_hi)});
  const Point c = Point::Constant(dimension, 0.5);
  const double slack = 1e-12;
  auto in_box = [&](const Point& x, const Point& lo, const Point& hi) {
    return ((x - lo).array() >= -slack).all() && ((hi - x).array() >= -slack).all();
  };
  if (shape == "sphere") {
    add_to_k(s, [&](const Point& x) { return (x - c).norm() <= 0.1 + slack; });
  } else if (shape == "cube") {
    add_to_k(s, [&](const Point& x) { return (x - c).cwiseAbs().maxCoeff() <= 0.08 + slack; });
  } else if (shape == "slab") {
    Point half = Point::Constant(dimension, 0.15);
    half[dimension - 1] = 0.03;
    add_to_k(s, [&](const Point& x) { return in_box(x, c - half, c + half); });
  } else if (shape == "l_shape") {
    Point lo1 = (c.array() - 0.12).matrix(), hi1 = (c.array() + 0.12).matrix();
    Point lo2 = lo1, hi2 = hi1;
    hi1[1] = c[1] - 0.04;
    hi2[0] = c[0] - 0.04;
    if (dimension == 3) {
      lo1[2] = lo2[2] = c[2] - 0.04;
      hi1[2] = hi2[2] = c[2] + 0.04;
    }
    add_to_k(s, [&](const Point& x) { return in_box(x, lo1, hi1) || in_box(x, lo2, hi2); });
  } else if (shape == "two_balls") {
    Point c1 = c, c2 = c;
    c1[0] -= 0.12;
    c2[0] += 0.12;
    add_to_k(s, [&](const Point& x) {
      return (x - c1).norm() <= 0.07 + slack || (x - c2).norm() <= 0.07 + slack;
    });
  } else {
    throw std::invalid_argument("unknown condenser shape: " + shape);
  }
  s.shape = shape;
  return s;
}

namespace {

template <typename Visit>
void for_each_neighbor(const LatticeIndexer& lat, int d, std::int64_t i, Visit visit) {
  const auto ijk = lat.unravel(i);
  for (int a = 0; a < d; ++a) {
    if (ijk[a] > 0) visit(i - lat.stride[a]);
    if (ijk[a] + 1 < lat.extent[a]) visit(i + lat.stride[a]);
  }
}

}  // namespace

CondenserSystem assemble(const CondenserSpec& spec) {
  spec.validate();
  CondenserSystem sys;
  sys.spec = spec;
  const std::int64_t n = spec.node_count();
  sys.unknown_of.assign(static_cast<std::size_t>(n), -1);
  for (std::int64_t i = 0; i < n; ++i)
    if (spec.u_mask[i] && !spec.k_mask[i]) {
      sys.unknown_of[i] = static_cast<std::int64_t>(sys.node_of.size());
      sys.node_of.push_back(i);
    }
  const auto m = static_cast<Eigen::Index>(sys.node_of.size());
  const double inv_h2 = 1.0 / (spec.spacing * spec.spacing);
  const int d = spec.dimension;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(m) * (2 * d + 1));
  sys.b = Eigen::VectorXd::Zero(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const std::int64_t i = sys.node_of[r];
    triplets.emplace_back(r, r, 2.0 * d * inv_h2);
    for_each_neighbor(spec.lattice, d, i, [&](std::int64_t j) {
      if (sys.unknown_of[j] >= 0) triplets.emplace_back(r, sys.unknown_of[j], -inv_h2);
      else if (spec.k_mask[j]) sys.b[r] += inv_h2;
    });
  }
  sys.A.resize(m, m);
  sys.A.setFromTriplets(triplets.begin(), triplets.end());
  sys.A.makeCompressed();
  return sys;
}

Eigen::ArrayXd CondenserSystem::full_field(const Eigen::VectorXd& v, double k_value) const {
  Eigen::ArrayXd f = Eigen::ArrayXd::Zero(spec.node_count());
  for (std::int64_t i = 0; i < spec.node_count(); ++i)
    if (spec.k_mask[i]) f[i] = k_value;
  for (std::size_t r = 0; r < node_of.size(); ++r) f[node_of[r]] = v[static_cast<Eigen::Index>(r)];
  return f;
}

double CondenserSystem::interpolate(const Eigen::ArrayXd& field, const Point& x) const {
  const int d = spec.dimension;
  std::array<int, 3> base{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (int a = 0; a < d; ++a) {
    const double u = (x[a] - spec.origin[a]) / spec.spacing;
    if (u < 0.0 || u > spec.lattice.extent[a] - 1) return 0.0;
    base[a] = std::min(static_cast<int>(std::floor(u)), spec.lattice.extent[a] - 2);
    frac[a] = u - base[a];
  }
  double sum = 0.0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    std::array<int, 3> q = base;
    double w = 1.0;
    for (int a = 0; a < d; ++a) {
      const int bit = (corner >> a) & 1;
      q[a] += bit;
      w *= bit ? frac[a] : 1.0 - frac[a];
    }
    if (w != 0.0) sum += w * field[spec.lattice.ravel(q)];
  }
  return sum;
}

SolveReport solve_spd(const Eigen::SparseMatrix<double, Eigen::RowMajor>& M, const Eigen::VectorXd& rhs,
                      double tolerance, const Eigen::VectorXd* guess) {
  SolveReport out;
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    out.solution = Eigen::VectorXd::Zero(rhs.size());
    return out;
  }
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double, Eigen::RowMajor>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(tolerance);
  const int cap = static_cast<int>(std::ceil(10.0 * std::sqrt(static_cast<double>(std::max<Eigen::Index>(M.rows(), 1)))));
  cg.setMaxIterations(std::max(cap, 50));
  cg.compute(M);
  out.solution = guess ? cg.solveWithGuess(rhs, *guess).eval() : cg.solve(rhs).eval();
  out.iterations = static_cast<int>(cg.iterations());
  out.residual = (rhs - M * out.solution).norm() / rhs_norm;
  if (cg.info() != Eigen::Success && out.residual > tolerance)
    throw NumericalError("conjugate gradient did not converge in " + std::to_string(out.iterations) +
                         " iterations; relative residual " + std::to_string(out.residual));
  return out;
}

double dirichlet_energy(const CondenserSpec& spec, const Eigen::ArrayXd& field) {
  const int d = spec.dimension;
  double sum = 0.0;
  for (std::int64_t i = 0; i < spec.node_count(); ++i) {
    const auto ijk = spec.lattice.unravel(i);
    for (int a = 0; a < d; ++a) {
      if (ijk[a] + 1 >= spec.lattice.extent[a]) continue;
      const double diff = field[i] - field[i + spec.lattice.stride[a]];
      sum += diff * diff;
    }
  }
  return sum * std::pow(spec.spacing, d - 2);
}

double boundary_flux(const CondenserSpec& spec, const Eigen::ArrayXd& field) {
  const int d = spec.dimension;
  double sum = 0.0;
  for (std::int64_t i = 0; i < spec.node_count(); ++i) {
    if (!spec.k_mask[i]) continue;
    for_each_neighbor(spec.lattice, d, i, [&](std::int64_t j) {
      if (!spec.k_mask[j]) sum += 1.0 - field[j];
    });
  }
  return sum * std::pow(spec.spacing, d - 2);
}

std::vector<Point> k_boundary_faces(const CondenserSpec& spec) {
  std::vector<Point> faces;
  for (std::int64_t i = 0; i < spec.node_count(); ++i) {
    if (!spec.k_mask[i]) continue;
    const Point xi = spec.position(i);
    for_each_neighbor(spec.lattice, spec.dimension, i, [&](std::int64_t j) {
      if (!spec.k_mask[j]) faces.push_back(0.5 * (xi + spec.position(j)));
    });
  }
  return faces;
}

}  // namespace nodalab
