#include "nodalab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace nodalab {

namespace {

constexpr double kPi = std::numbers::pi;

// sin(pi * num / den) with exact zeros at integer multiples of pi.
double sin_pi_fraction(std::int64_t num, std::int64_t den) {
  std::int64_t r = num % (2 * den);
  if (r < 0) r += 2 * den;
  double sign = 1.0;
  if (r >= den) {
    r -= den;
    sign = -1.0;
  }
  if (2 * r > den) r = den - r;
  if (r == 0) return 0.0;
  return sign * std::sin(kPi * static_cast<double>(r) / static_cast<double>(den));
}

double cos_pi_fraction(std::int64_t num, std::int64_t den) {
  return sin_pi_fraction(2 * num + den, 2 * den);
}

double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::sin_product: return "sin_product";
    case Phase::plane_cos: return "cos";
    case Phase::plane_sin: return "sin";
  }
  return "cos";
}

Phase phase_from_string(const std::string& name) {
  if (name == "sin_product") return Phase::sin_product;
  if (name == "cos") return Phase::plane_cos;
  if (name == "sin") return Phase::plane_sin;
  throw std::invalid_argument("unknown phase '" + name + "'");
}

double term_eigenvalue(const Geometry& geometry, const ModeTerm& term) {
  const double scale = term.phase == Phase::sin_product ? kPi : 2.0 * kPi;
  double sum = 0.0;
  for (int i = 0; i < geometry.dimension; ++i) {
    const double w = scale * term.k[i] / geometry.sides[i];
    sum += w * w;
  }
  return sum;
}

double EigenMode::value(const Point& x) const {
  double total = 0.0;
  for (const auto& term : terms) {
    if (term.phase == Phase::sin_product) {
      double product = term.coeff;
      for (int i = 0; i < geometry.dimension; ++i)
        product *= std::sin(kPi * term.k[i] * x[i] / geometry.sides[i]);
      total += product;
    } else {
      double theta = 0.0;
      for (int i = 0; i < geometry.dimension; ++i)
        theta += 2.0 * kPi * term.k[i] * x[i] / geometry.sides[i];
      total += term.coeff * (term.phase == Phase::plane_cos ? std::cos(theta) : std::sin(theta));
    }
  }
  return total;
}

Point EigenMode::gradient(const Point& x) const {
  const int d = geometry.dimension;
  Point grad = Point::Zero(d);
  for (const auto& term : terms) {
    if (term.phase == Phase::sin_product) {
      std::array<double, 3> s{}, c{};
      for (int i = 0; i < d; ++i) {
        const double w = kPi * term.k[i] / geometry.sides[i];
        s[i] = std::sin(w * x[i]);
        c[i] = w * std::cos(w * x[i]);
      }
      for (int j = 0; j < d; ++j) {
        double product = term.coeff * c[j];
        for (int i = 0; i < d; ++i)
          if (i != j) product *= s[i];
        grad[j] += product;
      }
    } else {
      double theta = 0.0;
      for (int i = 0; i < d; ++i) theta += 2.0 * kPi * term.k[i] * x[i] / geometry.sides[i];
      const double factor =
          term.phase == Phase::plane_cos ? -term.coeff * std::sin(theta) : term.coeff * std::cos(theta);
      for (int i = 0; i < d; ++i) grad[i] += factor * 2.0 * kPi * term.k[i] / geometry.sides[i];
    }
  }
  return grad;
}

double EigenMode::gradient_bound() const {
  double sum = 0.0;
  for (const auto& term : terms) sum += std::abs(term.coeff);
  return std::sqrt(eigenvalue) * sum;
}

void EigenMode::validate() const {
  geometry.validate();
  for (const auto& term : terms) {
    if (term.k.size() != geometry.dimension)
      throw std::invalid_argument("mode term frequency vector has wrong dimension");
    const bool box_term = term.phase == Phase::sin_product;
    if (box_term != (geometry.kind == GeometryKind::dirichlet_box))
      throw std::invalid_argument("mode term phase does not match the geometry kind");
    if (box_term && (term.k.array() < 1).any())
      throw std::invalid_argument("box mode indices must be >= 1");
    if (relative_gap(term_eigenvalue(geometry, term), eigenvalue) > 1e-12)
      throw std::invalid_argument("mode term violates the eigenvalue relation");
  }
}

EigenMode box_mode(const Geometry& geometry, const IntVector& m) {
  geometry.validate();
  if (geometry.kind != GeometryKind::dirichlet_box)
    throw std::invalid_argument("box_mode requires a Dirichlet box geometry");
  if (m.size() != geometry.dimension)
    throw std::invalid_argument("box_mode index vector must have one entry per axis");
  if ((m.array() < 1).any()) throw std::invalid_argument("box_mode indices must be positive");
  ModeTerm term{m, Phase::sin_product, 1.0};
  return EigenMode{geometry, term_eigenvalue(geometry, term), {term}};
}

std::vector<IntVector> lattice_points_on_sphere(int dimension, int n) {
  std::vector<IntVector> points;
  if (n < 0) return points;
  const int r = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)))) + 1;
  IntVector k(dimension);
  const int z_lo = dimension == 3 ? -r : 0, z_hi = dimension == 3 ? r : 0;
  for (int a = -r; a <= r; ++a)
    for (int b = -r; b <= r; ++b)
      for (int c = z_lo; c <= z_hi; ++c) {
        const int sq = a * a + b * b + c * c;
        if (sq != n) continue;
        if (dimension == 2) k << a, b;
        else k << a, b, c;
        points.push_back(k);
      }
  return points;
}

std::vector<EigenMode> torus_eigenspace(const Geometry& geometry, int level) {
  geometry.validate();
  if (geometry.kind != GeometryKind::flat_torus)
    throw std::invalid_argument("torus_eigenspace requires a flat torus");
  if (!geometry.sides.isApproxToConstant(1.0, 0.0))
    throw std::invalid_argument("torus_eigenspace requires unit side lengths");
  if (level < 0) throw std::invalid_argument("eigenspace level must be >= 0");

  const double lambda = 4.0 * kPi * kPi * level;
  std::vector<EigenMode> basis;
  if (level == 0) {
    basis.push_back(EigenMode{geometry, 0.0, {{IntVector::Zero(geometry.dimension), Phase::plane_cos, 1.0}}});
    return basis;
  }
  for (const IntVector& k : lattice_points_on_sphere(geometry.dimension, level)) {
    int first = 0;
    while (k[first] == 0) ++first;
    if (k[first] < 0) continue;
    basis.push_back(EigenMode{geometry, lambda, {{k, Phase::plane_cos, 1.0}}});
    basis.push_back(EigenMode{geometry, lambda, {{k, Phase::plane_sin, 1.0}}});
  }
  return basis;
}

std::vector<double> standard_normals(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 engine(seed);
  auto uniform = [&engine] {
    // (0, 1]: never zero, so the logarithm below is finite.
    return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
  };
  std::vector<double> out;
  out.reserve(count + 1);
  while (out.size() < count) {
    const double u1 = uniform(), u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    out.push_back(radius * std::cos(2.0 * kPi * u2));
    out.push_back(radius * std::sin(2.0 * kPi * u2));
  }
  out.resize(count);
  return out;
}

std::vector<double> random_coefficients(std::size_t count, std::uint64_t seed) {
  std::vector<double> c = standard_normals(seed, count);
  double norm = 0.0;
  for (double v : c) norm += v * v;
  norm = std::sqrt(norm);
  for (double& v : c) v /= norm;
  return c;
}

EigenMode random_combination(std::span<const EigenMode> basis, std::uint64_t seed) {
  if (basis.empty()) throw std::invalid_argument("random_combination needs a nonempty basis");
  const double lambda = basis.front().eigenvalue;
  for (const auto& b : basis)
    if (relative_gap(b.eigenvalue, lambda) > 1e-12 || !(b.geometry == basis.front().geometry))
      throw std::invalid_argument("random_combination basis mixes eigenvalues or geometries");

  const std::vector<double> c = random_coefficients(basis.size(), seed);
  EigenMode out{basis.front().geometry, lambda, {}};
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (ModeTerm term : basis[i].terms) {
      term.coeff *= c[i];
      out.terms.push_back(term);
    }
  return out;
}

Point ScalarGrid::position(std::int64_t index) const {
  const auto ijk = lattice.unravel(index);
  Point p(dimension());
  for (int i = 0; i < dimension(); ++i) p[i] = ijk[i] * spacing(i);
  return p;
}

double ScalarGrid::dual_cell_volume(std::int64_t index) const {
  const auto ijk = lattice.unravel(index);
  double v = 1.0;
  for (int i = 0; i < dimension(); ++i) {
    double w = spacing(i);
    if (!geometry.periodic() && (ijk[i] == 0 || ijk[i] == resolution)) w *= 0.5;
    v *= w;
  }
  return v;
}

int minimum_resolution(const Geometry& geometry, double eigenvalue, double samples_per_wavelength) {
  const double k = std::sqrt(std::max(eigenvalue, 0.0));
  int n = 1;
  for (int i = 0; i < geometry.dimension; ++i) {
    const double needed = samples_per_wavelength * geometry.sides[i] * k / (2.0 * kPi);
    n = std::max(n, static_cast<int>(std::ceil(needed - 1e-9)));
  }
  return n;
}

namespace {

ScalarGrid make_empty_grid(const Geometry& geometry, int resolution) {
  ScalarGrid grid;
  grid.geometry = geometry;
  grid.resolution = resolution;
  const int n = geometry.periodic() ? resolution : resolution + 1;
  grid.lattice = LatticeIndexer(geometry.dimension, {n, n, n});
  grid.values = Eigen::ArrayXd::Zero(grid.lattice.size());
  return grid;
}

}  // namespace

ScalarGrid sample_field(const EigenMode& mode, int resolution, bool with_gradient) {
  mode.validate();
  const int floor_n = minimum_resolution(mode.geometry, mode.eigenvalue);
  if (resolution < floor_n) {
    std::ostringstream msg;
    msg << "resolution " << resolution << " is below the sampling floor " << floor_n
        << " (16 samples per wavelength at lambda=" << mode.eigenvalue << ")";
    throw std::invalid_argument(msg.str());
  }

  const Geometry& geo = mode.geometry;
  const int d = geo.dimension;
  ScalarGrid grid = make_empty_grid(geo, resolution);
  grid.eigenvalue = mode.eigenvalue;
  grid.mode = mode;
  std::ostringstream src;
  src << "mode lambda=" << mode.eigenvalue << " terms=" << mode.terms.size();
  grid.source = src.str();
  if (with_gradient) grid.gradient.assign(d, Eigen::ArrayXd::Zero(grid.size()));

  const auto& ext = grid.lattice.extent;
  using Complex = std::complex<double>;
  for (const ModeTerm& term : mode.terms) {
    if (term.coeff == 0.0) continue;
    std::array<std::vector<double>, 3> s, c;
    std::array<double, 3> w{0.0, 0.0, 0.0};
    const bool box_term = term.phase == Phase::sin_product;
    for (int a = 0; a < 3; ++a) {
      s[a].assign(ext[a], a < d ? 0.0 : 1.0);
      c[a].assign(ext[a], 1.0);
      if (a >= d) {
        if (!box_term) s[a].assign(ext[a], 0.0);
        continue;
      }
      w[a] = (box_term ? kPi : 2.0 * kPi) * term.k[a] / geo.sides[a];
      for (int i = 0; i < ext[a]; ++i) {
        const std::int64_t num = (box_term ? 1 : 2) * static_cast<std::int64_t>(term.k[a]) * i;
        s[a][i] = sin_pi_fraction(num, resolution);
        c[a][i] = cos_pi_fraction(num, resolution);
      }
    }

    const double coeff = term.coeff;
#pragma omp parallel for schedule(static)
    for (int i2 = 0; i2 < ext[2]; ++i2) {
      for (int i1 = 0; i1 < ext[1]; ++i1) {
        const std::int64_t row = grid.lattice.ravel({0, i1, i2});
        if (box_term) {
          const double s12 = s[1][i1] * s[2][i2];
          if (s12 == 0.0 && !with_gradient) continue;
          for (int i0 = 0; i0 < ext[0]; ++i0) {
            grid.values[row + i0] += coeff * s[0][i0] * s12;
            if (with_gradient) {
              grid.gradient[0][row + i0] += coeff * w[0] * c[0][i0] * s12;
              grid.gradient[1][row + i0] += coeff * w[1] * s[0][i0] * c[1][i1] * s[2][i2];
              if (d == 3) grid.gradient[2][row + i0] += coeff * w[2] * s[0][i0] * s[1][i1] * c[2][i2];
            }
          }
        } else {
          const Complex p12 = Complex(c[1][i1], s[1][i1]) * Complex(c[2][i2], s[2][i2]);
          for (int i0 = 0; i0 < ext[0]; ++i0) {
            const Complex z = Complex(c[0][i0], s[0][i0]) * p12;
            const bool is_cos = term.phase == Phase::plane_cos;
            grid.values[row + i0] += coeff * (is_cos ? z.real() : z.imag());
            if (with_gradient) {
              const double g = is_cos ? -coeff * z.imag() : coeff * z.real();
              for (int a = 0; a < d; ++a) grid.gradient[a][row + i0] += g * w[a];
            }
          }
        }
      }
    }
  }
  return grid;
}

ScalarGrid sample_function(const Geometry& geometry, int resolution,
                           const std::function<double(const Point&)>& f, double eigenvalue,
                           std::string source) {
  geometry.validate();
  if (resolution < 2) throw std::invalid_argument("resolution must be at least 2");
  ScalarGrid grid = make_empty_grid(geometry, resolution);
  grid.eigenvalue = eigenvalue;
  grid.source = std::move(source);
  for (std::int64_t i = 0; i < grid.size(); ++i) grid.values[i] = f(grid.position(i));
  return grid;
}

}  // namespace nodalab
