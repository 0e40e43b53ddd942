#include "nodalab/field_sup.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace nodalab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMembershipSlack = 1e-12;

const Point& center_of(const Region& region) {
  return std::visit([](const auto& r) -> const Point& { return r.center; }, region);
}

double reach_of(const Region& region) {
  if (const auto* b = std::get_if<Ball>(&region)) return b->radius;
  return std::get<Cube>(region).half_side;
}

std::array<std::vector<double>, 3> lattice_coords(const ScalarGrid& grid, const Region& region,
                                                  int f, std::array<std::vector<int>, 3>* indices) {
  const int d = grid.dimension();
  const Point& c = center_of(region);
  const double reach = reach_of(region);
  std::array<std::vector<double>, 3> coords;
  for (int a = 0; a < 3; ++a) {
    if (a >= d) {
      coords[a] = {0.0};
      if (indices) (*indices)[a] = {0};
      continue;
    }
    const double s = grid.spacing(a) / f;
    const double slack = kMembershipSlack * std::max(1.0, reach / s);
    const auto lo = static_cast<long>(std::ceil((c[a] - reach) / s - slack));
    const auto hi = static_cast<long>(std::floor((c[a] + reach) / s + slack));
    for (long j = lo; j <= hi; ++j) {
      coords[a].push_back(static_cast<double>(j) * s);
      if (indices) (*indices)[a].push_back(static_cast<int>(j));
    }
  }
  return coords;
}

}  // namespace

Region scaled(const Region& region, double factor) {
  if (const auto* b = std::get_if<Ball>(&region)) return Ball{b->center, b->radius * factor};
  const auto& q = std::get<Cube>(region);
  return Cube{q.center, q.half_side * factor};
}

double circumradius(const Region& region) {
  if (const auto* b = std::get_if<Ball>(&region)) return b->radius;
  const auto& q = std::get<Cube>(region);
  return q.half_side * std::sqrt(static_cast<double>(q.center.size()));
}

bool fits_in(const Region& region, const Geometry& geometry) {
  if (geometry.periodic()) return circumradius(region) < geometry.injectivity_radius();
  const Point& c = center_of(region);
  const double reach = reach_of(region);
  for (int a = 0; a < geometry.dimension; ++a)
    if (c[a] - reach < -1e-12 || c[a] + reach > geometry.sides[a] + 1e-12) return false;
  return true;
}

bool contains(const Region& region, const Point& x) {
  if (const auto* b = std::get_if<Ball>(&region)) {
    const double r2 = b->radius * b->radius;
    return (x - b->center).squaredNorm() <= r2 * (1.0 + kMembershipSlack) + 1e-300;
  }
  const auto& q = std::get<Cube>(region);
  return ((x - q.center).cwiseAbs().array() <= q.half_side * (1.0 + kMembershipSlack)).all();
}

TensorSamples evaluate_tensor(const EigenMode& mode, std::array<std::vector<double>, 3> coords,
                              bool with_gradient) {
  using Complex = std::complex<double>;
  const Geometry& geo = mode.geometry;
  const int d = geo.dimension;
  TensorSamples out;
  out.coords = std::move(coords);
  for (int a = d; a < 3; ++a) out.coords[a] = {0.0};
  const std::array<std::size_t, 3> n{out.coords[0].size(), out.coords[1].size(), out.coords[2].size()};
  const std::size_t total = n[0] * n[1] * n[2];
  out.values = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(total));
  std::array<Eigen::ArrayXd, 3> grad;
  if (with_gradient)
    for (int a = 0; a < d; ++a) grad[a] = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(total));

  for (const ModeTerm& term : mode.terms) {
    const bool box_term = term.phase == Phase::sin_product;
    std::array<std::vector<double>, 3> s, c;
    std::array<double, 3> w{0.0, 0.0, 0.0};
    for (int a = 0; a < 3; ++a) {
      s[a].resize(n[a]);
      c[a].resize(n[a]);
      if (a < d) w[a] = (box_term ? kPi : 2.0 * kPi) * term.k[a] / geo.sides[a];
      for (std::size_t i = 0; i < n[a]; ++i) {
        if (a >= d) {
          s[a][i] = box_term ? 1.0 : 0.0;
          c[a][i] = 1.0;
          continue;
        }
        s[a][i] = std::sin(w[a] * out.coords[a][i]);
        c[a][i] = std::cos(w[a] * out.coords[a][i]);
      }
    }
    std::size_t idx = 0;
    for (std::size_t k = 0; k < n[2]; ++k)
      for (std::size_t j = 0; j < n[1]; ++j) {
        const Complex p12 = Complex(c[1][j], s[1][j]) * Complex(c[2][k], s[2][k]);
        for (std::size_t i = 0; i < n[0]; ++i, ++idx) {
          if (box_term) {
            out.values[idx] += term.coeff * s[0][i] * s[1][j] * s[2][k];
            if (with_gradient) {
              grad[0][idx] += term.coeff * w[0] * c[0][i] * s[1][j] * s[2][k];
              grad[1][idx] += term.coeff * w[1] * s[0][i] * c[1][j] * s[2][k];
              if (d == 3) grad[2][idx] += term.coeff * w[2] * s[0][i] * s[1][j] * c[2][k];
            }
          } else {
            const Complex z = Complex(c[0][i], s[0][i]) * p12;
            const bool is_cos = term.phase == Phase::plane_cos;
            out.values[idx] += term.coeff * (is_cos ? z.real() : z.imag());
            if (with_gradient) {
              const double g = is_cos ? -term.coeff * z.imag() : term.coeff * z.real();
              for (int a = 0; a < d; ++a) grad[a][idx] += g * w[a];
            }
          }
        }
      }
  }
  if (with_gradient) {
    out.gradient_norm = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(total));
    for (int a = 0; a < d; ++a) out.gradient_norm += grad[a].square();
    out.gradient_norm = out.gradient_norm.sqrt();
  }
  return out;
}

int auto_oversampling(const ScalarGrid& grid, const Region& region) {
  if (!grid.mode) return 1;
  double h = 0.0;
  for (int a = 0; a < grid.dimension(); ++a) h = std::max(h, grid.spacing(a));
  const double cells = circumradius(region) / h;
  if (cells <= 8.0) return 4;
  if (cells <= 16.0) return 2;
  return 1;
}

double gradient_bound(const ScalarGrid& grid) {
  if (grid.mode) return grid.mode->gradient_bound();
  const int d = grid.dimension();
  if (grid.has_gradient()) {
    Eigen::ArrayXd sq = Eigen::ArrayXd::Zero(grid.size());
    for (int a = 0; a < d; ++a) sq += grid.gradient[a].square();
    return std::sqrt(sq.maxCoeff());
  }
  // Estimate from one-sided differences.
  double worst = 0.0;
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    auto ijk = grid.lattice.unravel(i);
    double sq = 0.0;
    for (int a = 0; a < d; ++a) {
      auto next = ijk;
      next[a] += 1;
      if (next[a] == grid.lattice.extent[a]) {
        if (!grid.geometry.periodic()) continue;
        next[a] = 0;
      }
      const double g = (grid.values[grid.lattice.ravel(next)] - grid.values[i]) / grid.spacing(a);
      sq += g * g;
    }
    worst = std::max(worst, sq);
  }
  return std::sqrt(worst);
}

namespace {

LocalSup lattice_sup(const ScalarGrid& grid, const Region& region, int oversampling, bool gradient) {
  if (oversampling < 1) throw std::invalid_argument("oversampling must be >= 1");
  if (!grid.mode && oversampling != 1)
    throw std::invalid_argument("oversampling needs an analytic mode on the grid");
  if (gradient && !grid.mode && !grid.has_gradient())
    throw std::invalid_argument("gradient sup needs an analytic mode or gradient arrays");
  const int d = grid.dimension();
  std::array<std::vector<int>, 3> indices;
  auto coords = lattice_coords(grid, region, oversampling, &indices);

  LocalSup out;
  out.value = -1.0;
  out.argmax = center_of(region);
  double half_diag_sq = 0.0;
  for (int a = 0; a < d; ++a) {
    const double s = grid.spacing(a) / oversampling;
    half_diag_sq += 0.25 * s * s;
  }

  Point y(d);
  if (grid.mode) {
    const TensorSamples samples = evaluate_tensor(*grid.mode, coords, gradient);
    std::size_t idx = 0;
    for (std::size_t k = 0; k < samples.coords[2].size(); ++k)
      for (std::size_t j = 0; j < samples.coords[1].size(); ++j)
        for (std::size_t i = 0; i < samples.coords[0].size(); ++i, ++idx) {
          y[0] = samples.coords[0][i];
          y[1] = samples.coords[1][j];
          if (d == 3) y[2] = samples.coords[2][k];
          if (!contains(region, y)) continue;
          ++out.samples;
          const double v = gradient ? samples.gradient_norm[idx] : std::abs(samples.values[idx]);
          if (v > out.value) {
            out.value = v;
            out.argmax = y;
          }
        }
  } else {
    const LatticeIndexer& lat = grid.lattice;
    for (int k : indices[2])
      for (int j : indices[1])
        for (int i : indices[0]) {
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
          if (!inside || !contains(region, y)) continue;
          ++out.samples;
          const std::int64_t gi = lat.ravel(g);
          double v = 0.0;
          if (gradient) {
            for (int a = 0; a < d; ++a) v += grid.gradient[a][gi] * grid.gradient[a][gi];
            v = std::sqrt(v);
          } else {
            v = std::abs(grid.values[gi]);
          }
          if (v > out.value) {
            out.value = v;
            out.argmax = y;
          }
        }
  }
  if (out.samples == 0) throw std::invalid_argument("region contains no lattice points");
  // Second derivatives are bounded by λ·sum|c| for gradient sups.
  const double lipschitz =
      gradient ? (grid.mode ? std::sqrt(grid.eigenvalue) * grid.mode->gradient_bound() : 0.0)
               : gradient_bound(grid);
  out.error_bound = lipschitz * std::sqrt(half_diag_sq);
  return out;
}

}  // namespace

LocalSup local_sup(const ScalarGrid& grid, const Region& region, int oversampling) {
  return lattice_sup(grid, region, oversampling, false);
}

LocalSup local_gradient_sup(const ScalarGrid& grid, const Region& region, int oversampling) {
  return lattice_sup(grid, region, oversampling, true);
}

}  // namespace nodalab
