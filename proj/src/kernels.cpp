#include "nodalab/kernels.hpp"

namespace nodalab {

std::string to_string(KernelVariant variant) {
  switch (variant) {
    case KernelVariant::free_space: return "free_space";
    case KernelVariant::torus_images: return "torus_images";
    case KernelVariant::box_dirichlet_images: return "box_dirichlet_images";
    case KernelVariant::box_dirichlet_spectral: return "box_dirichlet_spectral";
  }
  return "unknown";
}

KernelSpec KernelSpec::free_space(int dimension) {
  KernelSpec s;
  s.variant = KernelVariant::free_space;
  s.dimension = dimension;
  s.domain = Box{Point::Zero(dimension), Point::Zero(dimension)};
  return s;
}

KernelSpec KernelSpec::torus(const Geometry& geometry) {
  if (!geometry.periodic()) throw std::invalid_argument("torus kernel needs a torus geometry");
  KernelSpec s;
  s.variant = KernelVariant::torus_images;
  s.dimension = geometry.dimension;
  s.domain = Box::of(geometry);
  return s;
}

KernelSpec KernelSpec::box_images(const Box& box) {
  if (!((box.hi - box.lo).array() > 0.0).all()) throw std::invalid_argument("degenerate box");
  KernelSpec s;
  s.variant = KernelVariant::box_dirichlet_images;
  s.dimension = box.dimension();
  s.domain = box;
  return s;
}

KernelSpec KernelSpec::box_spectral(const Box& box, int terms) {
  KernelSpec s = box_images(box);
  s.variant = KernelVariant::box_dirichlet_spectral;
  s.truncation = terms;
  return s;
}

double kernel_eval(const KernelSpec& spec, double t, const Point& x, const Point& y) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel time must be positive");
  double p = 1.0;
  for (int a = 0; a < spec.dimension; ++a) {
    switch (spec.variant) {
      case KernelVariant::free_space:
        p *= kernel1d::gaussian(t, x[a] - y[a]);
        break;
      case KernelVariant::torus_images:
        p *= kernel1d::torus(t, x[a], y[a], spec.domain.hi[a] - spec.domain.lo[a]);
        break;
      case KernelVariant::box_dirichlet_images:
      case KernelVariant::box_dirichlet_spectral: {
        const double L = spec.domain.hi[a] - spec.domain.lo[a];
        const double xa = x[a] - spec.domain.lo[a], ya = y[a] - spec.domain.lo[a];
        if (xa < 0.0 || xa > L || ya < 0.0 || ya > L) return 0.0;
        p *= spec.variant == KernelVariant::box_dirichlet_images
                 ? kernel1d::box_images(t, xa, ya, L)
                 : kernel1d::box_spectral(t, xa, ya, L, spec.truncation);
        break;
      }
    }
  }
  return p;
}

double kernel_mass(const KernelSpec& spec, double t, const Point& x) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel time must be positive");
  if (spec.variant == KernelVariant::free_space || spec.variant == KernelVariant::torus_images)
    return 1.0;
  double m = 1.0;
  for (int a = 0; a < spec.dimension; ++a) {
    const double L = spec.domain.hi[a] - spec.domain.lo[a];
    const double xa = x[a] - spec.domain.lo[a];
    if (xa <= 0.0 || xa >= L) return 0.0;
    m *= kernel1d::box_mass(t, xa, L);
  }
  return m;
}

double box_kernel_mass_over(const KernelSpec& spec, double t, const Point& x, const Box& region) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel time must be positive");
  if (spec.variant != KernelVariant::box_dirichlet_images &&
      spec.variant != KernelVariant::box_dirichlet_spectral)
    throw std::invalid_argument("partial mass needs a Dirichlet box kernel");
  double m = 1.0;
  for (int a = 0; a < spec.dimension; ++a) {
    const double L = spec.domain.hi[a] - spec.domain.lo[a];
    const double xa = x[a] - spec.domain.lo[a];
    const double c = std::max(region.lo[a] - spec.domain.lo[a], 0.0);
    const double e = std::min(region.hi[a] - spec.domain.lo[a], L);
    if (xa <= 0.0 || xa >= L || e <= c) return 0.0;
    m *= kernel1d::box_partial_mass(t, xa, L, c, e);
  }
  return m;
}

Quadrature midpoint_quadrature(const Box& box, int cells_per_axis) {
  if (cells_per_axis < 1) throw std::invalid_argument("quadrature needs at least one cell");
  const int d = box.dimension();
  const Point h = box.sides() / cells_per_axis;
  Quadrature q;
  q.weight = h.prod();
  std::int64_t total = 1;
  for (int a = 0; a < d; ++a) total *= cells_per_axis;
  q.nodes.reserve(static_cast<std::size_t>(total));
  for (std::int64_t i = 0; i < total; ++i) {
    Point y(d);
    std::int64_t r = i;
    for (int a = 0; a < d; ++a) {
      y[a] = box.lo[a] + (static_cast<double>(r % cells_per_axis) + 0.5) * h[a];
      r /= cells_per_axis;
    }
    q.nodes.push_back(y);
  }
  return q;
}

}  // namespace nodalab
