#pragma once

#include "nodalab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nodalab {

enum class KernelVariant { free_space, torus_images, box_dirichlet_images, box_dirichlet_spectral };

std::string to_string(KernelVariant variant);

/// Axis-aligned box [lo, hi].
struct Box {
  Point lo;
  Point hi;

  int dimension() const { return static_cast<int>(lo.size()); }
  Point sides() const { return hi - lo; }
  double volume() const { return sides().prod(); }
  bool contains(const Point& x) const {
    return ((x - lo).array() >= 0.0).all() && ((hi - x).array() >= 0.0).all();
  }
  static Box of(const Geometry& geometry) { return Box{Point::Zero(geometry.dimension), geometry.sides}; }
  Box intersection(const Box& other) const {
    return Box{lo.cwiseMax(other.lo), hi.cwiseMin(other.hi)};
  }
};

/// Relative Gaussian tail dropped by image-sum truncation.
inline constexpr double kImageTailTolerance = 1e-14;

struct KernelSpec {
  KernelVariant variant = KernelVariant::free_space;
  int dimension = 2;
  /// Torus fundamental cell or Dirichlet box; unused for free space.
  Box domain;
  /// Series length for the spectral variant; 0 picks one from t.
  int truncation = 0;

  static KernelSpec free_space(int dimension);
  static KernelSpec torus(const Geometry& geometry);
  static KernelSpec box_images(const Box& box);
  static KernelSpec box_spectral(const Box& box, int terms = 0);
};

namespace kernel1d {

template <typename Scalar>
Scalar gaussian(Scalar t, Scalar z) {
  return std::exp(-z * z / (4 * t)) / std::sqrt(4 * std::numbers::pi_v<Scalar> * t);
}

/// Image radius: shifts beyond this contribute less than tau of the peak.
template <typename Scalar>
Scalar image_reach(Scalar t, Scalar tau = Scalar(kImageTailTolerance)) {
  return std::sqrt(4 * t * std::log(1 / tau));
}

/// Periodic kernel on R / L Z.
template <typename Scalar>
Scalar torus(Scalar t, Scalar x, Scalar y, Scalar L) {
  Scalar z = std::abs(x - y);
  z -= L * std::floor(z / L);
  if (z > L / 2) z = L - z;
  const int K = static_cast<int>(std::ceil((image_reach(t) + z) / L));
  Scalar sum = gaussian(t, z);
  for (int k = 1; k <= K; ++k) sum += gaussian(t, z + k * L) + gaussian(t, z - k * L);
  return sum;
}

/// Dirichlet kernel on [0, L] by reflected images. Uses |x-y| and x+y only, so it is
/// bit-symmetric in (x, y).
template <typename Scalar>
Scalar box_images(Scalar t, Scalar x, Scalar y, Scalar L) {
  const Scalar a = std::abs(x - y);
  const Scalar s = x + y;
  const int K = static_cast<int>(std::ceil((image_reach(t) + 2 * L) / (2 * L)));
  Scalar sum = gaussian(t, a) - gaussian(t, s);
  for (int k = 1; k <= K; ++k) {
    sum += gaussian(t, a + 2 * k * L) + gaussian(t, a - 2 * k * L);
    sum -= gaussian(t, s + 2 * k * L) + gaussian(t, s - 2 * k * L);
  }
  return std::max(sum, Scalar(0));
}

template <typename Scalar>
int spectral_terms(Scalar t, Scalar L, Scalar tau = Scalar(kImageTailTolerance)) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  return static_cast<int>(std::ceil(L / pi * std::sqrt(std::log(1 / tau) / t))) + 2;
}

/// Dirichlet kernel on [0, L] by its sine series.
template <typename Scalar>
Scalar box_spectral(Scalar t, Scalar x, Scalar y, Scalar L, int terms = 0) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const int M = terms > 0 ? terms : spectral_terms(t, L);
  Scalar sum = 0;
  for (int m = M; m >= 1; --m) {
    const Scalar w = pi * m / L;
    sum += std::exp(-w * w * t) * std::sin(w * x) * std::sin(w * y);
  }
  return 2 * sum / L;
}

/// ∫_{-∞}^{z} gaussian(t, u) du.
template <typename Scalar>
Scalar gaussian_cdf(Scalar t, Scalar z) {
  return std::erfc(-z / std::sqrt(4 * t)) / 2;
}

/// ∫_0^L box_images(t, x, y, L) dy in closed form.
template <typename Scalar>
Scalar box_mass(Scalar t, Scalar x, Scalar L) {
  const int K = static_cast<int>(std::ceil((image_reach(t) + 2 * L) / (2 * L)));
  Scalar sum = 0;
  for (int k = -K; k <= K; ++k) {
    const Scalar c = x + 2 * k * L;
    sum += 2 * gaussian_cdf(t, c) - gaussian_cdf(t, c - L) - gaussian_cdf(t, c + L);
  }
  return std::clamp(sum, Scalar(0), Scalar(1));
}

/// ∫_c^e box_images(t, x, y, L) dy for [c, e] ⊂ [0, L], in closed form.
template <typename Scalar>
Scalar box_partial_mass(Scalar t, Scalar x, Scalar L, Scalar c, Scalar e) {
  const int K = static_cast<int>(std::ceil((image_reach(t) + 2 * L) / (2 * L)));
  Scalar sum = 0;
  for (int k = -K; k <= K; ++k) {
    const Scalar s = 2 * k * L;
    sum += gaussian_cdf(t, x - c + s) - gaussian_cdf(t, x - e + s);
    sum -= gaussian_cdf(t, x + e + s) - gaussian_cdf(t, x + c + s);
  }
  return std::clamp(sum, Scalar(0), Scalar(1));
}

}  // namespace kernel1d

/// Heat kernel p(t, x, y) for the given variant; t must be positive.
double kernel_eval(const KernelSpec& spec, double t, const Point& x, const Point& y);

/// Total mass ∫ p(t, x, y) dy; closed form for boxes, 1 for torus and free space.
double kernel_mass(const KernelSpec& spec, double t, const Point& x);

/// ∫_region p(t, x, y) dy for a Dirichlet box kernel and an axis box inside its domain.
double box_kernel_mass_over(const KernelSpec& spec, double t, const Point& x, const Box& region);

/// Cell-midpoint quadrature points of a box at n cells per axis.
struct Quadrature {
  std::vector<Point> nodes;
  double weight = 0.0;
};
Quadrature midpoint_quadrature(const Box& box, int cells_per_axis);

}  // namespace nodalab
