#pragma once

#include "nodalab/geometry.hpp"

#include <array>
#include <limits>
#include <span>
#include <vector>

namespace nodalab {

/// Exact 1D squared distance transform (lower envelope of parabolas):
///   out[x] = min_q (spacing * (x - q))^2 + f[q].
/// Sites with f = +inf never win. On a periodic axis the distance between
/// x and q is the minimal image.
template <typename Scalar>
void squared_distance_1d(std::span<const Scalar> f, std::span<Scalar> out, Scalar spacing,
                         bool periodic) {
  const int n = static_cast<int>(f.size());
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  const int copies = periodic ? 3 : 1;
  const int m = n * copies;
  auto value = [&](int q) { return f[q % n]; };

  std::vector<int> sites;
  std::vector<Scalar> bounds;
  sites.reserve(m);
  bounds.reserve(m + 1);
  const Scalar w2 = spacing * spacing;
  auto intersect = [&](int q, int v) {
    const Scalar fq = value(q) + w2 * Scalar(q) * Scalar(q);
    const Scalar fv = value(v) + w2 * Scalar(v) * Scalar(v);
    return (fq - fv) / (Scalar(2) * w2 * Scalar(q - v));
  };
  for (int q = 0; q < m; ++q) {
    if (value(q) == inf) continue;
    while (!sites.empty()) {
      const Scalar s = intersect(q, sites.back());
      if (s > bounds.back()) {
        bounds.push_back(s);
        break;
      }
      sites.pop_back();
      bounds.pop_back();
    }
    if (sites.empty()) bounds.assign(1, -inf);
    sites.push_back(q);
  }
  if (sites.empty()) {
    for (int x = 0; x < n; ++x) out[x] = inf;
    return;
  }
  bounds.push_back(inf);
  const int offset = periodic ? n : 0;
  std::size_t k = 0;
  for (int x = offset; x < offset + n; ++x) {
    while (bounds[k + 1] < Scalar(x)) ++k;
    const Scalar delta = spacing * Scalar(x - sites[k]);
    out[x - offset] = delta * delta + value(sites[k]);
  }
}

/// In-place squared Euclidean distance transform of a lattice array.
/// On input `field` is 0 on feature points and +inf elsewhere; on output it
/// holds the squared distance to the nearest feature point.
template <typename Scalar>
void squared_distance_transform(std::span<Scalar> field, const LatticeIndexer& lattice,
                                const std::array<Scalar, 3>& spacing,
                                const std::array<bool, 3>& periodic) {
  std::vector<Scalar> line, result;
  for (int axis = 0; axis < lattice.dimension; ++axis) {
    const int n = lattice.extent[axis];
    line.resize(n);
    result.resize(n);
    const std::int64_t stride = lattice.stride[axis];
    const std::int64_t total = lattice.size();
    for (std::int64_t start = 0; start < total; ++start) {
      // Visit each line once, from the point whose coordinate on `axis` is 0.
      if ((start / stride) % n != 0) continue;
      for (int i = 0; i < n; ++i) line[i] = field[start + i * stride];
      squared_distance_1d<Scalar>(line, result, spacing[axis], periodic[axis]);
      for (int i = 0; i < n; ++i) field[start + i * stride] = result[i];
    }
  }
}

}  // namespace nodalab
