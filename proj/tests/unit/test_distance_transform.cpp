#include "nodalab/distance_transform.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nodalab;

namespace {

// Brute-force squared distance to the nearest feature point.
std::vector<double> brute(const std::vector<char>& feature, const LatticeIndexer& lat, double h, bool periodic) {
  std::vector<double> out(feature.size(), std::numeric_limits<double>::infinity());
  for (std::int64_t i = 0; i < lat.size(); ++i)
    for (std::int64_t j = 0; j < lat.size(); ++j) {
      if (!feature[j]) continue;
      const auto a = lat.unravel(i), b = lat.unravel(j);
      double s = 0.0;
      for (int k = 0; k < lat.dimension; ++k) {
        int dk = std::abs(a[k] - b[k]);
        if (periodic) dk = std::min(dk, lat.extent[k] - dk);
        s += (h * dk) * (h * dk);
      }
      out[i] = std::min(out[i], s);
    }
  return out;
}

}  // namespace

TEST_CASE("property: separable transform equals brute force") {
  std::mt19937_64 rng(5);
  for (int d : {2, 3})
    for (bool periodic : {false, true})
      for (int trial = 0; trial < 4; ++trial) {
        const int n = d == 2 ? 17 : 7;
        const LatticeIndexer lat(d, {n, n, d == 3 ? n : 1});
        std::vector<char> feature(lat.size(), 0);
        std::bernoulli_distribution pick(0.04 + 0.05 * trial);
        for (auto& f : feature) f = pick(rng);
        feature[0] = 1;
        std::vector<double> field(lat.size());
        for (std::size_t i = 0; i < field.size(); ++i)
          field[i] = feature[i] ? 0.0 : std::numeric_limits<double>::infinity();
        squared_distance_transform<double>(field, lat, {0.5, 0.5, 0.5}, {periodic, periodic, periodic});
        const auto ref = brute(feature, lat, 0.5, periodic);
        for (std::size_t i = 0; i < field.size(); ++i) CHECK(field[i] == doctest::Approx(ref[i]).epsilon(1e-14));
      }
}

TEST_CASE("one dimensional transform without sites stays infinite") {
  std::vector<float> f(5, std::numeric_limits<float>::infinity()), out(5);
  squared_distance_1d<float>(f, out, 1.0f, false);
  for (float v : out) CHECK(std::isinf(v));
}

TEST_CASE("periodic wrap uses the minimal image") {
  std::vector<double> f(10, std::numeric_limits<double>::infinity()), out(10);
  f[0] = 0.0;
  squared_distance_1d<double>(f, out, 1.0, true);
  CHECK(out[9] == 1.0);
  CHECK(out[5] == 25.0);
  squared_distance_1d<double>(f, out, 1.0, false);
  CHECK(out[9] == 81.0);
}
