#include "nodalab/scaling.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace nodalab;
using std::numbers::pi;

TEST_CASE("exact power law") {
  std::vector<double> l, y;
  for (double v : {20.0, 80.0, 300.0, 1000.0, 4000.0}) {
    l.push_back(v);
    y.push_back(1.0 / std::sqrt(v));
  }
  const ScalingFit f = fit_scaling(l, y);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("log-corrected curve under a pure power fit") {
  std::vector<double> l, y;
  for (int i = 0; i <= 20; ++i) {
    const double v = 50.0 * std::pow(100.0, i / 20.0);
    l.push_back(v);
    y.push_back(3.0 / std::sqrt(v) / std::sqrt(std::log(v)));
  }
  const ScalingFit f = fit_scaling(l, y, ScalingModel::pure_power, 3);
  CHECK(f.slope > -0.65);
  CHECK(f.slope < -0.5);
  const ScalingFit g = fit_scaling(l, y, ScalingModel::power_with_log_correction, 3);
  CHECK(g.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(g.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("box mode inradius scaling") {
  std::vector<double> l, y;
  for (int m = 1; m <= 8; ++m) {
    l.push_back(2 * pi * pi * m * m);
    y.push_back(1.0 / (2.0 * m));
  }
  const ScalingFit f = fit_scaling(l, y);
  CHECK(f.slope >= -0.55);
  CHECK(f.slope <= -0.45);
  CHECK(f.r_squared >= 0.98);
}

TEST_CASE("invalid designs") {
  CHECK_THROWS_AS(fit_scaling({1, 2, 3}, {1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(fit_scaling({5, 5, 5, 5}, {1, 2, 3, 4}), std::invalid_argument);
  CHECK_THROWS_AS(fit_scaling({5, 6, 7, 8}, {1, -2, 3, 4}), std::invalid_argument);
  CHECK_THROWS_AS(fit_scaling({5, 6, 7}, {1, 2, 3, 4}), std::invalid_argument);
  CHECK(scaling_model_from_string(to_string(ScalingModel::power_with_log_correction)) ==
        ScalingModel::power_with_log_correction);
  CHECK_THROWS(scaling_model_from_string("quadratic"));
}
