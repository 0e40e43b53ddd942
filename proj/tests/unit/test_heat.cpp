#include "nodalab/capacity.hpp"
#include "nodalab/heat.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace nodalab;

namespace {

CondenserSystem disk_system(double h) {
  return assemble(concentric_condenser(2, 0.1, 0.3, h, Point::Constant(2, 0.5)));
}

}  // namespace

TEST_CASE("heat flow converges to the equilibrium potential") {
  const CondenserSystem sys = disk_system(1.0 / 64);
  const SolveReport eq = equilibrium_potential(sys);
  CHECK(eq.residual <= kEquilibriumTolerance);
  const auto states = heat_flow_psi(sys, 2.5, 0.05);
  CHECK((states.back().temperature - eq.solution).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(states.back().time == doctest::Approx(2.5));
  CHECK(states.back().step == 50);
}

TEST_CASE("single step respects the maximum principle and stays local") {
  const double h = 1.0 / 64;
  const CondenserSystem sys = disk_system(h);
  const auto s = evolve(sys, Eigen::VectorXd::Zero(sys.unknowns()), h * h, h * h, true).back();
  CHECK(s.step == 1);
  const Eigen::ArrayXd full = sys.full_field(s.temperature);
  CHECK(full.maxCoeff() <= 1.0 + 1e-12);
  CHECK(full.minCoeff() >= -1e-12);
  const Point c = Point::Constant(2, 0.5);
  for (std::int64_t i = 0; i < sys.spec.node_count(); ++i)
    if ((sys.spec.position(i) - c).norm() > 0.1 + 12 * h) CHECK(full[i] <= 1e-5);
  CHECK_THROWS_AS(heat_flow_psi(sys, 0.01, 0.002), std::invalid_argument);
}

TEST_CASE("property: temperatures stay in [0,1] and grow in time") {
  const CondenserSystem sys = assemble(shape_condenser(3, "two_balls", 1.0 / 32));
  const auto states = evolve(sys, Eigen::VectorXd::Zero(sys.unknowns()), 0.02, 0.001, true, 1);
  REQUIRE(states.size() >= 20);
  for (std::size_t k = 0; k < states.size(); ++k) {
    CHECK(states[k].temperature.maxCoeff() <= 1.0 + 1e-12);
    CHECK(states[k].temperature.minCoeff() >= -1e-12);
    if (k > 0) CHECK((states[k].temperature - states[k - 1].temperature).minCoeff() >= -1e-12);
  }
}

TEST_CASE("equilibrium potential of concentric shells") {
  {
    const CondenserSystem sys = disk_system(1.0 / 256);
    const Eigen::ArrayXd v = sys.full_field(equilibrium_potential(sys).solution);
    const double exact = std::log(1.5) / std::log(3.0);
    CHECK(sys.interpolate(v, Point{{0.7, 0.5}}) == doctest::Approx(exact).epsilon(0.02));
    // Strictly inside (0,1) on U \ K.
    for (std::int64_t i = 0; i < sys.spec.node_count(); ++i)
      if (sys.spec.u_mask[i] && !sys.spec.k_mask[i]) {
        CHECK(v[i] > 0.0);
        CHECK(v[i] < 1.0);
      }
  }
  {
    // Node masks bias the effective inner radius low at this spacing (about 2.5% here).
    const CondenserSystem sys = assemble(concentric_condenser(3, 0.1, 0.3, 1.0 / 96, Point::Constant(3, 0.5)));
    const Eigen::ArrayXd v = sys.full_field(equilibrium_potential(sys).solution);
    CHECK(sys.interpolate(v, Point{{0.7, 0.5, 0.5}}) == doctest::Approx(0.25).epsilon(0.03));
  }
}

TEST_CASE("golden temperature of the concentric sphere condenser") {
  const Point x{{0.7, 0.5, 0.5}};
  double values[2];
  int k = 0;
  for (double h : {1.0 / 64, 1.0 / 96}) {
    const CondenserSystem sys = assemble(concentric_condenser(3, 0.1, 0.3, h, Point::Constant(3, 0.5)));
    const auto s = heat_flow_psi(sys, 0.04, 0.001).back();
    values[k++] = sys.interpolate(sys.full_field(s.temperature), x);
  }
  CHECK(values[0] == doctest::Approx(0.2341960787).epsilon(1e-8));
  CHECK(values[1] == doctest::Approx(0.2436658120).epsilon(1e-8));
  CHECK(std::abs(values[1] - values[0]) <= 0.015);
}

TEST_CASE("deficit identity with a shared propagator") {
  const DeficitCheck d = deficit_identity_check(disk_system(1.0 / 128), 0.02, 1e-4);
  CHECK(d.steps == 200);
  CHECK(d.discrepancy <= 1e-8);
  const DeficitCheck one = deficit_identity_check(disk_system(1.0 / 64), 1e-5, 1e-5);
  CHECK(one.discrepancy <= 1e-8);
  const DeficitCheck shape = deficit_identity_check(assemble(shape_condenser(3, "cube", 1.0 / 32)), 0.0625, 0.005);
  CHECK(shape.discrepancy <= 1e-8);
}

TEST_CASE("checkpoints are written with metadata") {
  const CondenserSystem sys = disk_system(1.0 / 32);
  const auto s = heat_flow_psi(sys, 0.01, 0.001).back();
  const auto dir = std::filesystem::temp_directory_path() / "nodalab_ckpt";
  std::filesystem::create_directories(dir);
  const auto paths = save_checkpoint(sys, s, dir / "state");
  REQUIRE(paths.size() == 2);
  CHECK(std::filesystem::file_size(paths[0]) == sys.spec.node_count() * sizeof(double));
  std::ifstream in(paths[1]);
  const auto j = nlohmann::json::parse(in);
  CHECK(j.at("t").get<double>() == doctest::Approx(0.01));
  CHECK(j.at("step").get<int>() == 10);
  CHECK(j.contains("residual"));
  std::filesystem::remove_all(dir);
}
