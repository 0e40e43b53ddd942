#include "nodalab/doubling.hpp"
#include "nodalab/nodal.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace nodalab;
using std::numbers::pi;

TEST_CASE("box modes have product-many domains") {
  const Geometry g = Geometry::box(2);
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b) {
      const ScalarGrid grid = sample_field(box_mode(g, IntVector{{a, b}}), 96);
      const DomainLabeling lab = label_nodal_domains(grid);
      CHECK(lab.count() == a * b);
    }
  const ScalarGrid g3 = sample_field(box_mode(Geometry::box(3), IntVector{{2, 1, 1}}), 32);
  CHECK(label_nodal_domains(g3).count() == 2);
}

TEST_CASE("mode (2,2) quadrants") {
  const int N = 96;
  const ScalarGrid grid = sample_field(box_mode(Geometry::box(2), IntVector{{2, 2}}), N);
  const DomainLabeling lab = label_nodal_domains(grid);
  REQUIRE(lab.count() == 4);
  int plus = 0;
  for (int id = 1; id <= 4; ++id) {
    CHECK(lab.volume(id) == doctest::Approx(0.25).epsilon(2.0 / N / 0.25));
    plus += lab.sign(id) > 0;
  }
  CHECK(plus == 2);
}

TEST_CASE("first mode: one positive domain centred at the middle") {
  const int N = 64;
  const ScalarGrid grid = sample_field(box_mode(Geometry::box(2), IntVector{{1, 1}}), N);
  const DomainLabeling lab = label_nodal_domains(grid);
  REQUIRE(lab.count() == 1);
  CHECK(lab.sign(1) == 1);
  const auto r = inradius_report(lab, grid);
  CHECK(r[0].inradius == doctest::Approx(0.5).epsilon(2.0 / N));
  CHECK(r[0].centered_inradius == doctest::Approx(r[0].inradius));
  CHECK((r[0].incenter - Point{{0.5, 0.5}}).norm() <= 1.0 / N);
}

TEST_CASE("inradius of rectangles and slabs") {
  const Geometry g = Geometry::box(2);
  const int N = 128;
  for (auto m : {IntVector{{3, 1}}, IntVector{{2, 4}}, IntVector{{4, 4}}}) {
    const ScalarGrid grid = sample_field(box_mode(g, m), N);
    const DomainLabeling lab = label_nodal_domains(grid);
    for (const auto& r : inradius_report(lab, grid)) {
      CHECK(std::abs(r.inradius - 1.0 / (2 * m.maxCoeff())) <= 2.0 / N);
      CHECK(r.centered_inradius <= r.inradius + 1e-12);
      CHECK(r.inradius * std::sqrt(box_mode(g, m).eigenvalue) >= 0.3);
      CHECK(r.inradius * std::sqrt(box_mode(g, m).eigenvalue) <= pi);
    }
  }
  const ScalarGrid g3 = sample_field(box_mode(Geometry::box(3), IntVector{{2, 1, 1}}), 48);
  const DomainLabeling l3 = label_nodal_domains(g3);
  for (const auto& r : inradius_report(l3, g3)) CHECK(std::abs(r.inradius - 0.25) <= 2.0 / 48);
  // Slab (m,1,1): centered inradius equals 1/(2m).
  for (int m = 2; m <= 4; ++m) {
    const ScalarGrid s = sample_field(box_mode(Geometry::box(3), IntVector{{m, 1, 1}}), 64);
    const DomainLabeling ls = label_nodal_domains(s);
    for (const auto& r : inradius_report(ls, s)) {
      CHECK(r.centered_inradius >= 0.95 / (2 * m));
      CHECK(r.centered_inradius <= 1.05 / (2 * m));
    }
  }
}

TEST_CASE("degenerate field is rejected") {
  const ScalarGrid z = sample_function(Geometry::box(2), 16, [](const Point&) { return 0.0; });
  CHECK_THROWS_WITH_AS(label_nodal_domains(z), "degenerate field", std::invalid_argument);
}

TEST_CASE("property: labeling invariants on random torus fields") {
  const Geometry g = Geometry::torus(2);
  for (int level : {5, 13, 25})
    for (std::uint64_t seed : {1u, 2u}) {
      const auto mode = sweep_mode(g, level, seed);
      const ScalarGrid grid = sample_field(*mode, minimum_resolution(g, mode->eigenvalue));
      const DomainLabeling lab = label_nodal_domains(grid);
      double total = lab.zero_volume;
      for (int id = 1; id <= lab.count(); ++id) total += lab.volume(id);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      const int N = grid.resolution;
      for (std::int64_t i = 0; i < grid.size(); ++i) {
        const int l = lab.labels[i];
        if (l == 0) continue;
        CHECK((grid.values[i] > 0) == (lab.sign(l) > 0));
        const auto ij = grid.lattice.unravel(i);
        for (int a = 0; a < 2; ++a) {
          auto nb = ij;
          nb[a] = (nb[a] + 1) % N;
          const auto j = grid.lattice.ravel(nb);
          if (lab.labels[j] != 0 && (grid.values[j] > 0) == (grid.values[i] > 0)) CHECK(lab.labels[j] == l);
        }
      }
      const auto radii = inradius_report(lab, grid);
      const ClassicalBounds cb = classical_bounds_report(lab, grid, mode->eigenvalue);
      for (const auto& r : radii) {
        CHECK(r.centered_inradius <= r.inradius + 1e-12);
        CHECK(r.inradius <= cb.zero_hitting_radius + 1e-12);
      }
    }
}

TEST_CASE("deficiency of a quadrant domain") {
  const int N = 128;
  const Geometry g = Geometry::box(2);
  const EigenMode m = box_mode(g, IntVector{{4, 4}});
  const ScalarGrid grid = sample_field(m, N);
  const DomainLabeling lab = label_nodal_domains(grid);
  const int id = lab.labels[grid.lattice.ravel({3 * N / 8, 3 * N / 8, 0})];
  REQUIRE(id > 0);
  REQUIRE((grid.position(lab.peak_index(id)) - Point{{0.375, 0.375}}).norm() < 1e-12);
  const double R = 0.2;
  const double delta = R * std::sqrt(m.eigenvalue);
  // Oracle: fraction of the disk of radius R around (3/8, 3/8) outside [1/4, 1/2]^2, by fine quadrature.
  const int Q = 2000;
  long inside = 0, total = 0;
  for (int i = 0; i < Q; ++i)
    for (int j = 0; j < Q; ++j) {
      const double x = R * (2.0 * (i + 0.5) / Q - 1.0), y = R * (2.0 * (j + 0.5) / Q - 1.0);
      if (x * x + y * y > R * R) continue;
      ++total;
      if (std::abs(x) < 0.125 && std::abs(y) < 0.125) ++inside;
    }
  const double expected = 1.0 - static_cast<double>(inside) / total;
  // ±3h in radius moves the fraction by at most about 2·3h/R.
  CHECK(std::abs(deficiency_ratio(lab, grid, id, delta) - expected) <= 6.0 / N / R);
  CHECK(deficiency_ratio(lab, grid, id, 0.1) == 0.0);
}

TEST_CASE("property: deficiency is nondecreasing in delta") {
  const Geometry g = Geometry::torus(3);
  const auto mode = sweep_mode(g, 17, 2);
  const ScalarGrid grid = sample_field(*mode, minimum_resolution(g, mode->eigenvalue));
  const DomainLabeling lab = label_nodal_domains(grid);
  for (int id = 1; id <= lab.count(); ++id) {
    double prev = 0.0;
    for (double delta : {0.1, 0.2, 0.4, 1.0, 2.0, 3.0}) {
      const double v = deficiency_ratio(lab, grid, id, delta);
      CHECK(v >= prev);
      CHECK(v <= 1.0);
      prev = v;
    }
  }
}

TEST_CASE("Faber-Krahn values for box modes") {
  const double fk = faber_krahn_constant(2);
  CHECK(fk == doctest::Approx(18.1684).epsilon(1e-4));
  CHECK(faber_krahn_constant(3) == doctest::Approx(4.0 * pi / 3.0 * pi * pi * pi));
  for (int m = 1; m <= 4; ++m) {
    const EigenMode mode = box_mode(Geometry::box(2), IntVector{{m, m}});
    const ScalarGrid grid = sample_field(mode, 256);
    const DomainLabeling lab = label_nodal_domains(grid);
    const auto cb = classical_bounds_report(lab, grid, mode.eigenvalue);
    CHECK(cb.faber_krahn_min == doctest::Approx(2 * pi * pi).epsilon(0.05));
    CHECK(cb.faber_krahn_min >= fk * 0.9);
  }
}

TEST_CASE("zero hitting radius against exhaustive search") {
  const int N = 64;
  for (int m : {1, 2, 3}) {
    const ScalarGrid grid = sample_field(box_mode(Geometry::box(2), IntVector{{m, 1}}), N);
    const DomainLabeling lab = label_nodal_domains(grid);
    const double r = classical_bounds_report(lab, grid, 0.0).zero_hitting_radius;
    // Exhaustive: for each centre, the distance to the nearest point that is zero or of the other sign.
    double worst = 0.0;
    for (std::int64_t i = 0; i < grid.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      const int si = lab.labels[i] == 0 ? 0 : lab.sign(lab.labels[i]);
      if (si == 0) continue;
      for (std::int64_t j = 0; j < grid.size(); ++j) {
        const int sj = lab.labels[j] == 0 ? 0 : lab.sign(lab.labels[j]);
        if (sj != si) best = std::min(best, (grid.position(i) - grid.position(j)).norm());
      }
      worst = std::max(worst, best);
    }
    CHECK(r == doctest::Approx(worst).epsilon(1e-12));
  }
}

TEST_CASE("domain CSV has one row per domain") {
  const ScalarGrid grid = sample_field(box_mode(Geometry::box(2), IntVector{{2, 3}}), 64);
  const DomainLabeling lab = label_nodal_domains(grid);
  std::ostringstream out;
  write_domain_csv(out, lab, inradius_report(lab, grid), grid);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "lambda,domain_id,sign,volume,inradius,centered_inradius,argmax_x,argmax_y,faber_krahn");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 6);
}
