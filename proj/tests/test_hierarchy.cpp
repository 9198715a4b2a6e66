#include "doctest.h"

#include <cmath>
#include <numbers>

#include "waveadr/field.hpp"
#include "waveadr/hierarchy.hpp"
#include "waveadr/transfer.hpp"

using namespace waveadr;

namespace {

SlownessModel constant_slowness(int n, double value) {
  SlownessModel m;
  m.grid = make_grid(n);
  m.s = RealField(m.grid, value);
  return m;
}

}  // namespace

TEST_SUITE("hierarchy") {

TEST_CASE("default depth for N=127 produces the 127/63/31/15/7/3 chain") {
  Hierarchy h = build_hierarchy(constant_slowness(127, 1.0), 20.0 * std::numbers::pi);
  REQUIRE(h.depth() == 6);
  const int expected[] = {127, 63, 31, 15, 7, 3};
  for (int l = 0; l < 6; ++l) CHECK(h.levels[l].grid.n == expected[l]);
}

TEST_CASE("constant slowness restricts to the same constant on every level") {
  Hierarchy h = build_hierarchy(constant_slowness(63, 1.0), 10.0 * std::numbers::pi);
  for (const Level& lv : h.levels)
    for (double v : lv.s2.v) CHECK(std::abs(v - 1.0) <= 1e-14);
}

TEST_CASE("coarse squared slowness equals the 9-point weighted average of the fine field") {
  SlownessModel m;
  m.grid = make_grid(31);
  m.s = RealField(m.grid);
  for (int j = 0; j < 31; ++j)
    for (int i = 0; i < 31; ++i)
      m.s.at(i, j) = 0.25 + 0.75 * 0.5 * (1.0 + std::sin(0.37 * i - 0.21 * j));
  Hierarchy h = build_hierarchy(m, 10.0 * std::numbers::pi);
  REQUIRE(h.depth() >= 2);

  const RealField& fine = h.levels[0].s2;
  const RealField& coarse = h.levels[1].s2;
  const double w[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
  for (int J = 0; J < coarse.grid.n; ++J) {
    for (int I = 0; I < coarse.grid.n; ++I) {
      double acc = 0.0;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di)
          acc += w[dj + 1][di + 1] / 16.0 * fine.at(2 * I + 1 + di, 2 * J + 1 + dj);
      acc = std::min(1.0, std::max(0.0625, acc));
      CHECK(coarse.at(I, J) == doctest::Approx(acc).epsilon(1e-14));
    }
  }
}

TEST_CASE("incompatible interior counts are rejected with a hint at valid sizes") {
  CHECK_THROWS_WITH_AS(build_hierarchy(constant_slowness(8, 1.0), 10.0),
                       doctest::Contains("valid sizes"), std::invalid_argument);
}

TEST_CASE("damping mask is a quadratic ramp confined to one wavelength") {
  const double omega = 16.0 * std::numbers::pi;  // layer width w = 1/8
  Grid2D g = make_grid(63);
  RealField gamma = build_damping_mask(g, omega);
  const double w = 2.0 * std::numbers::pi / omega;

  SUBCASE("center node is outside the layer") {
    CHECK(gamma.at(31, 31) == 0.0);
  }
  SUBCASE("zero beyond one wavelength, quadratic ramp inside, bounded by omega") {
    for (int j = 0; j < g.n; ++j) {
      for (int i = 0; i < g.n; ++i) {
        const double x = g.coord(i), y = g.coord(j);
        const double d = std::min({x, 1.0 - x, y, 1.0 - y});
        CHECK(gamma.at(i, j) >= 0.0);
        CHECK(gamma.at(i, j) <= omega);
        if (d >= w) CHECK(gamma.at(i, j) == 0.0);
        else CHECK(gamma.at(i, j) == doctest::Approx(omega * (1.0 - d / w) * (1.0 - d / w)));
      }
    }
  }
  SUBCASE("boundary-adjacent node approaches omega") {
    const double d = g.coord(0);
    CHECK(gamma.at(0, 0) == doctest::Approx(omega * (1.0 - d / w) * (1.0 - d / w)));
    CHECK(gamma.at(0, 0) > 0.75 * omega);  // d = h = w/8 gives (7/8)^2 omega
  }
}

TEST_CASE("a node at exactly one wavelength from the boundary has zero damping") {
  // N = 15: nodes at i/16; with w = 4/16 the node at x = 4/16 sits exactly on the rim.
  Grid2D g = make_grid(15);
  const double w = 4.0 / 16.0;
  const double omega = 2.0 * std::numbers::pi / w;
  RealField gamma = build_damping_mask(g, omega);
  CHECK(gamma.at(3, 7) == 0.0);   // x = 4/16 = w exactly
  CHECK(gamma.at(2, 7) > 0.0);    // one node closer to the boundary
}

TEST_CASE("nearest valid interior count snaps to hierarchy-compatible sizes") {
  CHECK(nearest_valid_interior(128) == 127);
  CHECK(nearest_valid_interior(64) == 63);
  CHECK(nearest_valid_interior(127) == 127);
  CHECK(hierarchy_compatible(127));
  CHECK(hierarchy_compatible(63));
  CHECK_FALSE(hierarchy_compatible(128));
  for (int n : {nearest_valid_interior(100), nearest_valid_interior(200)})
    CHECK(hierarchy_compatible(n));
}

}  // TEST_SUITE
