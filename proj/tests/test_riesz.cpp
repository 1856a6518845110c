#include <doctest.h>

#include <cmath>

#include "picheck/euclid_oracle.hpp"
#include "picheck/gallery.hpp"
#include "picheck/riesz.hpp"
#include "test_util.hpp"

using namespace picheck;
using picheck_test::at;

// On segment(n) with poles at the ends, every interior vertex z at position
// i/(n-1) sees d(x,z)/m(B_{d}) = (i/(n-1)) / (i/n) = n/(n-1) from each pole,
// so R(z) = 2n/(n-1) and the total mass is 2(n-2)/(n-1).

TEST_CASE("segment kernel and mass in closed form") {
  auto seg = segment(9);
  const VertexId x = 0, y = 8;
  CHECK(riesz_potential(seg, x, y, 4) == doctest::Approx(2.25).epsilon(1e-12));
  CHECK(riesz_potential(seg, x, y, x) == 0.0);
  CHECK(riesz_potential(seg, x, y, y) == 0.0);

  auto mu = riesz_measure(seg, x, y, 1.0);
  CHECK(mu.pole_distance == doctest::Approx(1.0));
  CHECK(mu.support_radius == doctest::Approx(2.0));
  CHECK(mu.total_mass == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(mu[x] == 0.0);
  CHECK(mu[y] == 0.0);
  for (VertexId z = 1; z < 8; ++z)
    CHECK(mu[z] == doctest::Approx(2.25 / 9.0).epsilon(1e-12));
}

TEST_CASE("truncation clips the support ball") {
  auto seg = segment(9);
  // Poles 0 and 2: the support is the open ball of radius 0.5 around 0.
  auto mu = riesz_measure(seg, 0, 2, 1.0);
  CHECK(mu[1] == doctest::Approx(2.25 / 9.0).epsilon(1e-12));
  CHECK(mu[3] == doctest::Approx(2.25 / 9.0).epsilon(1e-12));
  CHECK(mu[4] == 0.0);  // distance exactly 0.5 falls outside the open ball
  CHECK(mu[7] == 0.0);
  CHECK(mu.total_mass == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mass grows with L but respects the doubling bound") {
  auto grid = picheck_test::pole_grid(MetricKind::AmbientEuclidean, 0.05);
  VertexId x = at(grid, 0.5, 0.7), y = at(grid, 1.5, 0.7);
  const double cd = doubling_estimate(grid).value;
  double prev = 0.0;
  for (double L : {1.0, 2.0, 4.0}) {
    auto mu = riesz_measure(grid, x, y, L);
    CHECK(mu.total_mass >= prev);
    CHECK(mu.total_mass <= 8.0 * cd * L * mu.pole_distance);
    prev = mu.total_mass;
  }
}

TEST_CASE("ball mass near a pole follows the radial identity") {
  auto grid = picheck_test::pole_grid(MetricKind::AmbientEuclidean, 0.02);
  VertexId x = at(grid, 0.5, 0.7), y = at(grid, 1.5, 0.7);
  auto ctx = make_pole_context(grid, x, y, 2.0);

  const double r = 0.25;
  double got = 0.0;
  for (VertexId v = 0; v < grid.vertex_count(); ++v)
    if (ctx.from_x[v] < r) got += ctx.measure[v];

  oracle::Vec ox{0.5, 0.7}, oy{1.5, 0.7};
  auto want = oracle::riesz_ball_mass_analytic(2, r, ox, oy);
  CHECK(std::abs(got - want.total) / want.total <= 0.10);
}

TEST_CASE("pole context carries consistent fields") {
  auto grid = picheck_test::unit_grid(MetricKind::GraphPath);
  VertexId x = at(grid, 0.2, 0.5), y = at(grid, 0.8, 0.5);
  auto ctx = make_pole_context(grid, x, y, 2.0);
  CHECK(ctx.pole_distance == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(ctx.from_x[y] == doctest::Approx(ctx.pole_distance));
  CHECK(ctx.from_y[x] == doctest::Approx(ctx.pole_distance));
  CHECK(ctx.measure.total_mass > 0.0);
  // Support stays inside the truncation ball.
  for (VertexId v = 0; v < grid.vertex_count(); ++v)
    if (ctx.measure[v] > 0.0)
      CHECK(ctx.from_x[v] < ctx.measure.support_radius);
}

TEST_CASE("maximal function of a constant field is the constant") {
  auto grid = picheck_test::unit_grid(MetricKind::AmbientEuclidean);
  std::vector<double> f(grid.vertex_count(), 0.75);
  CHECK(maximal_function(grid, f, 0.3, at(grid, 0.5, 0.5)) ==
        doctest::Approx(0.75).epsilon(1e-12));

  // Indicators average to at most one.
  std::vector<double> ind(grid.vertex_count(), 0.0);
  ind[at(grid, 0.5, 0.5)] = 1.0;
  double m = maximal_function(grid, ind, 0.3, at(grid, 0.5, 0.5));
  CHECK(m <= 1.0 + 1e-12);
  CHECK(m > 0.0);
}

TEST_CASE("two point check on a linear field") {
  auto seg = segment(9);
  std::vector<double> u(seg.vertex_count());
  for (VertexId v = 0; v < seg.vertex_count(); ++v) u[v] = v / 8.0;
  auto rc = ptpi_check(seg, u, 0, 8, 1.0);
  CHECK(rc.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rc.rhs == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(rc.ratio == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("ball averaged check flags rim contamination") {
  auto grid = picheck_test::unit_grid(MetricKind::AmbientEuclidean);
  std::vector<double> u(grid.vertex_count());
  for (VertexId v = 0; v < grid.vertex_count(); ++v) u[v] = grid.coords(v)[0];

  auto inner = pi_check(grid, u, at(grid, 0.5, 0.5), 0.2, 2.0);
  CHECK_FALSE(inner.flagged);
  CHECK(inner.ratio > 0.0);
  CHECK(inner.ratio < 5.0);

  auto rim = pi_check(grid, u, at(grid, 0.05, 0.05), 0.3, 2.0);
  CHECK(rim.flagged);
}
