#include <doctest.h>

#include <cmath>
#include <limits>

#include "picheck/euclid_oracle.hpp"

using namespace picheck::oracle;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(unit_ball_volume(2) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
}

TEST_CASE("riesz kernel and green function closed forms") {
  Vec x{0.0, 0.0}, z{0.5, 0.0};
  CHECK(riesz_kernel(2, x, z) == doctest::Approx(2.0 / kPi).epsilon(1e-14));
  CHECK(green(2, x, z) ==
        doctest::Approx(-std::log(0.5) / (2.0 * kPi)).epsilon(1e-14));

  Vec x3{0.0, 0.0, 0.0}, z3{0.5, 0.0, 0.0};
  // d (d-2) omega_d = 4 pi in three dimensions.
  CHECK(green(3, x3, z3) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
  CHECK(riesz_kernel(3, x3, z3) ==
        doctest::Approx(4.0 / (4.0 * kPi / 3.0)).epsilon(1e-12));
}

TEST_CASE("green gradient magnitude matches the kernel over d") {
  Vec x{0.1, 0.2}, z{0.8, 0.6};
  auto g2 = gradient_identity_check(2, x, z, 1e-4);
  CHECK_FALSE(g2.step_flagged);
  CHECK(g2.relative_error <= 1e-5);

  Vec x3{0.0, 0.0, 0.3}, z3{0.5, 0.4, 0.0};
  auto g3 = gradient_identity_check(3, x3, z3, 1e-4);
  CHECK_FALSE(g3.step_flagged);
  CHECK(g3.relative_error <= 1e-5);

  // A step on the order of the separation is flagged.
  CHECK(gradient_identity_check(2, x, z, 0.5).step_flagged);
}

TEST_CASE("sphere energy is the dimension at every radius") {
  for (int d : {2, 3})
    for (double r : {0.5, 1.0, 2.0}) {
      auto q = sphere_energy(d, r);
      CHECK(std::abs(q.value - d) / d <= 1e-3);
      CHECK(q.nodes > 0);
    }
  // Monte Carlo fallback in higher dimensions still lands near d.  The
  // integrand is constant on the sphere, so the variance estimate collapses.
  auto q4 = sphere_energy(4, 1.0, 7);
  CHECK(q4.nodes >= 100'000);
  CHECK(q4.error_estimate <= 1e-9 * q4.value);
  CHECK(std::abs(q4.value - 4.0) / 4.0 <= 0.05);
}

TEST_CASE("pole swap defect decays with the truncation") {
  Vec x{0.0, 0.0}, y{1.0, 0.0};
  double last = std::numeric_limits<double>::infinity();
  for (double L : {1.0, 2.0, 4.0}) {
    auto q = delta_L(2, x, y, L);
    CHECK(q.value > 0.0);
    CHECK(q.value < last);
    last = q.value;
  }
}

TEST_CASE("halfspace separator energy dominates half the dimension") {
  Vec x{0.0, 0.0}, y{1.0, 0.0};
  auto e = halfspace_separator_energy(2, x, y, 4.0);
  CHECK(e.value >= 1.0);

  Vec x3{0.0, 0.0, 0.0}, y3{1.0, 0.0, 0.0};
  auto e3 = halfspace_separator_energy(3, x3, y3, 4.0);
  CHECK(e3.value >= 1.5);
}

TEST_CASE("analytic ball mass splits by pole") {
  Vec x{0.0, 0.0}, y{1.0, 0.0};
  auto m = riesz_ball_mass_analytic(2, 0.25, x, y);
  CHECK(m.x_term == 2.0 * 0.25);  // exact by the radial identity
  CHECK(m.y_term > 0.0);
  CHECK(m.total == m.x_term + m.y_term);
  // Kernel of the far pole is near 1/(pi |x-y|) on a small ball.
  const double approx_y = kPi * 0.25 * 0.25 / kPi;
  CHECK(m.y_term == doctest::Approx(approx_y).epsilon(0.10));
}
