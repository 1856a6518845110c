#pragma once

// Closed-form Euclidean reference values used to cross-check the discrete
// pipeline: Riesz kernels against Green function gradients, sphere energies,
// pole-swap defects on the truncation sphere, and separator energies of the
// bisecting halfspace.  Everything here is continuum math evaluated by
// quadrature; nothing depends on the point-cloud modules.

#include <array>
#include <cstdint>
#include <vector>

namespace picheck::oracle {

using Vec = std::vector<double>;

// Volume of the d-dimensional unit ball.
double unit_ball_volume(int d);

// Single-pole Riesz kernel  |x-z|^{1-d} / omega_d.
double riesz_kernel(int d, const Vec& x, const Vec& z);

// Green function of the Laplacian with pole x:
//   d = 2: -(1/2pi) ln|x-z|,   d >= 3: |x-z|^{2-d} / (d (d-2) omega_d).
double green(int d, const Vec& x, const Vec& z);

struct GradientCheck {
  double relative_error = 0.0;  // | |grad G| - R/d | / (R/d)
  bool step_flagged = false;    // step too large relative to |x-z|
};

// Central-difference gradient of the Green function versus R_x/d.
GradientCheck gradient_identity_check(int d, const Vec& x, const Vec& z, double step);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |last refinement delta| or MC stderr
  std::size_t nodes = 0;
};

// Integral of R_p over the sphere of radius r around p (analytically d for
// every r; evaluated by quadrature as a self-check).  d in {2,3} uses
// deterministic product rules; d >= 4 falls back to Monte Carlo with the given
// seed and reports the standard error.
QuadratureResult sphere_energy(int d, double r, std::uint64_t mc_seed = 1);

// Pole-swap defect on the truncation sphere:
//   delta_L = \int_{\partial B_{2 L |x-y|}(x)} |R_y - R_x| dH^{d-1}.
// Decays to zero as L grows.
QuadratureResult delta_L(int d, const Vec& x, const Vec& y, double L,
                         std::uint64_t mc_seed = 1);

// Energy of the perpendicular bisector of [x, y] inside the open truncation
// ball B_{2 L |x-y|}(x) against the two-pole kernel R_x + R_y.  Satisfies
// value >= sphere_energy - delta_L, hence >= d/2 once delta_L < d/2.
QuadratureResult halfspace_separator_energy(int d, const Vec& x, const Vec& y,
                                            double L);

struct BallMass {
  double x_term = 0.0;  // exactly d * r
  double y_term = 0.0;  // volume quadrature of R_y over B_r(x)
  double total = 0.0;
};

// Mass of B_r(x) under the two-pole Riesz density, split by pole.  Requires
// r < |x-y| so the y-kernel stays smooth on the domain.
BallMass riesz_ball_mass_analytic(int d, double r, const Vec& x, const Vec& y);

}  // namespace picheck::oracle
