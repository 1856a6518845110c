#include "picheck/euclid_oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace picheck::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

double norm(const Vec& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

double dist(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

void check_dim(int d, const Vec& v) {
  if (static_cast<int>(v.size()) != d) throw std::invalid_argument("dimension mismatch");
}

// Gauss–Legendre nodes/weights on [-1, 1], computed by Newton on Legendre
// polynomials.  n stays small (<= 64), accuracy is ample.
void gauss_legendre(std::size_t n, std::vector<double>& xs, std::vector<double>& ws) {
  xs.resize(n);
  ws.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    xs[i] = x;
    ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

// Composite Gauss–Legendre over [a, b] split into `panels` panels.
template <class F>
double integrate_1d(F&& f, double a, double b, std::size_t panels, std::size_t order,
                    std::size_t* nodes_out = nullptr) {
  std::vector<double> xs, ws;
  gauss_legendre(order, xs, ws);
  double total = 0.0;
  double len = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    double lo = a + p * len;
    double mid = lo + 0.5 * len, half = 0.5 * len;
    for (std::size_t i = 0; i < order; ++i) total += ws[i] * f(mid + half * xs[i]) * half;
  }
  if (nodes_out) *nodes_out = panels * order;
  return total;
}

// Doubling refinement until the relative change falls below tol.
template <class Eval>
QuadratureResult refine(Eval&& eval, std::size_t start, double tol) {
  QuadratureResult res;
  std::size_t n = start;
  double prev = eval(n, res.nodes);
  for (int round = 0; round < 8; ++round) {
    n *= 2;
    std::size_t nodes = 0;
    double cur = eval(n, nodes);
    res.value = cur;
    res.nodes = nodes;
    res.error_estimate = std::abs(cur - prev);
    double scale = std::max(std::abs(cur), 1e-300);
    if (res.error_estimate <= tol * scale) return res;
    prev = cur;
  }
  throw std::runtime_error("quadrature failed to converge at " +
                           std::to_string(res.nodes) + " nodes");
}

// Uniform point on S^{d-1} via normalized Gaussians.
Vec sphere_sample(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec u(d);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (int k = 0; k < d; ++k) {
      u[k] = gauss(rng);
      n2 += u[k] * u[k];
    }
  } while (n2 < 1e-12);
  double inv = 1.0 / std::sqrt(n2);
  for (int k = 0; k < d; ++k) u[k] *= inv;
  return u;
}

double sphere_area(int d) { return d * unit_ball_volume(d); }

// Monte Carlo mean of f over the sphere of radius r around c, scaled by area.
template <class F>
QuadratureResult sphere_mc(int d, const Vec& c, double r, F&& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t samples = 200'000;
  double sum = 0.0, sum2 = 0.0;
  Vec z(d);
  for (std::size_t i = 0; i < samples; ++i) {
    Vec u = sphere_sample(d, rng);
    for (int k = 0; k < d; ++k) z[k] = c[k] + r * u[k];
    double v = f(z);
    sum += v;
    sum2 += v * v;
  }
  double mean = sum / samples;
  double var = std::max(0.0, sum2 / samples - mean * mean);
  double area = sphere_area(d) * std::pow(r, d - 1);
  QuadratureResult res;
  res.value = mean * area;
  res.error_estimate = std::sqrt(var / samples) * area;
  res.nodes = samples;
  return res;
}

// Deterministic surface integral over the sphere of radius r around c for
// d in {2, 3}: trapezoid in the angle(s), Gauss in cos(theta) for d = 3.
template <class F>
double sphere_quad(int d, const Vec& c, double r, std::size_t n, F&& f,
                   std::size_t& nodes) {
  if (d == 2) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double th = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
      Vec z{c[0] + r * std::cos(th), c[1] + r * std::sin(th)};
      sum += f(z);
    }
    nodes = n;
    return sum * (2.0 * kPi * r / static_cast<double>(n));
  }
  if (d == 3) {
    std::vector<double> xs, ws;
    gauss_legendre(n, xs, ws);
    double sum = 0.0;
    std::size_t m = 2 * n;
    for (std::size_t i = 0; i < n; ++i) {
      double u = xs[i];  // cos(theta)
      double s = std::sqrt(std::max(0.0, 1.0 - u * u));
      for (std::size_t j = 0; j < m; ++j) {
        double ph = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
        Vec z{c[0] + r * s * std::cos(ph), c[1] + r * s * std::sin(ph), c[2] + r * u};
        sum += ws[i] * f(z);
      }
    }
    nodes = n * m;
    return sum * (2.0 * kPi / static_cast<double>(m)) * r * r;
  }
  throw std::invalid_argument("deterministic sphere quadrature supports d in {2,3}");
}

}  // namespace

double unit_ball_volume(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double riesz_kernel(int d, const Vec& x, const Vec& z) {
  check_dim(d, x);
  check_dim(d, z);
  double r = dist(x, z);
  if (r <= 0.0) throw std::invalid_argument("kernel evaluated at its pole");
  return std::pow(r, 1 - d) / unit_ball_volume(d);
}

double green(int d, const Vec& x, const Vec& z) {
  if (d < 2) throw std::invalid_argument("green requires d >= 2");
  check_dim(d, x);
  check_dim(d, z);
  double r = dist(x, z);
  if (r <= 0.0) throw std::invalid_argument("green evaluated at its pole");
  if (d == 2) return -std::log(r) / (2.0 * kPi);
  return std::pow(r, 2 - d) / (d * (d - 2) * unit_ball_volume(d));
}

GradientCheck gradient_identity_check(int d, const Vec& x, const Vec& z, double step) {
  check_dim(d, x);
  check_dim(d, z);
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  double r = dist(x, z);
  if (r <= 0.0) throw std::invalid_argument("gradient check at the pole");
  GradientCheck out;
  out.step_flagged = step > 0.05 * r;
  Vec zp = z, zm = z;
  double g2 = 0.0;
  for (int k = 0; k < d; ++k) {
    zp[k] = z[k] + step;
    zm[k] = z[k] - step;
    double gk = (green(d, x, zp) - green(d, x, zm)) / (2.0 * step);
    g2 += gk * gk;
    zp[k] = z[k];
    zm[k] = z[k];
  }
  double expected = riesz_kernel(d, x, z) / static_cast<double>(d);
  out.relative_error = std::abs(std::sqrt(g2) - expected) / expected;
  return out;
}

QuadratureResult sphere_energy(int d, double r, std::uint64_t mc_seed) {
  if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
  Vec p(d, 0.0);
  auto f = [&](const Vec& z) { return riesz_kernel(d, p, z); };
  if (d >= 4) return sphere_mc(d, p, r, f, mc_seed);
  return refine(
      [&](std::size_t n, std::size_t& nodes) { return sphere_quad(d, p, r, n, f, nodes); },
      16, 1e-9);
}

QuadratureResult delta_L(int d, const Vec& x, const Vec& y, double L,
                         std::uint64_t mc_seed) {
  check_dim(d, x);
  check_dim(d, y);
  double s = dist(x, y);
  if (!(s > 0.0)) throw std::invalid_argument("poles must differ");
  if (!(L > 0.5)) throw std::invalid_argument("truncation L must exceed 1/2");
  double radius = 2.0 * L * s;
  auto f = [&](const Vec& z) {
    return std::abs(riesz_kernel(d, y, z) - riesz_kernel(d, x, z));
  };
  if (d >= 4) return sphere_mc(d, x, radius, f, mc_seed);
  return refine(
      [&](std::size_t n, std::size_t& nodes) {
        return sphere_quad(d, x, radius, n, f, nodes);
      },
      32, 1e-7);
}

QuadratureResult halfspace_separator_energy(int d, const Vec& x, const Vec& y,
                                            double L) {
  check_dim(d, x);
  check_dim(d, y);
  double s = dist(x, y);
  if (!(s > 0.0)) throw std::invalid_argument("poles must differ");
  if (!(L > 0.5)) throw std::invalid_argument("truncation L must exceed 1/2");
  const double c = 0.5 * s;            // pole-to-plane distance
  const double R = 2.0 * L * s;        // truncation radius around x
  // Points of the bisector at in-plane offset t from the segment midpoint sit
  // at distance sqrt(c^2 + t^2) from both poles; the plane meets the open ball
  // B_R(x) in the disk of in-plane radius T.
  const double T = std::sqrt(std::max(0.0, R * R - c * c));
  auto kernel_sum = [&](double rho) {
    return 2.0 * std::pow(std::hypot(c, rho), 1 - d) / unit_ball_volume(d);
  };
  if (d == 2) {
    return refine(
        [&](std::size_t n, std::size_t& nodes) {
          return integrate_1d([&](double t) { return kernel_sum(t); }, -T, T, n, 16,
                              &nodes);
        },
        8, 1e-9);
  }
  if (d == 3) {
    return refine(
        [&](std::size_t n, std::size_t& nodes) {
          return integrate_1d(
              [&](double rho) { return kernel_sum(rho) * 2.0 * kPi * rho; }, 0.0, T, n,
              16, &nodes);
        },
        8, 1e-9);
  }
  throw std::invalid_argument("halfspace separator energy supports d in {2,3}");
}

BallMass riesz_ball_mass_analytic(int d, double r, const Vec& x, const Vec& y) {
  check_dim(d, x);
  check_dim(d, y);
  double s = dist(x, y);
  if (!(r > 0.0) || r >= s)
    throw std::invalid_argument("ball mass requires 0 < r < |x-y|");
  BallMass out;
  // Radial identity: the x-pole integral over B_r(x) collapses to d * r for
  // any measure with exact power growth, in particular Lebesgue.
  out.x_term = static_cast<double>(d) * r;

  // y-pole term: integrate |z-y|^{1-d}/omega_d over B_r(x) in polar form
  // around x.  rho = |z - x|, u = cos(angle between z-x and y-x).
  auto dist_to_y = [&](double rho, double u) {
    return std::sqrt(std::max(1e-300, s * s + rho * rho - 2.0 * s * rho * u));
  };
  const double omega = unit_ball_volume(d);
  if (d == 2) {
    auto eval = [&](std::size_t n, std::size_t& nodes) {
      std::size_t inner_nodes = 0;
      double v = integrate_1d(
          [&](double rho) {
            std::size_t m = 64;
            double ang = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
              double th = 2.0 * kPi * (static_cast<double>(j) + 0.5) /
                          static_cast<double>(m);
              ang += 1.0 / dist_to_y(rho, std::cos(th));
            }
            return rho * ang * (2.0 * kPi / static_cast<double>(m)) / omega;
          },
          0.0, r, n, 16, &inner_nodes);
      nodes = inner_nodes * 64;
      return v;
    };
    auto q = refine(eval, 4, 1e-9);
    out.y_term = q.value;
  } else if (d == 3) {
    auto eval = [&](std::size_t n, std::size_t& nodes) {
      std::vector<double> xs, ws;
      gauss_legendre(32, xs, ws);
      std::size_t inner_nodes = 0;
      double v = integrate_1d(
          [&](double rho) {
            double ang = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
              double dy = dist_to_y(rho, xs[i]);
              ang += ws[i] / (dy * dy);
            }
            return rho * rho * ang * 2.0 * kPi / omega;
          },
          0.0, r, n, 16, &inner_nodes);
      nodes = inner_nodes * 32;
      return v;
    };
    auto q = refine(eval, 4, 1e-9);
    out.y_term = q.value;
  } else {
    throw std::invalid_argument("analytic ball mass supports d in {2,3}");
  }
  out.total = out.x_term + out.y_term;
  return out;
}

}  // namespace picheck::oracle
