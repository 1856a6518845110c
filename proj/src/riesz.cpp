#include "picheck/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace picheck {

double RieszMeasure::mass(std::span<const VertexId> vertices) const {
  double s = 0.0;
  for (VertexId v : vertices) s += weight[v];
  return s;
}

double RieszMeasure::mass(const std::vector<std::uint8_t>& mask) const {
  if (mask.size() != weight.size())
    throw std::invalid_argument("mask size mismatch");
  double s = 0.0;
  for (std::size_t v = 0; v < mask.size(); ++v)
    if (mask[v]) s += weight[v];
  return s;
}

namespace {

// One pole's kernel factor at distance d from the pole, given the pole's
// distance field: d / m(B_d(pole)), zero at the pole itself.
double pole_factor(const DistanceField& field, double d) {
  if (d <= 0.0) return 0.0;
  double m = field.ball_mass(d);
  // The open ball always contains the pole, so m > 0 whenever d > 0.
  return d / m;
}

}  // namespace

double riesz_potential(const PointCloudSpace& space, VertexId x, VertexId y,
                       VertexId z) {
  if (x == y) throw std::invalid_argument("poles must differ");
  if (z == x || z == y) return 0.0;
  DistanceField fx(space, x), fy(space, y);
  return pole_factor(fx, fx[z]) + pole_factor(fy, fy[z]);
}

RieszMeasure riesz_measure(const PointCloudSpace& space, VertexId x, VertexId y,
                           double L) {
  PoleContext ctx = make_pole_context(space, x, y, L);
  return std::move(ctx.measure);
}

PoleContext make_pole_context(const PointCloudSpace& space, VertexId x, VertexId y,
                              double L) {
  if (x == y) throw std::invalid_argument("poles must differ");
  if (!(L >= 0.5)) throw std::invalid_argument("truncation L must be >= 1/2");
  DistanceField fx(space, x);
  DistanceField fy(space, y);
  double dxy = fx[y];
  if (!std::isfinite(dxy) || dxy <= 0.0)
    throw std::invalid_argument("poles are disconnected");

  RieszMeasure mu;
  mu.x = x;
  mu.y = y;
  mu.truncation = L;
  mu.pole_distance = dxy;
  mu.support_radius = 2.0 * L * dxy;
  mu.weight.assign(space.vertex_count(), 0.0);
  for (std::size_t v = 0; v < space.vertex_count(); ++v) {
    if (v == x || v == y) continue;        // kernel vanishes at the poles
    double dx = fx[v];
    if (!(dx < mu.support_radius)) continue;  // open truncation ball around x
    double val = pole_factor(fx, dx) + pole_factor(fy, fy[v]);
    double w = val * space.weight(static_cast<VertexId>(v));
    mu.weight[v] = w;
    mu.total_mass += w;
  }

  return PoleContext{x, y, L, dxy, std::move(fx), std::move(fy), std::move(mu)};
}

double maximal_function(const PointCloudSpace& space, std::span<const double> f,
                        double s, VertexId z) {
  if (f.size() != space.vertex_count())
    throw std::invalid_argument("field size mismatch");
  if (!(s > 0.0)) throw std::invalid_argument("scale must be positive");
  for (double v : f)
    if (v < 0.0) throw std::invalid_argument("maximal function needs f >= 0");

  DistanceField fz(space, z);
  auto dists = fz.sorted_distances();
  auto order = fz.order();

  // Sweep prefixes of the sorted distances: each distinct distance value
  // d_i < s realizes the open ball of any radius in (d_i, next), whose content
  // is exactly the prefix through the tie-group of d_i.
  double best = 0.0;
  double mass = 0.0, integral = 0.0;
  std::size_t k = 0;
  const std::size_t n = dists.size();
  while (k < n) {
    double d = dists[k];
    if (!(d < s)) break;
    if (!std::isfinite(d)) break;
    // absorb the whole tie group
    while (k < n && dists[k] == d) {
      VertexId v = order[k];
      mass += space.weight(v);
      integral += f[v] * space.weight(v);
      ++k;
    }
    best = std::max(best, integral / mass);
  }
  return best;
}

namespace {

// ratio with the degenerate-value conventions shared by the checks
double guarded_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  if (lhs == 0.0) return 0.0;
  return kInf;
}

}  // namespace

RatioCheck ptpi_check(const PointCloudSpace& space, std::span<const double> u,
                      VertexId x, VertexId y, double L) {
  if (u.size() != space.vertex_count())
    throw std::invalid_argument("field size mismatch");
  RieszMeasure mu = riesz_measure(space, x, y, L);
  std::vector<double> lip = local_lip(space, u);
  double rhs = 0.0;
  for (std::size_t v = 0; v < lip.size(); ++v) rhs += lip[v] * mu.weight[v];
  RatioCheck out;
  out.lhs = std::abs(u[x] - u[y]);
  out.rhs = rhs;
  out.ratio = guarded_ratio(out.lhs, out.rhs);
  return out;
}

RatioCheck pi_check(const PointCloudSpace& space, std::span<const double> u,
                    VertexId center, double r, double lambda) {
  if (u.size() != space.vertex_count())
    throw std::invalid_argument("field size mismatch");
  if (!(r > 0.0) || !(lambda >= 1.0))
    throw std::invalid_argument("need r > 0 and lambda >= 1");

  DistanceField fc(space, center);
  auto inner = fc.ball(r);
  auto outer = fc.ball(lambda * r);
  double m_in = measure(space, inner);

  double mean = 0.0;
  for (VertexId v : inner) mean += u[v] * space.weight(v);
  mean /= m_in;
  double osc = 0.0;
  for (VertexId v : inner) osc += std::abs(u[v] - mean) * space.weight(v);
  osc /= m_in;

  std::vector<double> lip = local_lip(space, u);
  double m_out = measure(space, outer);
  double slope = 0.0;
  for (VertexId v : outer) slope += lip[v] * space.weight(v);
  slope /= m_out;

  RatioCheck out;
  out.lhs = osc;
  out.rhs = r * slope;
  out.ratio = guarded_ratio(out.lhs, out.rhs);

  // Rim proximity: flagged when the enlarged ball can reach the cloud rim.
  auto rim = boundary_vertices(space);
  double rim_dist = kInf;
  for (VertexId v : rim) rim_dist = std::min(rim_dist, fc[v]);
  out.flagged = rim_dist <= lambda * r;
  return out;
}

}  // namespace picheck
