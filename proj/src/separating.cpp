#include "picheck/separating.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace picheck {

namespace {

constexpr double kTieScale = 1e-9;

double tie_tol(double r) { return kTieScale * (1.0 + std::abs(r)); }

// Single-source shortest distances under in-region edge lengths.  Zero-length
// edges are common here (both endpoints outside the region), so ties are
// resolved by the heap's (distance, vertex) order; results are exact either
// way.
std::vector<double> region_dijkstra(const PointCloudSpace& space,
                                    const RegionSet& region, VertexId source) {
  const std::size_t n = space.vertex_count();
  std::vector<double> dist(n, kInf);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const Neighbor& nb : space.neighbors(v)) {
      const Edge& e = space.edges()[nb.edge];
      const double nd = d + region_edge_length(space, region, e);
      if (nd < dist[nb.to]) {
        dist[nb.to] = nd;
        heap.emplace(nd, nb.to);
      }
    }
  }
  return dist;
}

double guarded_div(double num, double den) {
  if (den > 0.0) return num / den;
  return num == 0.0 ? 0.0 : kInf;
}

// Sorted finite distances with prefix weights; the query core for annulus and
// neighborhood masses.
struct DistIndex {
  std::vector<double> d;
  std::vector<double> prefix;  // prefix[k] = weight of the k nearest entries

  DistIndex(std::span<const double> dist, std::span<const double> weight) {
    std::vector<std::pair<double, double>> rows;
    rows.reserve(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (std::isfinite(dist[i])) rows.emplace_back(dist[i], weight[i]);
    }
    std::sort(rows.begin(), rows.end());
    d.reserve(rows.size());
    prefix.assign(rows.size() + 1, 0.0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      d.push_back(rows[k].first);
      prefix[k + 1] = prefix[k] + rows[k].second;
    }
  }

  double mass_below(double t) const {  // {d < t}
    const auto it = std::lower_bound(d.begin(), d.end(), t);
    return prefix[static_cast<std::size_t>(it - d.begin())];
  }
  double mass_upto(double t) const {  // {d <= t}
    const auto it = std::upper_bound(d.begin(), d.end(), t);
    return prefix[static_cast<std::size_t>(it - d.begin())];
  }
};

// mass(B_r(S) \ S) / r with the closed annulus {0 < d <= r} so the schedule
// may land exactly on grid shells.
double annulus_over_r(const DistIndex& idx, double r) {
  return (idx.mass_upto(r + tie_tol(r)) - idx.mass_upto(0.0)) / r;
}

// Two-sided neighborhood mass over 2 rho; distance ties at rho carry half
// weight, which centers the estimator on thin sets.
double neighborhood_over_2r(const DistIndex& idx, double rho) {
  const double tol = tie_tol(rho);
  const double lt = idx.mass_below(rho - tol);
  const double le = idx.mass_upto(rho + tol);
  return (lt + 0.5 * (le - lt)) / (2.0 * rho);
}

// Bi-criteria label-correcting search: minimize in-region length subject to
// total length <= length_bound.  Pareto frontier per vertex kept as a map
// length -> cost with strictly decreasing cost; the queue pops by cost so the
// first settled label at the target is optimal.
double bicriteria_min_cost(const PointCloudSpace& space, const RegionSet& region,
                           VertexId x, VertexId y, double length_bound,
                           std::size_t label_budget) {
  struct Label {
    double cost;
    double len;
    VertexId v;
    bool operator>(const Label& o) const {
      if (cost != o.cost) return cost > o.cost;
      if (len != o.len) return len > o.len;
      return v > o.v;
    }
  };
  const double len_cap = length_bound + tie_tol(length_bound);
  std::vector<std::map<double, double>> front(space.vertex_count());
  std::priority_queue<Label, std::vector<Label>, std::greater<>> heap;
  std::size_t created = 0;

  auto try_insert = [&](VertexId v, double len, double cost) {
    auto& f = front[v];
    auto it = f.upper_bound(len);
    if (it != f.begin()) {
      auto prev = std::prev(it);
      if (prev->second <= cost) return false;  // dominated by shorter-or-equal
    }
    while (it != f.end() && it->second >= cost) it = f.erase(it);
    f.emplace(len, cost);
    if (++created > label_budget)
      throw std::runtime_error("label budget exceeded in bounded-path search");
    heap.push({cost, len, v});
    return true;
  };

  try_insert(x, 0.0, 0.0);
  while (!heap.empty()) {
    const Label cur = heap.top();
    heap.pop();
    const auto it = front[cur.v].find(cur.len);
    if (it == front[cur.v].end() || it->second != cur.cost) continue;  // stale
    if (cur.v == y) return cur.cost;
    for (const Neighbor& nb : space.neighbors(cur.v)) {
      const Edge& e = space.edges()[nb.edge];
      const double nl = cur.len + e.length;
      if (nl > len_cap) continue;
      try_insert(nb.to, nl, cur.cost + region_edge_length(space, region, e));
    }
  }
  return kInf;
}

// Exact nearest-member distances for ambient clouds via uniform cell buckets.
// Ring-by-ring expansion stops once no unexplored cell can beat the incumbent
// or the rmax cap.
std::vector<double> ambient_distance_to_set(const PointCloudSpace& space,
                                            const std::vector<VertexId>& members,
                                            double rmax) {
  const std::size_t n = space.vertex_count();
  const int dim = space.dim();
  std::vector<double> out(n, kInf);
  if (members.empty()) return out;

  const double cell = std::max(space.resolution() * 4.0, 1e-12);
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  auto key_of = [&](VertexId v) {
    std::span<const double> c = space.coords(v);
    std::int64_t key = 0;
    for (int a = 0; a < dim; ++a) {
      const auto cidx =
          static_cast<std::int64_t>(std::floor((c[a] - lo[a]) / cell));
      key = key * 2'000'003 + cidx;
    }
    return key;
  };
  for (int a = 0; a < dim; ++a) {
    double m = kInf;
    for (VertexId v : members) m = std::min(m, space.coords(v)[a]);
    lo[a] = m;
  }
  std::unordered_map<std::int64_t, std::vector<VertexId>> buckets;
  buckets.reserve(members.size() * 2);
  for (VertexId v : members) {
    buckets[key_of(v)].push_back(v);
    out[v] = 0.0;
  }

  auto cell_index = [&](VertexId v, int a) {
    return static_cast<std::int64_t>(
        std::floor((space.coords(v)[a] - lo[a]) / cell));
  };

  for (VertexId v = 0; v < n; ++v) {
    if (out[v] == 0.0) continue;
    std::array<std::int64_t, 3> base{0, 0, 0};
    for (int a = 0; a < dim; ++a) base[a] = cell_index(v, a);
    double best = kInf;
    for (std::int64_t ring = 0;; ++ring) {
      const double ring_floor = (static_cast<double>(ring) - 1.0) * cell;
      if (ring_floor > std::min(best, rmax)) break;
      // Enumerate cells at Chebyshev distance exactly `ring`.
      const std::int64_t zlo = dim > 2 ? -ring : 0;
      const std::int64_t zhi = dim > 2 ? ring : 0;
      const std::int64_t ylo = dim > 1 ? -ring : 0;
      const std::int64_t yhi = dim > 1 ? ring : 0;
      for (std::int64_t dz = zlo; dz <= zhi; ++dz) {
        for (std::int64_t dy = ylo; dy <= yhi; ++dy) {
          for (std::int64_t dx = -ring; dx <= ring; ++dx) {
            const std::int64_t cheb =
                std::max({std::abs(dx), std::abs(dy), std::abs(dz)});
            if (cheb != ring) continue;
            std::int64_t key = 0;
            const std::array<std::int64_t, 3> off{dx, dy, dz};
            for (int a = 0; a < dim; ++a) key = key * 2'000'003 + base[a] + off[a];
            const auto hit = buckets.find(key);
            if (hit == buckets.end()) continue;
            for (VertexId w : hit->second)
              best = std::min(best, space.coord_distance(v, w));
          }
        }
      }
    }
    if (best <= rmax) out[v] = best;
  }
  return out;
}

std::vector<double> graph_distance_to_set(const PointCloudSpace& space,
                                          const std::vector<VertexId>& members,
                                          double rmax) {
  const std::size_t n = space.vertex_count();
  std::vector<double> dist(n, kInf);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (VertexId v : members) {
    dist[v] = 0.0;
    heap.emplace(0.0, v);
  }
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const Neighbor& nb : space.neighbors(v)) {
      const double nd = d + nb.length;
      if (nd < dist[nb.to] && nd <= rmax) {
        dist[nb.to] = nd;
        heap.emplace(nd, nb.to);
      }
    }
  }
  return dist;
}

std::string format_level(double t) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", t);
  return buf;
}

}  // namespace

std::size_t RegionSet::count() const {
  std::size_t c = 0;
  for (std::uint8_t b : mask) c += b != 0;
  return c;
}

std::vector<VertexId> RegionSet::vertices() const {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < mask.size(); ++v)
    if (mask[v]) out.push_back(static_cast<VertexId>(v));
  return out;
}

RegionSet RegionSet::from_vertices(std::size_t n, std::span<const VertexId> vs,
                                   std::string label) {
  RegionSet r;
  r.mask.assign(n, 0);
  for (VertexId v : vs) {
    if (v >= n) throw std::out_of_range("region vertex id out of range");
    r.mask[v] = 1;
  }
  r.label = std::move(label);
  return r;
}

RegionSet RegionSet::full(std::size_t n, std::string label) {
  RegionSet r;
  r.mask.assign(n, 1);
  r.label = std::move(label);
  return r;
}

double region_edge_length(const PointCloudSpace&, const RegionSet& region,
                          const Edge& e) {
  const int inside = (region.mask[e.u] ? 1 : 0) + (region.mask[e.v] ? 1 : 0);
  return e.length * inside * 0.5;
}

PositionField position_function(const PointCloudSpace& space, VertexId x,
                                VertexId y, const RegionSet& region) {
  PositionField f;
  f.x = x;
  f.y = y;
  f.region_label = region.label;
  f.value = region_dijkstra(space, region, x);
  f.width = f.value[y];
  if (!std::isfinite(f.width))
    throw std::runtime_error("poles are graph-disconnected");
  return f;
}

double width(const PointCloudSpace& space, VertexId x, VertexId y,
             const RegionSet& region) {
  // Same relaxation as position_function, minus its finite-width guard.
  return region_dijkstra(space, region, x)[y];
}

double width_quasigeodesic(const PointCloudSpace& space, VertexId x, VertexId y,
                           const RegionSet& region, double L,
                           std::size_t label_budget) {
  if (L < 1.0) throw std::invalid_argument("length-bound factor must be >= 1");
  const double bound = L * space.distance(x, y);
  return bicriteria_min_cost(space, region, x, y, bound, label_budget);
}

SeparatingRatio separating_ratio(const PointCloudSpace& space,
                                 const PoleContext& ctx, const RegionSet& region) {
  SeparatingRatio out;
  out.mass = ctx.measure.mass(region.mask);
  out.width = width(space, ctx.x, ctx.y, region);
  out.value = out.width > 0.0 ? out.mass / out.width : kInf;
  return out;
}

ScanResult set_connectedness_scan(const PointCloudSpace& space,
                                  const PoleContext& ctx,
                                  std::span<const RegionSet> candidates) {
  if (candidates.empty())
    throw std::invalid_argument("empty candidate list for ratio scan");
  ScanResult res;
  res.values.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double v = separating_ratio(space, ctx, candidates[i]).value;
    res.values.push_back(v);
    if (v < res.best) {
      res.best = v;
      res.argmin = i;
    }
  }
  return res;
}

LipBoundCheck lip_bound_check(const PointCloudSpace& space, const RegionSet& region,
                              const PositionField& pos, double quasiconvexity) {
  LipBoundCheck out;
  out.bound = std::max(quasiconvexity, 1.0);
  const std::size_t n = space.vertex_count();
  for (VertexId v = 0; v < n; ++v) {
    if (!std::isfinite(pos.value[v])) continue;
    double lip = 0.0;
    bool neighbor_in_region = region.contains(v);
    for (const Neighbor& nb : space.neighbors(v)) {
      if (region.contains(nb.to)) neighbor_in_region = true;
      if (!std::isfinite(pos.value[nb.to]) || nb.length <= 0.0) continue;
      lip = std::max(lip, std::abs(pos.value[nb.to] - pos.value[v]) / nb.length);
    }
    out.max_lip = std::max(out.max_lip, lip);
    if (!neighbor_in_region) out.max_lip_outside = std::max(out.max_lip_outside, lip);
  }
  out.within_bound = out.max_lip <= out.bound + 1e-9 && out.max_lip_outside <= 1e-9;
  return out;
}

SeparatingSet level_set_separator(const PointCloudSpace& space,
                                  const PoleContext& ctx,
                                  const PositionField& pos, double t) {
  if (!(t > 0.0) || !(t < pos.width))
    throw std::invalid_argument("level must lie strictly between 0 and the width");
  const std::size_t n = space.vertex_count();
  SeparatingSet sep;
  sep.level = t;
  sep.omega.mask.assign(n, 0);
  sep.omega.label = "pos(" + pos.region_label + ")<=" + format_level(t);
  double dx_out = kInf;  // d(x, Omega^c)
  double dy_in = kInf;   // d(y, Omega)
  for (VertexId v = 0; v < n; ++v) {
    if (pos.value[v] <= t) {
      sep.omega.mask[v] = 1;
      dy_in = std::min(dy_in, ctx.from_y[v]);
    } else {
      dx_out = std::min(dx_out, ctx.from_x[v]);
    }
  }
  sep.margin = std::min(dx_out, dy_in);
  return sep;
}

SeparatingSet make_separating_set(const PoleContext& ctx, RegionSet omega) {
  SeparatingSet sep;
  sep.omega = std::move(omega);
  double dx_out = kInf;
  double dy_in = kInf;
  for (std::size_t v = 0; v < sep.omega.mask.size(); ++v) {
    if (sep.omega.mask[v]) {
      dy_in = std::min(dy_in, ctx.from_y[static_cast<VertexId>(v)]);
    } else {
      dx_out = std::min(dx_out, ctx.from_x[static_cast<VertexId>(v)]);
    }
  }
  sep.margin = std::min(dx_out, dy_in);
  return sep;
}

std::vector<double> distance_to_set(const PointCloudSpace& space,
                                    const RegionSet& region, double rmax) {
  const std::vector<VertexId> members = region.vertices();
  if (members.empty())
    return std::vector<double>(space.vertex_count(), kInf);
  if (space.metric_kind() == MetricKind::GraphPath)
    return graph_distance_to_set(space, members, rmax);
  return ambient_distance_to_set(space, members, rmax);
}

ContentProfile minkowski_content(const PointCloudSpace& space, const RegionSet& omega,
                                 std::span<const double> vertex_weight,
                                 std::span<const double> radii) {
  if (radii.empty()) throw std::invalid_argument("empty radius schedule");
  const double least = 2.0 * space.resolution();
  double rmax = 0.0;
  for (double r : radii) {
    if (r < least * (1.0 - 1e-12))
      throw std::invalid_argument("content radius below twice the resolution");
    rmax = std::max(rmax, r);
  }
  ContentProfile prof;
  prof.radii.assign(radii.begin(), radii.end());

  const std::size_t members = omega.count();
  if (members == 0 || members == space.vertex_count()) {
    prof.values.assign(radii.size(), 0.0);
    prof.saturated.assign(radii.size(), 1);
    prof.estimate = 0.0;
    prof.collar_estimate = 0.0;
    prof.degenerate = true;
    return prof;
  }

  const std::vector<double> dist =
      distance_to_set(space, omega, rmax + tie_tol(rmax) + space.resolution());
  const DistIndex idx(dist, vertex_weight);

  // Sorted distances of the complement alone; unreachable vertices stay out,
  // so an annulus that owns every *finite* outside distance counts as
  // saturated only when it owns the whole complement.
  std::vector<double> outside;
  outside.reserve(dist.size() - members);
  for (VertexId v = 0; v < dist.size(); ++v) {
    if (!omega.contains(v) && std::isfinite(dist[v])) outside.push_back(dist[v]);
  }
  std::sort(outside.begin(), outside.end());
  const std::size_t complement = space.vertex_count() - members;

  prof.estimate = kInf;
  prof.collar_estimate = kInf;
  for (double r : radii) {
    const double v = annulus_over_r(idx, r);
    const auto swallowed = static_cast<std::size_t>(
        std::upper_bound(outside.begin(), outside.end(), r + tie_tol(r)) -
        outside.begin());
    const bool sat = swallowed == complement;
    prof.values.push_back(v);
    prof.saturated.push_back(sat ? 1 : 0);
    prof.estimate = std::min(prof.estimate, v);
    if (!sat) prof.collar_estimate = std::min(prof.collar_estimate, v);
  }
  return prof;
}

SandwichCheck sandwich_check(const PointCloudSpace& space, const PoleContext& ctx,
                             double quasiconvexity,
                             std::span<const RegionSet> region_candidates,
                             std::span<const SeparatingSet> separator_candidates,
                             double tolerance) {
  if (region_candidates.empty() || separator_candidates.empty())
    throw std::invalid_argument("sandwich check needs both candidate lists");
  SandwichCheck out;
  out.tolerance = tolerance;

  const ScanResult scan = set_connectedness_scan(space, ctx, region_candidates);
  out.mid = scan.best;
  out.region_argmin = scan.argmin;

  const std::vector<double> schedule = default_radius_schedule(
      space.resolution(), ctx.pole_distance / 4.0);
  const double min_margin = 2.0 * space.resolution() * (1.0 - 1e-12);
  out.rhs = kInf;
  for (std::size_t i = 0; i < separator_candidates.size(); ++i) {
    const SeparatingSet& sep = separator_candidates[i];
    if (sep.margin < min_margin) continue;
    const ContentProfile prof =
        minkowski_content(space, sep.omega, ctx.measure.weight, schedule);
    if (prof.degenerate || !std::isfinite(prof.collar_estimate)) continue;
    ++out.separators_valid;
    if (prof.collar_estimate < out.rhs) {
      out.rhs = prof.collar_estimate;
      out.separator_argmin = i;
    }
  }
  out.lhs = out.rhs / std::max(quasiconvexity, 1.0);
  out.pass = out.separators_valid > 0 && out.lhs <= out.mid * (1.0 + tolerance) &&
             out.mid <= out.rhs * (1.0 + tolerance);
  return out;
}

CoareaCheck coarea_check(const PointCloudSpace& space, const PoleContext& ctx,
                         const PositionField& pos, double tolerance) {
  CoareaCheck out;
  out.tolerance = tolerance;
  const std::size_t n = space.vertex_count();

  for (VertexId v = 0; v < n; ++v) {
    if (!std::isfinite(pos.value[v])) continue;
    double lip = 0.0;
    for (const Neighbor& nb : space.neighbors(v)) {
      if (!std::isfinite(pos.value[nb.to]) || nb.length <= 0.0) continue;
      lip = std::max(lip, std::abs(pos.value[nb.to] - pos.value[v]) / nb.length);
    }
    out.slope_integral += lip * ctx.measure[v];
  }

  if (pos.width > 0.0) {
    const std::vector<double> schedule = default_radius_schedule(
        space.resolution(), ctx.pole_distance / 4.0);
    const auto steps = static_cast<std::size_t>(
        std::ceil(pos.width / space.resolution()));
    const double dt = pos.width / static_cast<double>(steps);
    RegionSet sub;
    sub.mask.assign(n, 0);
    for (std::size_t k = 0; k < steps; ++k) {
      const double t = (static_cast<double>(k) + 0.5) * dt;
      for (VertexId v = 0; v < n; ++v) sub.mask[v] = pos.value[v] <= t;
      out.level_integral +=
          dt * minkowski_content(space, sub, ctx.measure.weight, schedule).estimate;
    }
  }

  out.margin = out.slope_integral - out.level_integral;
  out.pass = out.margin >= -tolerance * out.slope_integral - 1e-15;
  return out;
}

ObstacleCheck obstacle_avoidance_check(const PointCloudSpace& space, VertexId x,
                                       VertexId y, const RegionSet& obstacle,
                                       double C, double L,
                                       std::size_t label_budget) {
  if (C <= 0.0) throw std::invalid_argument("scale factor must be positive");
  ObstacleCheck out;
  const double d = space.distance(x, y);
  out.in_obstacle_length =
      bicriteria_min_cost(space, obstacle, x, y, L * d, label_budget);
  out.feasible = std::isfinite(out.in_obstacle_length);

  std::vector<double> chi(space.vertex_count(), 0.0);
  for (std::size_t v = 0; v < chi.size(); ++v)
    if (obstacle.mask[v]) chi[v] = 1.0;
  const double scale = C * d;
  out.bound = scale * (maximal_function(space, chi, scale, x) +
                       maximal_function(space, chi, scale, y));
  out.ratio = out.feasible ? guarded_div(out.in_obstacle_length, out.bound) : kInf;
  return out;
}

IsoperimetricCheck relative_isoperimetric_check(const PointCloudSpace& space,
                                                const RegionSet& obstacle,
                                                VertexId center, double r,
                                                double lambda) {
  if (!(r > 0.0) || !(lambda >= 1.0))
    throw std::invalid_argument("need r > 0 and lambda >= 1");
  IsoperimetricCheck out;
  const DistanceField from_center(space, center);

  double in_mass = 0.0, out_mass = 0.0;
  for (VertexId v : from_center.ball(r)) {
    (obstacle.contains(v) ? in_mass : out_mass) += space.weight(v);
  }
  const double ball_mass = in_mass + out_mass;
  out.lhs = guarded_div(std::min(in_mass, out_mass), ball_mass);

  // Boundary proxy: obstacle vertices with a neighbor outside, inside the
  // enlarged open ball.
  const double lr = lambda * r;
  std::vector<VertexId> proxy;
  for (VertexId v = 0; v < space.vertex_count(); ++v) {
    if (!obstacle.contains(v) || from_center[v] >= lr) continue;
    for (const Neighbor& nb : space.neighbors(v)) {
      if (!obstacle.contains(nb.to)) {
        proxy.push_back(v);
        break;
      }
    }
  }

  const double enlarged_mass = from_center.ball_mass(lr);
  if (!proxy.empty()) {
    const std::vector<double> schedule = default_radius_schedule(
        space.resolution(), std::max(2.0 * space.resolution(), lr / 4.0));
    const RegionSet proxy_set =
        RegionSet::from_vertices(space.vertex_count(), proxy, "boundary-proxy");
    const double rho_max = schedule.back();
    const std::vector<double> dist = distance_to_set(
        space, proxy_set, rho_max + tie_tol(rho_max) + space.resolution());
    const DistIndex idx(dist, space.weights());
    out.surface = kInf;
    for (double rho : schedule)
      out.surface = std::min(out.surface, neighborhood_over_2r(idx, rho));
  }
  out.rhs_term = guarded_div(out.surface, enlarged_mass);
  out.ratio = guarded_div(out.lhs, r * out.rhs_term);

  double rim = kInf;
  for (VertexId b : boundary_vertices(space)) rim = std::min(rim, from_center[b]);
  out.flagged = rim <= lr;
  return out;
}

}  // namespace picheck
