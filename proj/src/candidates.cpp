#include "picheck/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

namespace picheck {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

RegionSet ball_region(const PointCloudSpace& space, VertexId center, double r,
                      std::string label) {
  RegionSet reg;
  reg.mask.assign(space.vertex_count(), 0);
  for (VertexId v : ball(space, center, r)) reg.mask[v] = 1;
  reg.label = std::move(label);
  return reg;
}

}  // namespace

CandidateSuite standard_candidates(const PointCloudSpace& space,
                                   const PoleContext& ctx,
                                   const CandidateConfig& cfg) {
  CandidateSuite suite;
  const std::size_t n = space.vertex_count();
  const double h = space.resolution();
  const double d = ctx.pole_distance;
  const std::vector<double> radii = default_radius_schedule(h, d / 2.0);

  auto add_region = [&](RegionSet reg) {
    const std::size_t c = reg.count();
    if (c == 0) return;  // empty stress shapes carry no information
    suite.regions.push_back(std::move(reg));
  };

  const RegionSet full_region = RegionSet::full(n, "full");
  add_region(full_region);

  // Metric balls around a coarse net (poles first by construction).
  std::vector<VertexId> centers = delta_net(space, d / 2.0, ctx.x, ctx.y);
  if (centers.size() > cfg.ball_centers) centers.resize(cfg.ball_centers);
  for (VertexId c : centers) {
    for (double r : radii)
      add_region(ball_region(space, c, r, fmt("ball#%.0f@%.4g",
                                              static_cast<double>(c), r)));
  }

  // Coordinate halfspaces and thin slabs over the support bounding box.
  for (int a = 0; a < space.dim(); ++a) {
    double lo = kInf, hi = -kInf;
    for (VertexId v = 0; v < n; ++v) {
      if (ctx.measure[v] <= 0.0 && v != ctx.x && v != ctx.y) continue;
      lo = std::min(lo, space.coords(v)[a]);
      hi = std::max(hi, space.coords(v)[a]);
    }
    if (!(hi - lo > 4.0 * h)) continue;
    for (std::size_t k = 0; k < cfg.halfspace_cuts; ++k) {
      const double c =
          lo + (static_cast<double>(k) + 0.5) / cfg.halfspace_cuts * (hi - lo);
      RegionSet half;
      half.mask.assign(n, 0);
      for (VertexId v = 0; v < n; ++v) half.mask[v] = space.coords(v)[a] <= c;
      half.label = fmt("halfspace z%.0f<=%.4g", a, c);
      add_region(std::move(half));
      for (double w : {2.0 * h, 4.0 * h}) {
        RegionSet slab;
        slab.mask.assign(n, 0);
        for (VertexId v = 0; v < n; ++v) {
          const double z = space.coords(v)[a];
          slab.mask[v] = z > c && z <= c + w;
        }
        slab.label = fmt("slab z%.0f(%.4g+%.4g]", a, c, w);
        add_region(std::move(slab));
      }
    }
  }

  // Thin bands of position fields: metric shells around x (A = full) and
  // crossing bands of the distance bisector.
  RegionSet bisector;
  bisector.mask.assign(n, 0);
  for (VertexId v = 0; v < n; ++v)
    bisector.mask[v] = ctx.from_x[v] <= ctx.from_y[v];
  bisector.label = "bisector";
  {
    const RegionSet* bases[2] = {&full_region, &bisector};
    const char* base_names[2] = {"full", "bisector"};
    for (int b = 0; b < 2; ++b) {
      const PositionField pos = position_function(space, ctx.x, ctx.y, *bases[b]);
      const double wband = 2.0 * h;
      if (!(pos.width > wband)) continue;
      for (std::size_t j = 0; j < cfg.band_levels; ++j) {
        const double t = (static_cast<double>(j) + 0.5) / cfg.band_levels *
                         (pos.width - wband);
        RegionSet band;
        band.mask.assign(n, 0);
        for (VertexId v = 0; v < n; ++v)
          band.mask[v] = pos.value[v] > t && pos.value[v] <= t + wband;
        band.label = std::string("band pos(") + base_names[b] + ")" +
                     fmt("(%.4g+%.4g]", t, wband);
        add_region(std::move(band));
      }
    }
  }
  add_region(bisector);

  // Seeded random blob unions; substream per union so the suite is stable
  // under count changes.
  std::vector<VertexId> support;
  for (VertexId v = 0; v < n; ++v)
    if (ctx.measure[v] > 0.0 || v == ctx.x || v == ctx.y) support.push_back(v);
  for (std::size_t k = 0; k < cfg.random_unions; ++k) {
    std::mt19937_64 rng(cfg.seed + 0x9E3779B97F4A7C15ull * (k + 1));
    std::uniform_int_distribution<std::size_t> pick(0, support.size() - 1);
    std::uniform_real_distribution<double> rad(2.0 * h, std::max(4.0 * h, d / 3.0));
    std::uniform_int_distribution<std::size_t> nblobs(1, cfg.blobs_per_union);
    RegionSet blob;
    blob.mask.assign(n, 0);
    const std::size_t count = nblobs(rng);
    for (std::size_t b = 0; b < count; ++b) {
      const VertexId c = support[pick(rng)];
      for (VertexId v : ball(space, c, rad(rng))) blob.mask[v] = 1;
    }
    blob.label = fmt("blob#%.0f", static_cast<double>(k));
    add_region(std::move(blob));
  }

  // Separators: every region's sublevel sets, pole balls, the bisector.
  for (const RegionSet& reg : suite.regions) {
    const PositionField pos = position_function(space, ctx.x, ctx.y, reg);
    if (!(pos.width > 0.0)) continue;
    for (std::size_t j = 0; j < cfg.separator_levels; ++j) {
      const double t = (static_cast<double>(j) + 0.5) / cfg.separator_levels *
                       pos.width;
      if (!(t > 0.0 && t < pos.width)) continue;
      suite.separators.push_back(level_set_separator(space, ctx, pos, t));
    }
  }
  for (double r : radii) {
    if (r >= d) break;
    SeparatingSet sep = make_separating_set(
        ctx, ball_region(space, ctx.x, r, fmt("poleball@%.4g", r)));
    suite.separators.push_back(std::move(sep));
  }
  suite.separators.push_back(make_separating_set(ctx, bisector));

  return suite;
}

}  // namespace picheck
