#include "picheck/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace picheck {

namespace {

std::size_t axis_count(double extent, double h) {
  if (!(extent > 0.0) || !(h > 0.0))
    throw std::invalid_argument("grid extent and h must be positive");
  return static_cast<std::size_t>(std::floor(extent / h + 1e-9)) + 1;
}

}  // namespace

PointCloudSpace euclidean_grid(const GridSpec& spec) {
  if (spec.dim < 1 || spec.dim > 3)
    throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  std::array<std::size_t, 3> n{1, 1, 1};
  std::size_t total = 1;
  for (int a = 0; a < spec.dim; ++a) {
    n[a] = axis_count(spec.extent[a], spec.h);
    total *= n[a];
  }
  if (total > spec.vertex_budget)
    throw std::invalid_argument("grid exceeds the vertex budget");

  const double w = std::pow(spec.h, spec.dim);
  std::vector<double> coords;
  coords.reserve(total * spec.dim);
  std::vector<double> weights(total, w);

  auto index = [&](std::size_t ix, std::size_t iy, std::size_t iz) {
    return (iz * n[1] + iy) * n[0] + ix;
  };

  for (std::size_t iz = 0; iz < n[2]; ++iz)
    for (std::size_t iy = 0; iy < n[1]; ++iy)
      for (std::size_t ix = 0; ix < n[0]; ++ix) {
        coords.push_back(ix * spec.h);
        if (spec.dim >= 2) coords.push_back(iy * spec.h);
        if (spec.dim >= 3) coords.push_back(iz * spec.h);
      }

  std::vector<Edge> edges;
  for (std::size_t iz = 0; iz < n[2]; ++iz)
    for (std::size_t iy = 0; iy < n[1]; ++iy)
      for (std::size_t ix = 0; ix < n[0]; ++ix) {
        auto u = static_cast<VertexId>(index(ix, iy, iz));
        if (ix + 1 < n[0])
          edges.push_back({u, static_cast<VertexId>(index(ix + 1, iy, iz)), spec.h});
        if (spec.dim >= 2 && iy + 1 < n[1])
          edges.push_back({u, static_cast<VertexId>(index(ix, iy + 1, iz)), spec.h});
        if (spec.dim >= 3 && iz + 1 < n[2])
          edges.push_back({u, static_cast<VertexId>(index(ix, iy, iz + 1)), spec.h});
        if (spec.diagonals && spec.dim == 2) {
          double dl = spec.h * std::sqrt(2.0);
          if (ix + 1 < n[0] && iy + 1 < n[1])
            edges.push_back({u, static_cast<VertexId>(index(ix + 1, iy + 1, iz)), dl});
          if (ix + 1 < n[0] && iy > 0)
            edges.push_back({u, static_cast<VertexId>(index(ix + 1, iy - 1, iz)), dl});
        }
      }

  return PointCloudSpace(spec.metric, spec.dim, spec.h, std::move(coords),
                         std::move(weights), std::move(edges));
}

VertexId nearest_vertex(const PointCloudSpace& space, std::span<const double> point) {
  if (point.size() != static_cast<std::size_t>(space.dim()))
    throw std::invalid_argument("point dimension mismatch");
  double best = kInf;
  VertexId arg = 0;
  for (std::size_t v = 0; v < space.vertex_count(); ++v) {
    auto c = space.coords(static_cast<VertexId>(v));
    double s = 0.0;
    for (std::size_t k = 0; k < point.size(); ++k) s += (c[k] - point[k]) * (c[k] - point[k]);
    if (s < best) {
      best = s;
      arg = static_cast<VertexId>(v);
    }
  }
  return arg;
}

namespace {

struct GluedLayout {
  std::size_t n = 0;       // vertices per axis per sheet
  std::size_t mid = 0;     // middle index
  std::size_t sheet_b_base = 0;
};

GluedLayout glued_layout(const GluedPlanesSpec& spec) {
  GluedLayout lay;
  lay.n = axis_count(spec.extent, spec.h);
  if (lay.n < 3) throw std::invalid_argument("glued planes need at least 3 vertices per axis");
  lay.mid = lay.n / 2;
  lay.sheet_b_base = lay.n * lay.n;
  return lay;
}

}  // namespace

PointCloudSpace glued_planes(const GluedPlanesSpec& spec) {
  if (spec.k != 0 && spec.k != 1)
    throw std::invalid_argument("glued planes support k in {0, 1}");
  GluedLayout lay = glued_layout(spec);
  const std::size_t per_sheet = lay.n * lay.n;
  if (2 * per_sheet > spec.vertex_budget)
    throw std::invalid_argument("glued planes exceed the vertex budget");

  // Sheet-local vertex -> global id.  Sheet B vertices on the gluing set are
  // identified with their sheet A partners instead of materialized.
  auto glued_in_b = [&](std::size_t ix, std::size_t iy) {
    if (spec.k == 0) return ix == lay.mid && iy == lay.mid;
    return ix == lay.mid;  // whole middle vertical line
  };

  std::vector<std::int64_t> global_of_b(per_sheet, -1);
  std::vector<double> coords;
  std::vector<double> weights;
  const double w = spec.h * spec.h;
  const double shift = spec.extent + 4.0 * spec.h;  // sheet B drawn to the right

  auto a_index = [&](std::size_t ix, std::size_t iy) { return iy * lay.n + ix; };

  for (std::size_t iy = 0; iy < lay.n; ++iy)
    for (std::size_t ix = 0; ix < lay.n; ++ix) {
      coords.push_back(ix * spec.h);
      coords.push_back(iy * spec.h);
      weights.push_back(w);
    }
  std::size_t next = per_sheet;
  for (std::size_t iy = 0; iy < lay.n; ++iy)
    for (std::size_t ix = 0; ix < lay.n; ++ix) {
      if (glued_in_b(ix, iy)) {
        global_of_b[a_index(ix, iy)] = static_cast<std::int64_t>(a_index(ix, iy));
        continue;
      }
      global_of_b[a_index(ix, iy)] = static_cast<std::int64_t>(next++);
      coords.push_back(shift + ix * spec.h);
      coords.push_back(iy * spec.h);
      weights.push_back(w);
    }

  std::vector<Edge> edges;
  auto add_axis_edges = [&](auto id_of) {
    for (std::size_t iy = 0; iy < lay.n; ++iy)
      for (std::size_t ix = 0; ix < lay.n; ++ix) {
        VertexId u = id_of(ix, iy);
        if (ix + 1 < lay.n) {
          VertexId v = id_of(ix + 1, iy);
          if (u != v) edges.push_back({u, v, spec.h});
        }
        if (iy + 1 < lay.n) {
          VertexId v = id_of(ix, iy + 1);
          if (u != v) edges.push_back({u, v, spec.h});
        }
      }
  };
  add_axis_edges([&](std::size_t ix, std::size_t iy) {
    return static_cast<VertexId>(a_index(ix, iy));
  });
  add_axis_edges([&](std::size_t ix, std::size_t iy) {
    return static_cast<VertexId>(global_of_b[a_index(ix, iy)]);
  });

  // Drop duplicate B-side edges that collapsed onto identified vertices (k=1
  // produces parallel copies of edges along the gluing line).
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    auto ka = std::minmax(a.u, a.v), kb = std::minmax(b.u, b.v);
    return ka < kb;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Edge& a, const Edge& b) {
                            return std::minmax(a.u, a.v) == std::minmax(b.u, b.v);
                          }),
              edges.end());

  return PointCloudSpace(MetricKind::GraphPath, 2, spec.h, std::move(coords),
                         std::move(weights), std::move(edges));
}

VertexId glued_planes_vertex(const GluedPlanesSpec& spec, int sheet, int ix, int iy) {
  GluedLayout lay = glued_layout(spec);
  if (ix < 0 || iy < 0 || static_cast<std::size_t>(ix) >= lay.n ||
      static_cast<std::size_t>(iy) >= lay.n)
    throw std::invalid_argument("glued planes vertex out of range");
  std::size_t a = static_cast<std::size_t>(iy) * lay.n + static_cast<std::size_t>(ix);
  if (sheet == 0) return static_cast<VertexId>(a);
  if (sheet != 1) throw std::invalid_argument("sheet must be 0 or 1");
  // Recompute sheet B numbering the same way the builder does.
  auto glued_in_b = [&](std::size_t jx, std::size_t jy) {
    if (spec.k == 0) return jx == lay.mid && jy == lay.mid;
    return jx == lay.mid;
  };
  std::size_t next = lay.n * lay.n;
  for (std::size_t jy = 0; jy < lay.n; ++jy)
    for (std::size_t jx = 0; jx < lay.n; ++jx) {
      std::size_t idx = jy * lay.n + jx;
      if (glued_in_b(jx, jy)) {
        if (idx == a) return static_cast<VertexId>(idx);
        continue;
      }
      if (idx == a) return static_cast<VertexId>(next);
      ++next;
    }
  throw std::logic_error("unreachable");
}

PointCloudSpace segment(std::size_t n, MetricKind metric) {
  if (n < 2) throw std::invalid_argument("segment needs at least 2 vertices");
  const double h = 1.0 / static_cast<double>(n - 1);
  std::vector<double> coords(n), weights(n, 1.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) coords[i] = i * h;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1), h});
  return PointCloudSpace(metric, 1, h, std::move(coords), std::move(weights),
                         std::move(edges));
}

namespace {

struct Rect {
  double x0, y0, x1, y1;
};

void carve(const Rect& cell, int stage, const CarpetSpec& spec,
           std::vector<Rect>& holes) {
  if (stage >= spec.levels) return;
  double a = stage < static_cast<int>(spec.hole_fraction.size())
                 ? spec.hole_fraction[stage]
                 : spec.hole_fraction.back();
  if (!(a > 0.0) || a > 1.0 / 3.0 + 1e-12)
    throw std::invalid_argument("hole fractions must lie in (0, 1/3]");
  double side = cell.x1 - cell.x0;
  double hole = a * side;
  if (hole < 2.0 * spec.h) return;  // below grid resolution, stop refining
  double cx = 0.5 * (cell.x0 + cell.x1), cy = 0.5 * (cell.y0 + cell.y1);
  holes.push_back({cx - hole / 2, cy - hole / 2, cx + hole / 2, cy + hole / 2});
  double third = side / 3.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == 1 && j == 1) continue;  // hole sits inside the middle ninth
      Rect sub{cell.x0 + i * third, cell.y0 + j * third,
               cell.x0 + (i + 1) * third, cell.y0 + (j + 1) * third};
      carve(sub, stage + 1, spec, holes);
    }
}

}  // namespace

PointCloudSpace carpet_like(const CarpetSpec& spec) {
  if (spec.levels < 1) throw std::invalid_argument("carpet needs at least one level");
  if (spec.hole_fraction.empty())
    throw std::invalid_argument("carpet needs a hole fraction schedule");
  const std::size_t n = axis_count(1.0, spec.h);
  if (n * n > spec.vertex_budget)
    throw std::invalid_argument("carpet exceeds the vertex budget");

  std::vector<Rect> holes;
  carve({0.0, 0.0, 1.0, 1.0}, 0, spec, holes);

  auto inside_hole = [&](double x, double y) {
    for (const auto& r : holes)
      if (x > r.x0 + 1e-12 && x < r.x1 - 1e-12 && y > r.y0 + 1e-12 && y < r.y1 - 1e-12)
        return true;
    return false;
  };

  std::vector<std::int64_t> id_of(n * n, -1);
  std::vector<double> coords, weights;
  const double w = spec.h * spec.h;
  std::size_t next = 0;
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      double x = ix * spec.h, y = iy * spec.h;
      if (inside_hole(x, y)) continue;
      id_of[iy * n + ix] = static_cast<std::int64_t>(next++);
      coords.push_back(x);
      coords.push_back(y);
      weights.push_back(w);
    }

  std::vector<Edge> edges;
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      std::int64_t u = id_of[iy * n + ix];
      if (u < 0) continue;
      if (ix + 1 < n) {
        std::int64_t v = id_of[iy * n + ix + 1];
        if (v >= 0)
          edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), spec.h});
      }
      if (iy + 1 < n) {
        std::int64_t v = id_of[(iy + 1) * n + ix];
        if (v >= 0)
          edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), spec.h});
      }
    }

  return PointCloudSpace(MetricKind::GraphPath, 2, spec.h, std::move(coords),
                         std::move(weights), std::move(edges));
}

}  // namespace picheck
