#pragma once

// Two-pole Riesz kernels and truncated Riesz measures on point clouds, plus
// the pointwise and ball-averaged Poincare-type ratio checks built on them.
//
// Kernel at z for poles x, y:
//   R(z) = d(x,z)/m(B_{d(x,z)}(x)) + d(y,z)/m(B_{d(y,z)}(y)),   R(x)=R(y)=0,
// with open balls throughout.  The L-truncated measure weights R by the
// indicator of the open ball B_{2 L d(x,y)}(x) and multiplies by the vertex
// mass.

#include <span>
#include <vector>

#include "picheck/mmspace.hpp"

namespace picheck {

struct RieszMeasure {
  VertexId x = 0;
  VertexId y = 0;
  double truncation = 0.0;     // L
  double pole_distance = 0.0;  // d(x, y)
  double support_radius = 0.0; // 2 L d(x, y)
  std::vector<double> weight;  // per vertex: R^L(z) * m(z); zero off-support
  double total_mass = 0.0;

  double operator[](VertexId v) const { return weight[v]; }
  // Mass of a vertex set under the truncated measure.
  double mass(std::span<const VertexId> vertices) const;
  double mass(const std::vector<std::uint8_t>& mask) const;
};

// Kernel value at a single vertex (untruncated).
double riesz_potential(const PointCloudSpace& space, VertexId x, VertexId y,
                       VertexId z);

RieszMeasure riesz_measure(const PointCloudSpace& space, VertexId x, VertexId y,
                           double L);

// Pole pair context: distance fields from both poles plus the truncated
// measure.  Most separating-side operations consume this.
struct PoleContext {
  VertexId x = 0;
  VertexId y = 0;
  double L = 0.0;
  double pole_distance = 0.0;
  DistanceField from_x;
  DistanceField from_y;
  RieszMeasure measure;
};

PoleContext make_pole_context(const PointCloudSpace& space, VertexId x, VertexId y,
                              double L);

// Restricted Hardy-Littlewood maximal function of a nonnegative field at z:
// max over realizable open-ball radii r in (0, s) of the ball average of f.
double maximal_function(const PointCloudSpace& space, std::span<const double> f,
                        double s, VertexId z);

struct RatioCheck {
  double ratio = 0.0;     // lhs / rhs with the 0/0 -> 0, x/0 -> inf convention
  double lhs = 0.0;
  double rhs = 0.0;
  bool flagged = false;   // boundary contamination (ball checks only)
};

// Pointwise two-pole check: |u(x) - u(y)| against the integral of the local
// slope of u under the truncated Riesz measure.
RatioCheck ptpi_check(const PointCloudSpace& space, std::span<const double> u,
                      VertexId x, VertexId y, double L);

// Ball-averaged check on B_r(center) with slope averaged over B_{lambda r}:
// ratio = (mean oscillation of u) / (r * mean slope).  Flagged when the
// enlarged ball reaches the cloud rim.
RatioCheck pi_check(const PointCloudSpace& space, std::span<const double> u,
                    VertexId center, double r, double lambda);

}  // namespace picheck
