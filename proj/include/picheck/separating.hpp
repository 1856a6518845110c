#pragma once

// Surface-side machinery: widths of vertex regions, separating ratios,
// position functions and their level-set separators, Minkowski contents, and
// the cross-checks tying them together (sandwich, coarea, obstacle avoidance,
// relative isoperimetry).
//
// A region A assigns every edge the in-region length
//   len(e) * (chi_A(u) + chi_A(v)) / 2,
// and width_{x,y}(A) is the in-region length of the cheapest x->y path.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "picheck/mmspace.hpp"
#include "picheck/riesz.hpp"

namespace picheck {

struct RegionSet {
  std::vector<std::uint8_t> mask;  // one byte per vertex
  std::string label;

  bool contains(VertexId v) const { return mask[v] != 0; }
  std::size_t count() const;
  std::vector<VertexId> vertices() const;

  static RegionSet from_vertices(std::size_t n, std::span<const VertexId> vs,
                                 std::string label = {});
  static RegionSet full(std::size_t n, std::string label = {});
};

// In-region length of one edge under the half-endpoint rule.
double region_edge_length(const PointCloudSpace& space, const RegionSet& region,
                          const Edge& e);

// Cheapest in-region x->y crossing length (all paths admissible; zero-weight
// edges are fine).  Infinite when x and y are graph-disconnected.
double width(const PointCloudSpace& space, VertexId x, VertexId y,
             const RegionSet& region);

// Width restricted to paths of total length <= L * d(x, y), via bi-criteria
// search.  Used to compare the all-paths convention against the
// quasigeodesic one.
double width_quasigeodesic(const PointCloudSpace& space, VertexId x, VertexId y,
                           const RegionSet& region, double L,
                           std::size_t label_budget = 5'000'000);

struct SeparatingRatio {
  double mass = 0.0;   // truncated Riesz mass of the region
  double width = 0.0;
  double value = 0.0;  // mass / width, +inf when width vanishes
};

SeparatingRatio separating_ratio(const PointCloudSpace& space,
                                 const PoleContext& ctx, const RegionSet& region);

struct ScanResult {
  double best = kInf;
  std::size_t argmin = SIZE_MAX;
  std::vector<double> values;  // per candidate (inf for degenerate widths)
};

// Min separating ratio over candidate regions.
ScanResult set_connectedness_scan(const PointCloudSpace& space,
                                  const PoleContext& ctx,
                                  std::span<const RegionSet> candidates);

struct PositionField {
  VertexId x = 0;
  VertexId y = 0;
  std::vector<double> value;  // in-region distance from x; pos(y) == width
  double width = 0.0;
  std::string region_label;
};

// Single-source in-region distances from x.  pos(x) = 0 and pos(y) equals
// width(A) exactly (same relaxation).
PositionField position_function(const PointCloudSpace& space, VertexId x,
                                VertexId y, const RegionSet& region);

struct LipBoundCheck {
  double max_lip = 0.0;          // max local slope of pos over the cloud
  double max_lip_outside = 0.0;  // over vertices outside A with no neighbor in A
  double bound = 0.0;            // quasiconvexity ceiling passed in
  bool within_bound = false;     // max_lip <= bound + 1e-9 and outside ~ 0
};

LipBoundCheck lip_bound_check(const PointCloudSpace& space, const RegionSet& region,
                              const PositionField& pos, double quasiconvexity);

struct SeparatingSet {
  RegionSet omega;      // closed side containing x
  double margin = 0.0;  // min(d(x, Omega^c), d(y, Omega))
  double level = 0.0;   // threshold t that produced it, when applicable
};

// Sublevel set {pos <= t} for t in (0, width); margin measured a posteriori.
SeparatingSet level_set_separator(const PointCloudSpace& space,
                                  const PoleContext& ctx,
                                  const PositionField& pos, double t);

// Wrap an arbitrary region as a separator candidate, measuring its margin
// min(d(x, Omega^c), d(y, Omega)); zero when it fails to enclose x or
// excludes y.
SeparatingSet make_separating_set(const PoleContext& ctx, RegionSet omega);

struct ContentProfile {
  std::vector<double> radii;
  std::vector<double> values;  // annulus mass / r per radius
  // A radius is saturated once the annulus has swallowed every reachable
  // vertex outside the region; past that point mass/r compares bulk
  // complement mass to r instead of approximating a boundary collar.
  std::vector<std::uint8_t> saturated;
  double estimate = 0.0;         // min over the whole schedule
  double collar_estimate = 0.0;  // min over non-saturated radii; +inf if none
  bool degenerate = false;       // empty region or whole cloud: no outer annulus
};

// One-sided Minkowski content of a region boundary against the weight vector
// (truncated Riesz weights for the separating theory, plain vertex masses for
// isoperimetry): annulus {0 < dist(z, Omega) <= r} mass over r, minimized
// over the radius schedule.  Radii below 2h are rejected; there discreteness
// dominates the annulus mass.
ContentProfile minkowski_content(const PointCloudSpace& space, const RegionSet& omega,
                                 std::span<const double> vertex_weight,
                                 std::span<const double> radii);

struct SandwichCheck {
  double lhs = 0.0;  // inf content / quasiconvexity
  double mid = 0.0;  // inf separating ratio over regions
  double rhs = 0.0;  // inf content over valid separators
  std::size_t region_argmin = SIZE_MAX;
  std::size_t separator_argmin = SIZE_MAX;
  std::size_t separators_valid = 0;  // margin >= 2h and measurable at some radius
  bool pass = false;  // lhs <= mid and mid <= rhs within tolerance
  double tolerance = 0.2;
};

// Two-sided comparison between the best separating ratio over regions and the
// best boundary content over valid separators.  A separator counts when its
// margin is >= 2h and at least one schedule radius is unsaturated; the
// infimum uses collar estimates, since a saturated annulus (for instance the
// complement of a sublevel set hugging the pole y, where the Riesz density
// vanishes) reports bulk mass over r rather than boundary content.
SandwichCheck sandwich_check(const PointCloudSpace& space, const PoleContext& ctx,
                             double quasiconvexity,
                             std::span<const RegionSet> region_candidates,
                             std::span<const SeparatingSet> separator_candidates,
                             double tolerance = 0.2);

struct CoareaCheck {
  double level_integral = 0.0;  // integral over t of content({pos <= t})
  double slope_integral = 0.0;  // integral of lip pos against the Riesz measure
  double margin = 0.0;          // slope - level
  bool pass = false;            // margin >= -tolerance * slope
  double tolerance = 0.15;
};

// Midpoint Riemann sum of sublevel-set contents (step <= h) against the
// integrated slope of the position field.
CoareaCheck coarea_check(const PointCloudSpace& space, const PoleContext& ctx,
                         const PositionField& pos, double tolerance = 0.15);

struct ObstacleCheck {
  double in_obstacle_length = 0.0;  // min over length-bounded paths
  double bound = 0.0;               // C d(x,y) (Mf(x) + Mf(y))
  double ratio = 0.0;
  bool feasible = false;  // some path satisfies the length bound
};

// Length inside an obstacle set E along the best L-bounded path, against the
// maximal-function bound at scale C d(x, y).
ObstacleCheck obstacle_avoidance_check(const PointCloudSpace& space, VertexId x,
                                       VertexId y, const RegionSet& obstacle,
                                       double C, double L,
                                       std::size_t label_budget = 5'000'000);

struct IsoperimetricCheck {
  double lhs = 0.0;        // min(m(B_r within E), m(B_r minus E)) / m(B_r)
  double surface = 0.0;    // content proxy of the boundary inside B_{lambda r}
  double rhs_term = 0.0;   // surface / m(B_{lambda r})
  double ratio = 0.0;      // lhs / (r * rhs_term)
  bool flagged = false;    // enlarged ball touches the cloud rim
};

// Relative isoperimetric comparison on the ball B_r(center); the boundary
// proxy is the set of E-vertices with a neighbor outside E, its content taken
// in the two-sided (neighborhood over 2 rho) normalization against the plain
// vertex masses.
IsoperimetricCheck relative_isoperimetric_check(const PointCloudSpace& space,
                                                const RegionSet& obstacle,
                                                VertexId center, double r,
                                                double lambda);

// Distance to a vertex set: zero on members, exact metric distance outside
// (graph: multi-source relaxation; ambient: cell-bucketed nearest member).
// Vertices farther than rmax come back as +inf; callers that only probe
// annuli up to some radius pass a cap to skip the far field.
std::vector<double> distance_to_set(const PointCloudSpace& space,
                                    const RegionSet& region, double rmax = kInf);

}  // namespace picheck
