#pragma once

// Capacity graphs over delta-nets and the max-flow / min-cut machinery that
// turns their flows into discrete curve pencils.
//
// Net vertices within 4*delta of each other are joined by a pair of directed
// arcs.  The arc (i, j) carries
//   c(i, j) = m(B_delta(x_i))/delta * d(x, x_i)/m(B_{d(x,x_i)}(x))
//           + m(B_delta(x_j))/delta * d(y, x_j)/m(B_{d(y,x_j)}(y)),
// i.e. the tail is weighted against the source pole and the head against the
// sink pole.  At a pole its own kernel ratio d/m(B_d) degenerates to 0/0 and
// is resolved with the far endpoint's value, which keeps pole-hugging cuts at
// the scale-independent capacity the construction exists to certify.  A cut
// value sums the directed arcs leaving the source side.

#include <cstdint>
#include <span>
#include <vector>

#include "picheck/mmspace.hpp"
#include "picheck/riesz.hpp"

namespace picheck {

struct NetArc {
  std::uint32_t tail = 0;  // indices into NetGraph::points
  std::uint32_t head = 0;
  double capacity = 0.0;
  double length = 0.0;  // space distance between the endpoints
};

struct NetGraph {
  std::vector<VertexId> points;  // net vertices (indices into the space)
  std::uint32_t source = 0;      // position of x in points
  std::uint32_t sink = 0;        // position of y in points
  double delta = 0.0;
  double L = 0.0;
  VertexId x = 0;
  VertexId y = 0;
  bool scale_flagged = false;  // delta >= d(x,y)/4: poles may touch
};

// Builds the capacity graph on the delta-net seeded by {x, y}, keeping net
// points inside the closed truncation ball around x (radius 2 L d(x,y)).
// Throws when delta >= d(x,y) or when x and y end up graph-disconnected.
std::pair<NetGraph, std::vector<NetArc>> build_net_graph(
    const PointCloudSpace& space, VertexId x, VertexId y, double delta, double L);

struct Cut {
  std::vector<std::uint32_t> source_side;  // net-point positions, sorted
  double value = 0.0;
};

struct Flow {
  std::vector<double> arc_flow;  // parallel to the arc array
  double value = 0.0;
};

// Max flow via shortest augmenting paths (fewest edges first).  Handles
// disconnected sinks by returning a zero flow.
Flow max_flow(const NetGraph& net, std::span<const NetArc> arcs);

// Min cut as the residual-reachable source side after max flow; value equals
// the flow value up to roundoff.
Cut min_cut(const NetGraph& net, std::span<const NetArc> arcs);

// Recomputes a cut's value from scratch (sum of directed crossing arcs).
double cut_value(std::span<const NetArc> arcs, std::span<const std::uint32_t> side,
                 std::size_t point_count);

struct PencilPath {
  std::vector<std::uint32_t> vertices;  // net-point positions, source..sink
  double raw_weight = 0.0;              // stripped flow amount
  double weight = 0.0;                  // raw / total flow
  double length = 0.0;                  // sum of arc lengths
};

struct DiscretePencil {
  std::vector<PencilPath> paths;
  double flow_value = 0.0;
};

// Greedy path stripping of a conservative flow (cycles cancelled first); the
// stripped raw weights sum to the flow value and reconstruct every arc flow.
DiscretePencil flow_to_pencil(const NetGraph& net, std::span<const NetArc> arcs,
                              const Flow& flow);

struct PencilRatio {
  double ratio = 0.0;       // curve-side integral / measure-side integral
  double curve_side = 0.0;  // sum_k w_k * path integral of g
  double measure_side = 0.0;
};

// Tests the pencil inequality for one nonnegative field g on the space:
// path integrals use endpoint-averaged g times arc length; the measure side
// integrates g against the truncated Riesz measure.
PencilRatio pencil_inequality_ratio(const PointCloudSpace& space,
                                    const NetGraph& net,
                                    std::span<const NetArc> arcs,
                                    const DiscretePencil& pencil,
                                    std::span<const double> g,
                                    const RieszMeasure& mu);

// Empirical pencil constant: the sup of the ratio over single-vertex
// indicators at non-pole net vertices touched by the pencil (these attain the
// sup over all nonnegative g, both sides being linear in g) plus g == 1.
double pencil_constant(const PointCloudSpace& space, const NetGraph& net,
                       std::span<const NetArc> arcs, const DiscretePencil& pencil,
                       const RieszMeasure& mu);

}  // namespace picheck
