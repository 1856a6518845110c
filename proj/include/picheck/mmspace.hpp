#pragma once

// Discretized metric measure spaces: finite weighted point clouds with either
// the ambient Euclidean metric on stored coordinates or the graph shortest-path
// metric over an explicit edge set.  Everything downstream (kernels, cuts,
// widths, contents) reduces to ball mass queries and shortest-path fields over
// these clouds, so this header also carries the distance-field machinery.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace picheck {

using VertexId = std::uint32_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class MetricKind { AmbientEuclidean, GraphPath };

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double length = 0.0;
};

struct Neighbor {
  VertexId to = 0;
  double length = 0.0;
  std::uint32_t edge = 0;  // index into edges()
};

// Immutable after construction.  Vertices are dense indices 0..n-1; original
// file ids, if any, are kept only for round-tripping.
class PointCloudSpace {
 public:
  PointCloudSpace(MetricKind metric, int dim, double resolution,
                  std::vector<double> coords, std::vector<double> weights,
                  std::vector<Edge> edges,
                  std::vector<std::int64_t> external_ids = {});

  std::size_t vertex_count() const { return weights_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  MetricKind metric_kind() const { return metric_; }
  int dim() const { return dim_; }
  double resolution() const { return h_; }
  double total_mass() const { return total_mass_; }

  double weight(VertexId i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  std::span<const double> coords(VertexId i) const;
  const std::vector<double>& coords_flat() const { return coords_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Neighbor> neighbors(VertexId i) const;
  std::int64_t external_id(VertexId i) const { return external_ids_[i]; }

  // Metric distance between two vertices.  Ambient: closed form.  Graph-path:
  // runs a Dijkstra from i; prefer DistanceField when many queries share a
  // source.
  double distance(VertexId i, VertexId j) const;

  // Euclidean distance on stored coordinates regardless of metric kind.
  double coord_distance(VertexId i, VertexId j) const;

  double min_edge_length() const { return min_edge_length_; }

 private:
  MetricKind metric_;
  int dim_;
  double h_;
  std::vector<double> coords_;   // row-major, dim_ per vertex
  std::vector<double> weights_;
  std::vector<Edge> edges_;
  std::vector<std::int64_t> external_ids_;
  double total_mass_ = 0.0;
  double min_edge_length_ = kInf;
  // CSR adjacency
  std::vector<std::uint32_t> adj_offset_;
  std::vector<Neighbor> adj_;
};

// Distances from a source set to every vertex, plus a sorted view enabling
// O(log n) open-ball mass queries.  Ambient metric: exact pointwise formula
// (multi-source = min over sources).  Graph-path: multi-source Dijkstra.
class DistanceField {
 public:
  DistanceField(const PointCloudSpace& space, VertexId source);
  DistanceField(const PointCloudSpace& space, std::span<const VertexId> sources);

  double operator[](VertexId v) const { return dist_[v]; }
  const std::vector<double>& values() const { return dist_; }

  // Mass of the open ball {d < r}.
  double ball_mass(double r) const;
  // Mass of {d <= r + tol}; used by annulus estimators where the radius
  // schedule intentionally lands on distance ties.
  double ball_mass_closed(double r, double tol = 0.0) const;
  // Vertices of the open ball {d < r}, ascending by distance then id.
  std::vector<VertexId> ball(double r) const;

  // Vertices sorted ascending by distance (ties by id) with prefix masses.
  std::span<const VertexId> order() const { return order_; }
  std::span<const double> sorted_distances() const { return sorted_; }
  std::span<const double> prefix_mass() const { return prefix_; }

 private:
  void build_index(const PointCloudSpace& space);
  std::vector<double> dist_;
  std::vector<VertexId> order_;
  std::vector<double> sorted_;
  std::vector<double> prefix_;  // prefix_[k] = mass of first k sorted vertices
};

// --- basic queries -----------------------------------------------------------

// Open ball around a vertex.
std::vector<VertexId> ball(const PointCloudSpace& space, VertexId center, double r);

double measure(const PointCloudSpace& space, std::span<const VertexId> vertices);

// Mass of the open ball B_r(center) without materializing a full distance
// field: truncated Dijkstra on graph-path spaces, direct scan on ambient ones.
double local_ball_mass(const PointCloudSpace& space, VertexId center, double r);

struct DoublingEstimate {
  double value = 0.0;          // max over protocol of m(B_2r)/m(B_r)
  VertexId argmax_center = 0;
  double argmax_radius = 0.0;
  std::size_t centers_used = 0;
  std::size_t radii_used = 0;
};

// Sampled doubling constant.  Radii are clamped to [2h, diam/2] by the default
// protocol helpers; the estimate is monotone nondecreasing in the sample set.
DoublingEstimate doubling_estimate(const PointCloudSpace& space,
                                   std::span<const VertexId> centers,
                                   std::span<const double> radii);

// Default protocol: centers on a coarse subsample (deterministic stride),
// radii log-spaced in [2h, diam_hint/2].
DoublingEstimate doubling_estimate(const PointCloudSpace& space,
                                   std::size_t max_centers = 64,
                                   std::size_t radii_count = 12);

struct QuasiconvexityEstimate {
  double value = 1.0;  // max over sampled pairs of path-length / distance
  VertexId worst_u = 0;
  VertexId worst_v = 0;
  bool finite = true;  // false when a sampled pair is graph-disconnected
};

// Graph-path spaces are geodesic by construction (value 1, no sampling).
// Ambient spaces: ratio of graph shortest-path length to ambient distance over
// sampled pairs; a disconnected pair yields an infinite estimate.
QuasiconvexityEstimate quasiconvexity_estimate(
    const PointCloudSpace& space,
    std::span<const std::pair<VertexId, VertexId>> pairs);

struct SpaceStats {
  DoublingEstimate doubling;
  QuasiconvexityEstimate quasiconvexity;
  std::string protocol;
};

// Per-vertex discrete Lipschitz slope: max over incident edges of
// |u(j) - u(i)| / length(i,j); zero at isolated vertices.
std::vector<double> local_lip(const PointCloudSpace& space,
                              std::span<const double> u);

// Maximal δ-separated net containing seeds x and y (greedy farthest-point
// insertion, deterministic lowest-id tie-breaks).  Every vertex ends within
// δ of the result; pairwise distances are >= δ.
std::vector<VertexId> delta_net(const PointCloudSpace& space, double delta,
                                VertexId x, VertexId y);

// Modal-degree heuristic for the rim of the cloud; used only to flag
// boundary-contaminated ball checks, never to change values.
std::vector<VertexId> boundary_vertices(const PointCloudSpace& space);

// Logarithmic schedule {2h, 4h, 8h, ...} capped at rmax (at least one entry).
std::vector<double> default_radius_schedule(double h, double rmax);

// --- point-cloud text format -------------------------------------------------
//
//   # comment
//   pointcloud <dim> <euclidean|graph> <resolution>
//   v <id> <c1> ... <cdim> <weight>
//   e <id_u> <id_v> [length]
//
// Edge length defaults to the ambient distance between the endpoints.

PointCloudSpace load_point_cloud(std::istream& in);
PointCloudSpace load_point_cloud_file(const std::string& path);
void save_point_cloud(const PointCloudSpace& space, std::ostream& out);
void save_point_cloud_file(const PointCloudSpace& space, const std::string& path);

// FNV-1a over the canonical serialization; stable across runs.
std::string space_hash(const PointCloudSpace& space);

}  // namespace picheck
