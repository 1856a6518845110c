#pragma once

// Deterministic families of benchmark spaces.  Construction is pure: the same
// parameters always produce byte-identical clouds (hashable for provenance).

#include <array>
#include <cstdint>
#include <vector>

#include "picheck/mmspace.hpp"

namespace picheck {

inline constexpr std::size_t kDefaultVertexBudget = 4'000'000;

struct GridSpec {
  int dim = 2;                          // 1, 2 or 3
  std::array<double, 3> extent{1, 1, 1};  // box [0, extent_i] per axis
  double h = 0.1;
  MetricKind metric = MetricKind::AmbientEuclidean;
  bool diagonals = false;               // add 2^dim-cell diagonal edges
  std::size_t vertex_budget = kDefaultVertexBudget;
};

// Regular grid on the box, weights h^dim, axis edges of length h (diagonal
// edges carry their coordinate length).
PointCloudSpace euclidean_grid(const GridSpec& spec);

// Nearest grid vertex to a coordinate tuple (ties toward lower index).
VertexId nearest_vertex(const PointCloudSpace& space, std::span<const double> point);

struct GluedPlanesSpec {
  double extent = 2.0;   // each sheet is [0, extent]^2
  double h = 0.1;
  int k = 0;             // 0: glue at a point, 1: glue along the middle line
  std::size_t vertex_budget = kDefaultVertexBudget;
};

// Two square sheets carrying the graph-path metric, identified along a
// k-dimensional middle set (sheet centers for k = 0, the middle vertical grid
// line for k = 1).  Identified vertices keep a single copy of the weight.
// Sheet B is drawn shifted right of sheet A in stored coordinates.
PointCloudSpace glued_planes(const GluedPlanesSpec& spec);

// Vertex index helpers for glued planes: sheet 0 or 1 plus grid position of
// the matching sheet-local vertex.
VertexId glued_planes_vertex(const GluedPlanesSpec& spec, int sheet, int ix, int iy);

// n equispaced vertices on [0,1], weights 1/n, consecutive edges.
PointCloudSpace segment(std::size_t n, MetricKind metric = MetricKind::GraphPath);

struct CarpetSpec {
  int levels = 3;                    // recursion depth
  std::vector<double> hole_fraction; // a_i per stage, each in (0, 1/3]
  double h = 1.0 / 81.0;
  std::size_t vertex_budget = kDefaultVertexBudget;
};

// Unit-square grid with centered square holes carved recursively on the 3x3
// subdivision; hole side fraction a_i at stage i (a_i = 1/3 recovers the
// classical middle-ninth carpet, smaller a_i fattens the space).
PointCloudSpace carpet_like(const CarpetSpec& spec);

}  // namespace picheck
