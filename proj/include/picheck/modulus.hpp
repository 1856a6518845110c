#pragma once

// Curve families of bounded-length paths and their 1-modulus.
//
// Modulus of a finite family against a measure mu on vertices:
//   Mod = min sum_e rho(e) mu_bar(e)   s.t.  sum_{e in path} rho(e) len(e) >= 1
// with mu_bar(e) the endpoint-averaged vertex weight of mu.  Solved through
// the packing dual (one variable per path), whose multipliers recover rho.

#include <cstdint>
#include <span>
#include <vector>

#include "picheck/mmspace.hpp"
#include "picheck/riesz.hpp"

namespace picheck {

struct SpacePath {
  std::vector<VertexId> vertices;
  std::vector<std::uint32_t> edges;  // indices into space.edges()
  double length = 0.0;
};

struct CurveFamily {
  VertexId x = 0;
  VertexId y = 0;
  double L = 0.0;
  double length_bound = 0.0;  // L * d(x, y)
  std::vector<SpacePath> paths;
};

// k shortest loopless x->y paths over the space edges, truncated at length
// L * d(x, y); deviation branching on the shortest-path tree.  Sorted by
// length, deterministic tie order.
CurveFamily enumerate_quasigeodesics(const PointCloudSpace& space, VertexId x,
                                     VertexId y, double L, std::size_t k);

struct AdmissibleDensity {
  std::vector<std::uint32_t> edges;  // edges appearing in some family path
  std::vector<double> rho;           // parallel to edges
  double worst_path_integral = 0.0;  // min over paths, >= 1 - tol when valid
};

struct ModulusResult {
  double value = 0.0;
  AdmissibleDensity density;
  std::size_t lp_pivots = 0;
};

// Modulus of the family against the truncated Riesz measure.  Throws when the
// family is empty or contains a degenerate (zero-length) path.
ModulusResult modulus(const PointCloudSpace& space, const CurveFamily& family,
                      const RieszMeasure& mu);

struct KeithBound {
  std::vector<std::size_t> ks;      // enumeration sizes tried
  std::vector<double> moduli;       // modulus per size, nondecreasing
  double value = 0.0;               // largest (= last) entry
  bool subfamily_estimate = true;   // always: enumeration sees a subfamily
};

// Modulus growth along nested enumerated families; each entry lower-bounds
// the modulus of the full bounded-length family.
KeithBound keith_bound(const PointCloudSpace& space, VertexId x, VertexId y,
                       double L, std::span<const std::size_t> ks,
                       const RieszMeasure& mu);

struct DualityCheck {
  double modulus_value = 0.0;
  double pencil_constant = 0.0;   // empirical C1 over the indicator suite
  double margin = 0.0;            // modulus - 1/C1
  bool applicable = false;        // every pencil path lies in the family
};

// Cross-check Mod(family) >= 1 / C1 for a pencil supported inside the family.
// `pencil_paths` are vertex sequences in space ids with probability weights.
DualityCheck pencil_modulus_duality_check(
    const PointCloudSpace& space, const CurveFamily& family,
    const RieszMeasure& mu,
    std::span<const std::pair<std::vector<VertexId>, double>> pencil_paths,
    double pencil_constant);

}  // namespace picheck
