#pragma once

// Standard candidate suites for the infimum scans.  The separating theory's
// own witnesses are position-field level sets; the rest of the families
// (balls, halfspaces, thin slabs and bands, random blob unions) stress-test
// the scan so the reported infimum is not an artifact of one shape class.

#include <cstdint>
#include <vector>

#include "picheck/riesz.hpp"
#include "picheck/separating.hpp"

namespace picheck {

struct CandidateConfig {
  std::size_t ball_centers = 6;     // coarse-net centers for ball candidates
  std::size_t halfspace_cuts = 7;   // per axis, spread over the support box
  std::size_t band_levels = 5;      // thin bands per position field
  std::size_t separator_levels = 4; // sublevel cuts per region's field
  std::size_t random_unions = 50;
  std::size_t blobs_per_union = 3;
  std::uint64_t seed = 1;
};

struct CandidateSuite {
  std::vector<RegionSet> regions;
  std::vector<SeparatingSet> separators;
};

// Region families: full support, metric balls on a coarse net, coordinate
// halfspaces, thin coordinate slabs, thin position bands, seeded random blob
// unions.  Separators: sublevel sets of every region's position field plus
// pole balls and the distance bisector.  Deterministic for a fixed seed.
CandidateSuite standard_candidates(const PointCloudSpace& space,
                                   const PoleContext& ctx,
                                   const CandidateConfig& cfg = {});

}  // namespace picheck
