#pragma once

// Experiment configuration: one structured text file describing the space,
// the pole pairs, the scale parameters, and the command list.  Every field
// is echoed into the report so a report is self-describing.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "picheck/candidates.hpp"
#include "picheck/gallery.hpp"
#include "picheck/mmspace.hpp"

namespace picheck {

struct PolePairSpec {
  // Either explicit coordinates (nearest vertex wins) or external vertex ids.
  std::vector<double> x_coords;
  std::vector<double> y_coords;
  std::optional<std::int64_t> x_id;
  std::optional<std::int64_t> y_id;
};

struct ExperimentConfig {
  nlohmann::json raw;  // canonical echo

  // Space source: exactly one of these is active.
  std::string space_kind;  // grid | glued-planes | segment | carpet | file
  GridSpec grid;
  GluedPlanesSpec glued;
  std::size_t segment_n = 0;
  MetricKind segment_metric = MetricKind::GraphPath;
  CarpetSpec carpet;
  std::string space_file;

  std::vector<PolePairSpec> poles;
  double L = 2.0;
  double delta = 0.1;
  std::vector<std::size_t> k_paths{4, 8};
  double lambda = 2.0;
  double C = 1.0;
  double iso_r = 0.0;  // 0 means pole_distance / 2
  std::uint64_t seed = 1;
  int jobs = 1;
  bool plots = false;
  std::vector<std::string> commands;
  std::vector<std::string> regions;  // mini-language specs for region commands
  CandidateConfig candidates;
  nlohmann::json tolerances;  // per-op overrides, defaults applied by the runner
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const nlohmann::json& j);

// FNV-1a over the canonical dump of the raw config.
std::string config_hash(const ExperimentConfig& cfg);

// Materializes the configured space (builds a gallery space or loads a file).
PointCloudSpace build_space(const ExperimentConfig& cfg);

// Resolves a pole pair to vertex ids on the given space.
std::pair<VertexId, VertexId> resolve_poles(const PointCloudSpace& space,
                                            const PolePairSpec& spec);

}  // namespace picheck
