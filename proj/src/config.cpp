#include "picheck/config.hpp"

#include <fstream>
#include <stdexcept>

#include "picheck/region_spec.hpp"

namespace picheck {

namespace {

using nlohmann::json;

MetricKind metric_from(const std::string& s) {
  if (s == "euclidean") return MetricKind::AmbientEuclidean;
  if (s == "graph") return MetricKind::GraphPath;
  throw std::invalid_argument("unknown metric '" + s + "'");
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.raw = j;

  const json& sp = j.at("space");
  cfg.space_kind = sp.at("kind").get<std::string>();
  if (cfg.space_kind == "grid") {
    maybe(sp, "dim", cfg.grid.dim);
    if (const auto it = sp.find("extent"); it != sp.end()) {
      const auto ext = it->get<std::vector<double>>();
      if (ext.empty() || ext.size() > 3)
        throw std::invalid_argument("grid extent wants 1..3 entries");
      for (std::size_t a = 0; a < ext.size(); ++a) cfg.grid.extent[a] = ext[a];
      cfg.grid.dim = static_cast<int>(ext.size());
    }
    maybe(sp, "h", cfg.grid.h);
    maybe(sp, "diagonals", cfg.grid.diagonals);
    if (const auto it = sp.find("metric"); it != sp.end())
      cfg.grid.metric = metric_from(it->get<std::string>());
  } else if (cfg.space_kind == "glued-planes") {
    maybe(sp, "extent", cfg.glued.extent);
    maybe(sp, "h", cfg.glued.h);
    maybe(sp, "k", cfg.glued.k);
  } else if (cfg.space_kind == "segment") {
    cfg.segment_n = sp.at("n").get<std::size_t>();
    if (const auto it = sp.find("metric"); it != sp.end())
      cfg.segment_metric = metric_from(it->get<std::string>());
  } else if (cfg.space_kind == "carpet") {
    maybe(sp, "levels", cfg.carpet.levels);
    maybe(sp, "h", cfg.carpet.h);
    if (const auto it = sp.find("hole_fraction"); it != sp.end())
      cfg.carpet.hole_fraction = it->get<std::vector<double>>();
  } else if (cfg.space_kind == "file") {
    cfg.space_file = sp.at("path").get<std::string>();
  } else {
    throw std::invalid_argument("unknown space kind '" + cfg.space_kind + "'");
  }

  if (const auto it = j.find("poles"); it != j.end()) {
    for (const json& p : *it) {
      PolePairSpec spec;
      if (const auto x = p.find("x"); x != p.end())
        spec.x_coords = x->get<std::vector<double>>();
      if (const auto y = p.find("y"); y != p.end())
        spec.y_coords = y->get<std::vector<double>>();
      if (const auto x = p.find("x_id"); x != p.end())
        spec.x_id = x->get<std::int64_t>();
      if (const auto y = p.find("y_id"); y != p.end())
        spec.y_id = y->get<std::int64_t>();
      cfg.poles.push_back(std::move(spec));
    }
  }

  maybe(j, "L", cfg.L);
  maybe(j, "delta", cfg.delta);
  maybe(j, "k_paths", cfg.k_paths);
  maybe(j, "lambda", cfg.lambda);
  maybe(j, "C", cfg.C);
  maybe(j, "iso_r", cfg.iso_r);
  maybe(j, "seed", cfg.seed);
  maybe(j, "jobs", cfg.jobs);
  maybe(j, "plots", cfg.plots);
  maybe(j, "commands", cfg.commands);
  maybe(j, "regions", cfg.regions);
  if (const auto it = j.find("candidates"); it != j.end()) {
    maybe(*it, "ball_centers", cfg.candidates.ball_centers);
    maybe(*it, "halfspace_cuts", cfg.candidates.halfspace_cuts);
    maybe(*it, "band_levels", cfg.candidates.band_levels);
    maybe(*it, "separator_levels", cfg.candidates.separator_levels);
    maybe(*it, "random_unions", cfg.candidates.random_unions);
    maybe(*it, "blobs_per_union", cfg.candidates.blobs_per_union);
  }
  cfg.candidates.seed = cfg.seed;
  if (const auto it = j.find("tolerances"); it != j.end())
    cfg.tolerances = *it;
  else
    cfg.tolerances = json::object();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  return parse_config(nlohmann::json::parse(in));
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string dump = cfg.raw.dump();
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : dump) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

PointCloudSpace build_space(const ExperimentConfig& cfg) {
  if (cfg.space_kind == "grid") return euclidean_grid(cfg.grid);
  if (cfg.space_kind == "glued-planes") return glued_planes(cfg.glued);
  if (cfg.space_kind == "segment")
    return segment(cfg.segment_n, cfg.segment_metric);
  if (cfg.space_kind == "carpet") return carpet_like(cfg.carpet);
  return load_point_cloud_file(cfg.space_file);
}

std::pair<VertexId, VertexId> resolve_poles(const PointCloudSpace& space,
                                            const PolePairSpec& spec) {
  auto resolve = [&](const std::vector<double>& coords,
                     const std::optional<std::int64_t>& id,
                     const char* which) -> VertexId {
    if (id.has_value()) {
      for (VertexId v = 0; v < space.vertex_count(); ++v)
        if (space.external_id(v) == *id) return v;
      throw std::invalid_argument(std::string("unknown pole id for ") + which);
    }
    if (coords.empty())
      throw std::invalid_argument(std::string("pole ") + which +
                                  " needs coords or an id");
    return nearest_vertex_to(space, coords);
  };
  return {resolve(spec.x_coords, spec.x_id, "x"),
          resolve(spec.y_coords, spec.y_id, "y")};
}

}  // namespace picheck
