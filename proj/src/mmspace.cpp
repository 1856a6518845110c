#include "picheck/mmspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace picheck {

namespace {

double sq(double x) { return x * x; }

struct HeapItem {
  double d;
  VertexId v;
  bool operator>(const HeapItem& o) const {
    return d > o.d || (d == o.d && v > o.v);
  }
};

using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>>;

}  // namespace

PointCloudSpace::PointCloudSpace(MetricKind metric, int dim, double resolution,
                                 std::vector<double> coords,
                                 std::vector<double> weights,
                                 std::vector<Edge> edges,
                                 std::vector<std::int64_t> external_ids)
    : metric_(metric),
      dim_(dim),
      h_(resolution),
      coords_(std::move(coords)),
      weights_(std::move(weights)),
      edges_(std::move(edges)),
      external_ids_(std::move(external_ids)) {
  const std::size_t n = weights_.size();
  if (n == 0) throw std::invalid_argument("point cloud is empty");
  if (dim_ < 0 || dim_ > 8) throw std::invalid_argument("unsupported coordinate dimension");
  if (coords_.size() != n * static_cast<std::size_t>(dim_))
    throw std::invalid_argument("coordinate array size mismatch");
  if (!(h_ > 0.0) || !std::isfinite(h_))
    throw std::invalid_argument("resolution must be positive and finite");
  if (metric_ == MetricKind::AmbientEuclidean && dim_ == 0)
    throw std::invalid_argument("ambient metric requires coordinates");
  if (external_ids_.empty()) {
    external_ids_.resize(n);
    std::iota(external_ids_.begin(), external_ids_.end(), 0);
  }
  if (external_ids_.size() != n)
    throw std::invalid_argument("external id array size mismatch");

  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("vertex weights must be positive and finite");
    total_mass_ += w;
  }

  for (auto& e : edges_) {
    if (e.u >= n || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loop edge");
    if (e.length < 0.0) e.length = coord_distance(e.u, e.v);
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw std::invalid_argument("edge length must be positive and finite");
    min_edge_length_ = std::min(min_edge_length_, e.length);
  }

  // CSR over both directions.
  std::vector<std::uint32_t> deg(n, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  adj_offset_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) adj_offset_[i + 1] = adj_offset_[i] + deg[i];
  adj_.resize(adj_offset_[n]);
  std::vector<std::uint32_t> cursor(adj_offset_.begin(), adj_offset_.end() - 1);
  for (std::uint32_t ei = 0; ei < edges_.size(); ++ei) {
    const auto& e = edges_[ei];
    adj_[cursor[e.u]++] = Neighbor{e.v, e.length, ei};
    adj_[cursor[e.v]++] = Neighbor{e.u, e.length, ei};
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto begin = adj_.begin() + adj_offset_[i];
    auto end = adj_.begin() + adj_offset_[i + 1];
    std::sort(begin, end, [](const Neighbor& a, const Neighbor& b) {
      return a.to < b.to || (a.to == b.to && a.edge < b.edge);
    });
  }

  if (metric_ == MetricKind::GraphPath && edges_.empty() && n > 1)
    throw std::invalid_argument("graph metric with no edges");
}

std::span<const double> PointCloudSpace::coords(VertexId i) const {
  return {coords_.data() + static_cast<std::size_t>(i) * dim_,
          static_cast<std::size_t>(dim_)};
}

std::span<const Neighbor> PointCloudSpace::neighbors(VertexId i) const {
  return {adj_.data() + adj_offset_[i], adj_.data() + adj_offset_[i + 1]};
}

double PointCloudSpace::coord_distance(VertexId i, VertexId j) const {
  double s = 0.0;
  const double* a = coords_.data() + static_cast<std::size_t>(i) * dim_;
  const double* b = coords_.data() + static_cast<std::size_t>(j) * dim_;
  for (int k = 0; k < dim_; ++k) s += sq(a[k] - b[k]);
  return std::sqrt(s);
}

double PointCloudSpace::distance(VertexId i, VertexId j) const {
  if (i == j) return 0.0;
  if (metric_ == MetricKind::AmbientEuclidean) return coord_distance(i, j);
  DistanceField f(*this, i);
  return f[j];
}

// --- DistanceField -----------------------------------------------------------

DistanceField::DistanceField(const PointCloudSpace& space, VertexId source) {
  const VertexId src[1] = {source};
  *this = DistanceField(space, std::span<const VertexId>(src, 1));
}

DistanceField::DistanceField(const PointCloudSpace& space,
                             std::span<const VertexId> sources) {
  const std::size_t n = space.vertex_count();
  if (sources.empty()) throw std::invalid_argument("distance field needs a source");
  for (VertexId s : sources)
    if (s >= n) throw std::invalid_argument("source vertex out of range");
  dist_.assign(n, kInf);

  if (space.metric_kind() == MetricKind::AmbientEuclidean) {
    for (std::size_t v = 0; v < n; ++v) {
      double best = kInf;
      for (VertexId s : sources)
        best = std::min(best, space.coord_distance(s, static_cast<VertexId>(v)));
      dist_[v] = best;
    }
  } else {
    MinHeap heap;
    for (VertexId s : sources) {
      dist_[s] = 0.0;
      heap.push({0.0, s});
    }
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > dist_[v]) continue;
      for (const auto& nb : space.neighbors(v)) {
        double nd = d + nb.length;
        if (nd < dist_[nb.to]) {
          dist_[nb.to] = nd;
          heap.push({nd, nb.to});
        }
      }
    }
  }
  build_index(space);
}

void DistanceField::build_index(const PointCloudSpace& space) {
  const std::size_t n = dist_.size();
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  std::sort(order_.begin(), order_.end(), [&](VertexId a, VertexId b) {
    if (dist_[a] != dist_[b]) return dist_[a] < dist_[b];
    return a < b;
  });
  sorted_.resize(n);
  prefix_.resize(n + 1);
  prefix_[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sorted_[k] = dist_[order_[k]];
    prefix_[k + 1] = prefix_[k] + space.weight(order_[k]);
  }
}

double DistanceField::ball_mass(double r) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), r);
  return prefix_[static_cast<std::size_t>(it - sorted_.begin())];
}

double DistanceField::ball_mass_closed(double r, double tol) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), r + tol);
  return prefix_[static_cast<std::size_t>(it - sorted_.begin())];
}

std::vector<VertexId> DistanceField::ball(double r) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), r);
  return {order_.begin(), order_.begin() + (it - sorted_.begin())};
}

// --- basic queries -----------------------------------------------------------

std::vector<VertexId> ball(const PointCloudSpace& space, VertexId center, double r) {
  if (center >= space.vertex_count())
    throw std::invalid_argument("ball center out of range");
  if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
  DistanceField f(space, center);
  return f.ball(r);
}

double measure(const PointCloudSpace& space, std::span<const VertexId> vertices) {
  double s = 0.0;
  for (VertexId v : vertices) s += space.weight(v);
  return s;
}

double local_ball_mass(const PointCloudSpace& space, VertexId center, double r) {
  if (space.metric_kind() == MetricKind::AmbientEuclidean) {
    const std::size_t n = space.vertex_count();
    double s = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      if (space.coord_distance(center, static_cast<VertexId>(v)) < r)
        s += space.weight(static_cast<VertexId>(v));
    return s;
  }
  // Truncated Dijkstra: never expands past radius r.
  std::map<VertexId, double> dist;
  MinHeap heap;
  dist[center] = 0.0;
  heap.push({0.0, center});
  double s = 0.0;
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    auto it = dist.find(v);
    if (it != dist.end() && d > it->second) continue;
    s += space.weight(v);
    for (const auto& nb : space.neighbors(v)) {
      double nd = d + nb.length;
      if (nd >= r) continue;
      auto jt = dist.find(nb.to);
      if (jt == dist.end() || nd < jt->second) {
        dist[nb.to] = nd;
        heap.push({nd, nb.to});
      }
    }
  }
  return s;
}

DoublingEstimate doubling_estimate(const PointCloudSpace& space,
                                   std::span<const VertexId> centers,
                                   std::span<const double> radii) {
  if (centers.empty() || radii.empty())
    throw std::invalid_argument("doubling estimate needs centers and radii");
  DoublingEstimate est;
  est.centers_used = centers.size();
  est.radii_used = radii.size();
  for (VertexId c : centers) {
    DistanceField f(space, c);
    for (double r : radii) {
      if (!(r > 0.0)) throw std::invalid_argument("doubling radius must be positive");
      double mr = f.ball_mass(r);
      if (mr <= 0.0) continue;  // center itself is always inside; cannot happen
      double ratio = f.ball_mass(2.0 * r) / mr;
      if (ratio > est.value) {
        est.value = ratio;
        est.argmax_center = c;
        est.argmax_radius = r;
      }
    }
  }
  return est;
}

DoublingEstimate doubling_estimate(const PointCloudSpace& space,
                                   std::size_t max_centers,
                                   std::size_t radii_count) {
  const std::size_t n = space.vertex_count();
  std::vector<VertexId> centers;
  std::size_t stride = std::max<std::size_t>(1, n / std::max<std::size_t>(1, max_centers));
  for (std::size_t v = 0; v < n; v += stride) centers.push_back(static_cast<VertexId>(v));

  // Rough diameter from the first center's farthest point.
  DistanceField f0(space, centers.front());
  double diam = f0.sorted_distances().back();
  if (!std::isfinite(diam) || diam <= 0.0) diam = 2.0 * space.resolution();

  double lo = 2.0 * space.resolution();
  double hi = std::max(lo, diam / 2.0);
  std::vector<double> radii;
  if (radii_count < 2 || hi <= lo) {
    radii.push_back(lo);
  } else {
    double step = std::pow(hi / lo, 1.0 / static_cast<double>(radii_count - 1));
    double r = lo;
    for (std::size_t i = 0; i < radii_count; ++i, r *= step) radii.push_back(r);
  }
  return doubling_estimate(space, centers, radii);
}

QuasiconvexityEstimate quasiconvexity_estimate(
    const PointCloudSpace& space,
    std::span<const std::pair<VertexId, VertexId>> pairs) {
  QuasiconvexityEstimate est;
  if (space.metric_kind() == MetricKind::GraphPath) return est;  // geodesic by construction
  for (const auto& [u, v] : pairs) {
    if (u == v) continue;
    // Graph shortest-path length over the edge set vs ambient distance.
    const std::size_t n = space.vertex_count();
    std::vector<double> dist(n, kInf);
    MinHeap heap;
    dist[u] = 0.0;
    heap.push({0.0, u});
    while (!heap.empty()) {
      auto [d, w] = heap.top();
      heap.pop();
      if (d > dist[w]) continue;
      if (w == v) break;
      for (const auto& nb : space.neighbors(w)) {
        double nd = d + nb.length;
        if (nd < dist[nb.to]) {
          dist[nb.to] = nd;
          heap.push({nd, nb.to});
        }
      }
    }
    double ratio = dist[v] / space.coord_distance(u, v);
    if (!std::isfinite(ratio)) {
      est.finite = false;
      est.value = kInf;
      est.worst_u = u;
      est.worst_v = v;
      return est;
    }
    if (ratio > est.value) {
      est.value = ratio;
      est.worst_u = u;
      est.worst_v = v;
    }
  }
  return est;
}

std::vector<double> local_lip(const PointCloudSpace& space,
                              std::span<const double> u) {
  if (u.size() != space.vertex_count())
    throw std::invalid_argument("field size mismatch");
  std::vector<double> lip(space.vertex_count(), 0.0);
  for (std::size_t v = 0; v < space.vertex_count(); ++v) {
    double best = 0.0;
    for (const auto& nb : space.neighbors(static_cast<VertexId>(v)))
      best = std::max(best, std::abs(u[nb.to] - u[v]) / nb.length);
    lip[v] = best;  // isolated vertices keep 0
  }
  return lip;
}

std::vector<VertexId> delta_net(const PointCloudSpace& space, double delta,
                                VertexId x, VertexId y) {
  const std::size_t n = space.vertex_count();
  if (x >= n || y >= n) throw std::invalid_argument("net seed out of range");
  if (x == y) throw std::invalid_argument("net seeds must differ");
  double dxy = space.distance(x, y);
  if (!(delta > 0.0) || delta >= dxy)
    throw std::invalid_argument("delta must lie in (0, d(x,y))");

  std::vector<double> mindist(n, kInf);
  std::vector<VertexId> net;

  auto relax_ambient = [&](VertexId p) {
    for (std::size_t v = 0; v < n; ++v) {
      if (mindist[v] < delta) continue;  // settled, cannot be selected again
      double d = space.coord_distance(p, static_cast<VertexId>(v));
      if (d < mindist[v]) mindist[v] = d;
    }
  };

  // Pruned multi-round Dijkstra: expansion stops where the new source cannot
  // improve; mindist is 1-Lipschitz along edges, which makes the prune safe.
  auto relax_graph = [&](VertexId p) {
    MinHeap heap;
    std::map<VertexId, double> dp;  // tentative distances from p, sparse
    dp[p] = 0.0;
    heap.push({0.0, p});
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      auto it = dp.find(v);
      if (it == dp.end() || d > it->second) continue;
      if (d < mindist[v]) mindist[v] = d;
      for (const auto& nb : space.neighbors(v)) {
        double nd = d + nb.length;
        if (nd >= mindist[nb.to]) continue;  // cannot improve there or beyond
        auto jt = dp.find(nb.to);
        if (jt == dp.end() || nd < jt->second) {
          dp[nb.to] = nd;
          heap.push({nd, nb.to});
        }
      }
    }
  };

  auto insert = [&](VertexId p) {
    net.push_back(p);
    if (space.metric_kind() == MetricKind::AmbientEuclidean)
      relax_ambient(p);
    else
      relax_graph(p);
  };

  insert(x);
  insert(y);
  for (;;) {
    double dmax = -1.0;
    VertexId arg = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (mindist[v] > dmax) {
        dmax = mindist[v];
        arg = static_cast<VertexId>(v);
      }
    }
    if (dmax < delta) break;
    insert(arg);
  }
  return net;
}

std::vector<VertexId> boundary_vertices(const PointCloudSpace& space) {
  const std::size_t n = space.vertex_count();
  std::map<std::size_t, std::size_t> degree_hist;
  for (std::size_t v = 0; v < n; ++v)
    ++degree_hist[space.neighbors(static_cast<VertexId>(v)).size()];
  std::size_t modal = 0, modal_count = 0;
  for (auto [deg, cnt] : degree_hist) {
    if (cnt > modal_count) {
      modal_count = cnt;
      modal = deg;
    }
  }
  std::vector<VertexId> rim;
  for (std::size_t v = 0; v < n; ++v)
    if (space.neighbors(static_cast<VertexId>(v)).size() < modal)
      rim.push_back(static_cast<VertexId>(v));
  return rim;
}

std::vector<double> default_radius_schedule(double h, double rmax) {
  std::vector<double> out;
  for (double r = 2.0 * h; r <= rmax || out.empty(); r *= 2.0) {
    out.push_back(r);
    if (r > rmax) break;
  }
  return out;
}

// --- text format --------------------------------------------------------------

PointCloudSpace load_point_cloud(std::istream& in) {
  std::string line;
  bool have_header = false;
  int dim = 0;
  MetricKind metric = MetricKind::AmbientEuclidean;
  double h = 0.0;
  std::vector<std::int64_t> ids;
  std::vector<double> coords;
  std::vector<double> weights;
  struct RawEdge {
    std::int64_t u, v;
    double len;
  };
  std::vector<RawEdge> raw_edges;

  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "pointcloud") {
      std::string mk;
      if (!(ss >> dim >> mk >> h))
        throw std::invalid_argument("malformed pointcloud header at line " +
                                    std::to_string(lineno));
      if (mk == "euclidean")
        metric = MetricKind::AmbientEuclidean;
      else if (mk == "graph")
        metric = MetricKind::GraphPath;
      else
        throw std::invalid_argument("unknown metric kind: " + mk);
      have_header = true;
    } else if (tag == "v") {
      if (!have_header) throw std::invalid_argument("vertex before header");
      std::int64_t id;
      if (!(ss >> id)) throw std::invalid_argument("malformed vertex at line " +
                                                   std::to_string(lineno));
      for (int k = 0; k < dim; ++k) {
        double c;
        if (!(ss >> c)) throw std::invalid_argument("missing coordinate at line " +
                                                    std::to_string(lineno));
        coords.push_back(c);
      }
      double w;
      if (!(ss >> w)) throw std::invalid_argument("missing weight at line " +
                                                  std::to_string(lineno));
      ids.push_back(id);
      weights.push_back(w);
    } else if (tag == "e") {
      if (!have_header) throw std::invalid_argument("edge before header");
      RawEdge e{};
      if (!(ss >> e.u >> e.v)) throw std::invalid_argument("malformed edge at line " +
                                                           std::to_string(lineno));
      if (!(ss >> e.len)) e.len = -1.0;  // ambient default resolved later
      raw_edges.push_back(e);
    } else {
      throw std::invalid_argument("unknown record tag '" + tag + "' at line " +
                                  std::to_string(lineno));
    }
  }
  if (!have_header) throw std::invalid_argument("missing pointcloud header");

  std::map<std::int64_t, VertexId> remap;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!remap.emplace(ids[i], static_cast<VertexId>(i)).second)
      throw std::invalid_argument("duplicate vertex id " + std::to_string(ids[i]));
  }
  std::vector<Edge> edges;
  edges.reserve(raw_edges.size());
  for (const auto& e : raw_edges) {
    auto iu = remap.find(e.u), iv = remap.find(e.v);
    if (iu == remap.end() || iv == remap.end())
      throw std::invalid_argument("edge references unknown vertex id");
    edges.push_back(Edge{iu->second, iv->second, e.len});
  }
  return PointCloudSpace(metric, dim, h, std::move(coords), std::move(weights),
                         std::move(edges), std::move(ids));
}

PointCloudSpace load_point_cloud_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open point cloud file: " + path);
  return load_point_cloud(in);
}

namespace {

void format_double(std::ostream& out, double x) {
  char buf[32];
  int len = std::snprintf(buf, sizeof(buf), "%.17g", x);
  out.write(buf, len);
}

}  // namespace

void save_point_cloud(const PointCloudSpace& space, std::ostream& out) {
  out << "pointcloud " << space.dim() << ' '
      << (space.metric_kind() == MetricKind::AmbientEuclidean ? "euclidean" : "graph")
      << ' ';
  format_double(out, space.resolution());
  out << '\n';
  for (std::size_t v = 0; v < space.vertex_count(); ++v) {
    out << "v " << space.external_id(static_cast<VertexId>(v));
    for (double c : space.coords(static_cast<VertexId>(v))) {
      out << ' ';
      format_double(out, c);
    }
    out << ' ';
    format_double(out, space.weight(static_cast<VertexId>(v)));
    out << '\n';
  }
  for (const auto& e : space.edges()) {
    out << "e " << space.external_id(e.u) << ' ' << space.external_id(e.v) << ' ';
    format_double(out, e.length);
    out << '\n';
  }
}

void save_point_cloud_file(const PointCloudSpace& space, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write point cloud file: " + path);
  save_point_cloud(space, out);
}

std::string space_hash(const PointCloudSpace& space) {
  std::ostringstream ss;
  save_point_cloud(space, ss);
  std::string bytes = ss.str();
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace picheck
