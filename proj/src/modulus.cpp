#include "picheck/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "picheck/simplex.hpp"

namespace picheck {

namespace {

// Dijkstra from src avoiding masked vertices; returns parent edges for path
// recovery.  Deterministic: ties resolved by vertex id through the heap order.
struct Sssp {
  std::vector<double> dist;
  std::vector<std::int64_t> parent_edge;  // -1 none
};

Sssp dijkstra_masked(const PointCloudSpace& space, VertexId src,
                     const std::vector<std::uint8_t>& banned_vertex,
                     const std::set<std::pair<VertexId, std::uint32_t>>& banned_edges) {
  const std::size_t n = space.vertex_count();
  Sssp out;
  out.dist.assign(n, kInf);
  out.parent_edge.assign(n, -1);
  if (banned_vertex[src]) return out;
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  out.dist[src] = 0.0;
  heap.push({0.0, src});
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > out.dist[v]) continue;
    for (const auto& nb : space.neighbors(v)) {
      if (banned_vertex[nb.to]) continue;
      if (banned_edges.count({v, nb.edge})) continue;
      double nd = d + nb.length;
      if (nd < out.dist[nb.to]) {
        out.dist[nb.to] = nd;
        out.parent_edge[nb.to] = nb.edge;
        heap.push({nd, nb.to});
      }
    }
  }
  return out;
}

SpacePath recover_path(const PointCloudSpace& space, const Sssp& sssp, VertexId src,
                       VertexId dst) {
  SpacePath path;
  if (!std::isfinite(sssp.dist[dst])) return path;
  VertexId v = dst;
  while (v != src) {
    auto e = static_cast<std::uint32_t>(sssp.parent_edge[v]);
    path.edges.push_back(e);
    path.vertices.push_back(v);
    const Edge& ed = space.edges()[e];
    path.length += ed.length;
    v = ed.u == v ? ed.v : ed.u;
  }
  path.vertices.push_back(src);
  std::reverse(path.vertices.begin(), path.vertices.end());
  std::reverse(path.edges.begin(), path.edges.end());
  return path;
}

bool same_path(const SpacePath& a, const SpacePath& b) {
  return a.vertices == b.vertices;
}

}  // namespace

CurveFamily enumerate_quasigeodesics(const PointCloudSpace& space, VertexId x,
                                     VertexId y, double L, std::size_t k) {
  if (x == y) throw std::invalid_argument("path endpoints must differ");
  if (!(L >= 1.0)) throw std::invalid_argument("length factor L must be >= 1");
  if (k == 0) throw std::invalid_argument("need k >= 1");

  CurveFamily fam;
  fam.x = x;
  fam.y = y;
  fam.L = L;
  double dxy = space.distance(x, y);
  fam.length_bound = L * dxy * (1.0 + 1e-12);

  std::vector<std::uint8_t> no_ban(space.vertex_count(), 0);
  std::set<std::pair<VertexId, std::uint32_t>> no_edge_ban;
  Sssp base = dijkstra_masked(space, x, no_ban, no_edge_ban);
  SpacePath shortest = recover_path(space, base, x, y);
  if (shortest.vertices.empty())
    throw std::runtime_error("endpoints are graph-disconnected");
  if (shortest.length > fam.length_bound) return fam;  // nothing fits the bound
  fam.paths.push_back(shortest);

  // Deviation branching: candidates keyed by (length, vertex sequence) so the
  // output order is deterministic under length ties; the key identifies the
  // path, so the map also deduplicates rediscovered spurs.
  std::map<std::pair<double, std::vector<VertexId>>, SpacePath> candidates_set;
  auto push_candidate = [&](const SpacePath& p) {
    candidates_set.insert({{p.length, p.vertices}, p});
  };

  while (fam.paths.size() < k) {
    const SpacePath& last = fam.paths.back();
    // Spur from every prefix of the last accepted path.
    for (std::size_t spur_idx = 0; spur_idx + 1 < last.vertices.size(); ++spur_idx) {
      VertexId spur = last.vertices[spur_idx];
      // Root = prefix up to spur.
      SpacePath root;
      root.vertices.assign(last.vertices.begin(),
                           last.vertices.begin() + spur_idx + 1);
      for (std::size_t i = 0; i < spur_idx; ++i) {
        root.edges.push_back(last.edges[i]);
        root.length += space.edges()[last.edges[i]].length;
      }
      // Ban edges used by accepted paths sharing this root, and root interior.
      std::set<std::pair<VertexId, std::uint32_t>> banned_edges;
      for (const auto& p : fam.paths) {
        if (p.vertices.size() <= spur_idx) continue;
        if (!std::equal(root.vertices.begin(), root.vertices.end(),
                        p.vertices.begin()))
          continue;
        std::uint32_t e = p.edges[spur_idx];
        banned_edges.insert({spur, e});
      }
      std::vector<std::uint8_t> banned_vertex(space.vertex_count(), 0);
      for (std::size_t i = 0; i < spur_idx; ++i) banned_vertex[root.vertices[i]] = 1;

      Sssp sp = dijkstra_masked(space, spur, banned_vertex, banned_edges);
      if (!std::isfinite(sp.dist[y])) continue;
      SpacePath tail = recover_path(space, sp, spur, y);
      SpacePath full = root;
      full.vertices.insert(full.vertices.end(), tail.vertices.begin() + 1,
                           tail.vertices.end());
      full.edges.insert(full.edges.end(), tail.edges.begin(), tail.edges.end());
      full.length += tail.length;
      if (full.length > fam.length_bound) continue;
      bool dup = false;
      for (const auto& p : fam.paths)
        if (same_path(p, full)) {
          dup = true;
          break;
        }
      if (!dup) push_candidate(full);
    }
    if (candidates_set.empty()) break;
    auto it = candidates_set.begin();
    fam.paths.push_back(it->second);
    candidates_set.erase(it);
  }
  return fam;
}

ModulusResult modulus(const PointCloudSpace& space, const CurveFamily& family,
                      const RieszMeasure& mu) {
  if (family.paths.empty()) throw std::invalid_argument("empty curve family");

  // Variable set: edges touched by the family, in ascending edge id.
  std::set<std::uint32_t> edge_set;
  for (const auto& p : family.paths) {
    if (p.edges.empty() || !(p.length > 0.0))
      throw std::invalid_argument("degenerate path in curve family");
    for (auto e : p.edges) edge_set.insert(e);
  }
  std::vector<std::uint32_t> edges(edge_set.begin(), edge_set.end());
  std::map<std::uint32_t, std::size_t> col_of;
  for (std::size_t i = 0; i < edges.size(); ++i) col_of[edges[i]] = i;

  // Endpoint-averaged edge masses.
  std::vector<double> edge_mass(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = space.edges()[edges[i]];
    edge_mass[i] = 0.5 * (mu.weight[e.u] + mu.weight[e.v]);
  }

  // Packing dual: one variable per path, one row per edge:
  //   max sum y_p  s.t.  sum_{p contains e} len(e) y_p <= mass(e).
  const std::size_t np = family.paths.size();
  std::vector<std::vector<double>> rows(edges.size(), std::vector<double>(np, 0.0));
  for (std::size_t p = 0; p < np; ++p)
    for (auto e : family.paths[p].edges)
      rows[col_of[e]][p] += space.edges()[e].length;
  std::vector<double> b = edge_mass;
  std::vector<double> c(np, 1.0);

  auto lp = lp::solve_packing(rows, b, c);

  ModulusResult out;
  out.value = lp.objective;
  out.lp_pivots = lp.pivots;
  out.density.edges = edges;
  out.density.rho = lp.dual;

  // Admissibility of the recovered density over the family.
  out.density.worst_path_integral = kInf;
  for (const auto& p : family.paths) {
    double integral = 0.0;
    for (auto e : p.edges)
      integral += lp.dual[col_of[e]] * space.edges()[e].length;
    out.density.worst_path_integral = std::min(out.density.worst_path_integral, integral);
  }
  return out;
}

KeithBound keith_bound(const PointCloudSpace& space, VertexId x, VertexId y,
                       double L, std::span<const std::size_t> ks,
                       const RieszMeasure& mu) {
  if (ks.empty()) throw std::invalid_argument("need at least one enumeration size");
  KeithBound out;
  std::vector<std::size_t> sorted(ks.begin(), ks.end());
  std::sort(sorted.begin(), sorted.end());
  CurveFamily full = enumerate_quasigeodesics(space, x, y, L, sorted.back());
  for (std::size_t k : sorted) {
    CurveFamily sub;
    sub.x = full.x;
    sub.y = full.y;
    sub.L = full.L;
    sub.length_bound = full.length_bound;
    sub.paths.assign(full.paths.begin(),
                     full.paths.begin() + std::min(k, full.paths.size()));
    if (sub.paths.empty()) continue;
    out.ks.push_back(k);
    out.moduli.push_back(modulus(space, sub, mu).value);
  }
  if (!out.moduli.empty()) out.value = out.moduli.back();
  return out;
}

DualityCheck pencil_modulus_duality_check(
    const PointCloudSpace& space, const CurveFamily& family,
    const RieszMeasure& mu,
    std::span<const std::pair<std::vector<VertexId>, double>> pencil_paths,
    double pencil_constant) {
  DualityCheck out;
  out.pencil_constant = pencil_constant;
  out.modulus_value = modulus(space, family, mu).value;

  // Applicability: every pencil path must appear in the family (as a vertex
  // sequence).  The inequality compares against curves the modulus saw.
  out.applicable = true;
  for (const auto& [verts, w] : pencil_paths) {
    (void)w;
    bool found = false;
    for (const auto& p : family.paths)
      if (p.vertices == verts) {
        found = true;
        break;
      }
    if (!found) {
      out.applicable = false;
      break;
    }
  }
  if (pencil_constant > 0.0 && std::isfinite(pencil_constant))
    out.margin = out.modulus_value - 1.0 / pencil_constant;
  else
    out.margin = out.modulus_value;
  return out;
}

}  // namespace picheck
