#include "picheck/netflow.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace picheck {

namespace {

// Residual graph for unit-pair arcs: forward arc 2k mirrors input arc k,
// odd index 2k+1 is its reverse.
struct Residual {
  std::vector<std::uint32_t> head;
  std::vector<double> cap;
  std::vector<std::vector<std::uint32_t>> out;  // per node, residual arc ids

  Residual(std::size_t nodes, std::span<const NetArc> arcs) : out(nodes) {
    head.reserve(arcs.size() * 2);
    cap.reserve(arcs.size() * 2);
    for (const auto& a : arcs) {
      out[a.tail].push_back(static_cast<std::uint32_t>(head.size()));
      head.push_back(a.head);
      cap.push_back(a.capacity);
      out[a.head].push_back(static_cast<std::uint32_t>(head.size()));
      head.push_back(a.tail);
      cap.push_back(0.0);
    }
  }
};

}  // namespace

std::pair<NetGraph, std::vector<NetArc>> build_net_graph(
    const PointCloudSpace& space, VertexId x, VertexId y, double delta, double L) {
  double dxy = space.distance(x, y);
  if (!(delta > 0.0) || delta >= dxy)
    throw std::invalid_argument("delta must lie in (0, d(x,y))");
  if (!(L >= 0.5)) throw std::invalid_argument("truncation L must be >= 1/2");

  NetGraph net;
  net.delta = delta;
  net.L = L;
  net.x = x;
  net.y = y;
  net.scale_flagged = delta >= dxy / 4.0;

  std::vector<VertexId> full_net = delta_net(space, delta, x, y);

  DistanceField fx(space, x), fy(space, y);
  const double support = 2.0 * L * dxy;
  for (VertexId p : full_net) {
    if (p == x || p == y || fx[p] <= support) net.points.push_back(p);
  }
  std::sort(net.points.begin(), net.points.end());
  for (std::uint32_t i = 0; i < net.points.size(); ++i) {
    if (net.points[i] == x) net.source = i;
    if (net.points[i] == y) net.sink = i;
  }

  // Per-point kernel factors against each pole (the pole's own entry is a
  // placeholder zero; arc assembly substitutes the far endpoint's value).
  const std::size_t k = net.points.size();
  std::vector<double> ball_over_delta(k), x_factor(k), y_factor(k);
  for (std::size_t i = 0; i < k; ++i) {
    VertexId p = net.points[i];
    ball_over_delta[i] = local_ball_mass(space, p, delta) / delta;
    double dx = fx[p], dy = fy[p];
    x_factor[i] = dx > 0.0 ? dx / fx.ball_mass(dx) : 0.0;
    y_factor[i] = dy > 0.0 ? dy / fy.ball_mass(dy) : 0.0;
  }

  // Pairs within 4 delta.  Net distances come from truncated per-point fields
  // on graph metrics and direct evaluation on ambient ones.
  std::vector<NetArc> arcs;
  // At its own pole the kernel ratio d/m(B_d) is 0/0; resolve it with the
  // value at the arc's far endpoint.  Zeroing it instead would let the cut
  // around a pole shrink linearly with delta and lose the scale-independent
  // cut bound the construction exists to certify.
  auto xf = [&](std::uint32_t tail, std::uint32_t far) {
    return tail == net.source ? x_factor[far] : x_factor[tail];
  };
  auto yf = [&](std::uint32_t head, std::uint32_t far) {
    return head == net.sink ? y_factor[far] : y_factor[head];
  };
  auto try_pair = [&](std::uint32_t i, std::uint32_t j, double dij) {
    if (!(dij < 4.0 * delta)) return;
    double cap_ij = ball_over_delta[i] * xf(i, j) + ball_over_delta[j] * yf(j, i);
    double cap_ji = ball_over_delta[j] * xf(j, i) + ball_over_delta[i] * yf(i, j);
    if (cap_ij > 0.0)
      arcs.push_back(NetArc{i, j, cap_ij, dij});
    if (cap_ji > 0.0)
      arcs.push_back(NetArc{j, i, cap_ji, dij});
  };

  if (space.metric_kind() == MetricKind::AmbientEuclidean) {
    for (std::uint32_t i = 0; i < k; ++i)
      for (std::uint32_t j = i + 1; j < k; ++j)
        try_pair(i, j, space.coord_distance(net.points[i], net.points[j]));
  } else {
    // Truncated Dijkstra from each net point over the space graph.
    std::vector<std::uint32_t> pos_of(space.vertex_count(),
                                      std::numeric_limits<std::uint32_t>::max());
    for (std::uint32_t i = 0; i < k; ++i) pos_of[net.points[i]] = i;
    const double radius = 4.0 * delta;
    std::vector<double> dist(space.vertex_count(), kInf);
    std::vector<VertexId> touched;
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (std::uint32_t i = 0; i < k; ++i) {
      VertexId src = net.points[i];
      dist[src] = 0.0;
      touched.push_back(src);
      heap.push({0.0, src});
      while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        std::uint32_t j = pos_of[v];
        if (j != std::numeric_limits<std::uint32_t>::max() && j > i)
          try_pair(i, j, d);
        for (const auto& nb : space.neighbors(v)) {
          double nd = d + nb.length;
          if (nd >= radius || nd >= dist[nb.to]) continue;
          dist[nb.to] = nd;
          touched.push_back(nb.to);
          heap.push({nd, nb.to});
        }
      }
      for (VertexId v : touched) dist[v] = kInf;
      touched.clear();
    }
  }

  // Deterministic arc order.
  std::sort(arcs.begin(), arcs.end(), [](const NetArc& a, const NetArc& b) {
    return a.tail < b.tail || (a.tail == b.tail && a.head < b.head);
  });

  // Connectivity of x and y through the arcs.
  std::vector<std::uint8_t> seen(k, 0);
  std::vector<std::vector<std::uint32_t>> adj(k);
  for (const auto& a : arcs) adj[a.tail].push_back(a.head);
  std::queue<std::uint32_t> bfs;
  bfs.push(net.source);
  seen[net.source] = 1;
  while (!bfs.empty()) {
    auto v = bfs.front();
    bfs.pop();
    for (auto w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        bfs.push(w);
      }
  }
  if (!seen[net.sink])
    throw std::runtime_error("no discrete path at scale delta");

  return {std::move(net), std::move(arcs)};
}

Flow max_flow(const NetGraph& net, std::span<const NetArc> arcs) {
  const std::size_t n = net.points.size();
  Residual res(n, arcs);
  const std::uint32_t s = net.source, t = net.sink;

  double cap_scale = 0.0;
  for (const auto& a : arcs) cap_scale = std::max(cap_scale, a.capacity);
  const double eps = cap_scale * 1e-14;

  Flow flow;
  flow.arc_flow.assign(arcs.size(), 0.0);
  if (s == t) return flow;

  // Shortest-augmenting-path schedule: BFS levels, then blocking flow along
  // fewest-edge paths before relabelling.
  std::vector<std::int32_t> level(n);
  std::vector<std::uint32_t> iter(n);
  auto bfs_levels = [&]() {
    std::fill(level.begin(), level.end(), -1);
    std::queue<std::uint32_t> q;
    q.push(s);
    level[s] = 0;
    while (!q.empty()) {
      auto v = q.front();
      q.pop();
      for (auto id : res.out[v]) {
        if (res.cap[id] > eps && level[res.head[id]] < 0) {
          level[res.head[id]] = level[v] + 1;
          q.push(res.head[id]);
        }
      }
    }
    return level[t] >= 0;
  };

  std::vector<std::uint32_t> path_arcs;
  auto dfs_augment = [&](auto&& self, std::uint32_t v, double pushed) -> double {
    if (v == t) return pushed;
    for (std::uint32_t& i = iter[v]; i < res.out[v].size(); ++i) {
      std::uint32_t id = res.out[v][i];
      std::uint32_t w = res.head[id];
      if (res.cap[id] > eps && level[w] == level[v] + 1) {
        double got = self(self, w, std::min(pushed, res.cap[id]));
        if (got > 0.0) {
          res.cap[id] -= got;
          res.cap[id ^ 1] += got;
          return got;
        }
      }
    }
    return 0.0;
  };

  while (bfs_levels()) {
    std::fill(iter.begin(), iter.end(), 0u);
    while (true) {
      double got = dfs_augment(dfs_augment, s, kInf);
      if (!(got > 0.0)) break;
      flow.value += got;
    }
  }

  // Net flow per input arc: forward pushed minus residual give-back.
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    double f = arcs[a].capacity - res.cap[2 * a];
    flow.arc_flow[a] = std::max(0.0, f);
  }
  return flow;
}

Cut min_cut(const NetGraph& net, std::span<const NetArc> arcs) {
  const std::size_t n = net.points.size();
  Flow flow = max_flow(net, arcs);

  // Residual reachability with the flow re-applied.
  Residual res(n, arcs);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    res.cap[2 * a] -= flow.arc_flow[a];
    res.cap[2 * a + 1] += flow.arc_flow[a];
  }
  double cap_scale = 0.0;
  for (const auto& a : arcs) cap_scale = std::max(cap_scale, a.capacity);
  const double eps = cap_scale * 1e-12;

  std::vector<std::uint8_t> seen(n, 0);
  std::queue<std::uint32_t> q;
  q.push(net.source);
  seen[net.source] = 1;
  while (!q.empty()) {
    auto v = q.front();
    q.pop();
    for (auto id : res.out[v]) {
      if (res.cap[id] > eps && !seen[res.head[id]]) {
        seen[res.head[id]] = 1;
        q.push(res.head[id]);
      }
    }
  }

  Cut cut;
  for (std::uint32_t v = 0; v < n; ++v)
    if (seen[v]) cut.source_side.push_back(v);
  cut.value = cut_value(arcs, cut.source_side, n);
  return cut;
}

double cut_value(std::span<const NetArc> arcs, std::span<const std::uint32_t> side,
                 std::size_t point_count) {
  std::vector<std::uint8_t> in_side(point_count, 0);
  for (auto v : side) in_side[v] = 1;
  double value = 0.0;
  for (const auto& a : arcs)
    if (in_side[a.tail] && !in_side[a.head]) value += a.capacity;
  return value;
}

namespace {

// Removes circulation from a flow so greedy stripping decomposes it exactly:
// repeatedly finds a positive-flow cycle by DFS and subtracts its bottleneck.
void cancel_cycles(std::size_t n, std::span<const NetArc> arcs,
                   std::vector<double>& f, double eps) {
  std::vector<std::vector<std::uint32_t>> out(n);
  for (std::uint32_t a = 0; a < arcs.size(); ++a) out[arcs[a].tail].push_back(a);

  std::vector<std::uint32_t> arc_into(n);
  std::vector<std::int8_t> state(n);
  for (;;) {
    std::fill(state.begin(), state.end(), 0);
    bool found = false;
    std::vector<std::uint32_t> stack;
    auto dfs = [&](auto&& self, std::uint32_t v) -> std::uint32_t {
      state[v] = 1;
      for (auto a : out[v]) {
        if (f[a] <= eps) continue;
        auto w = arcs[a].head;
        if (state[w] == 1) {
          arc_into[w] = a;
          return w;  // cycle closes at w
        }
        if (state[w] == 0) {
          arc_into[w] = a;
          auto c = self(self, w);
          if (c != std::numeric_limits<std::uint32_t>::max()) return c;
        }
      }
      state[v] = 2;
      return std::numeric_limits<std::uint32_t>::max();
    };
    for (std::uint32_t v = 0; v < n && !found; ++v) {
      if (state[v] != 0) continue;
      auto c = dfs(dfs, v);
      if (c == std::numeric_limits<std::uint32_t>::max()) continue;
      // walk the cycle backwards from c
      std::vector<std::uint32_t> cyc;
      std::uint32_t w = c;
      do {
        std::uint32_t a = arc_into[w];
        cyc.push_back(a);
        w = arcs[a].tail;
      } while (w != c);
      double bottleneck = kInf;
      for (auto a : cyc) bottleneck = std::min(bottleneck, f[a]);
      for (auto a : cyc) f[a] -= bottleneck;
      found = true;
    }
    if (!found) return;
    (void)stack;
  }
}

}  // namespace

DiscretePencil flow_to_pencil(const NetGraph& net, std::span<const NetArc> arcs,
                              const Flow& flow) {
  DiscretePencil pencil;
  pencil.flow_value = flow.value;
  if (!(flow.value > 0.0)) return pencil;

  const std::size_t n = net.points.size();
  std::vector<double> f = flow.arc_flow;
  const double eps = flow.value * 1e-12;
  cancel_cycles(n, arcs, f, eps);

  std::vector<std::vector<std::uint32_t>> out(n);
  for (std::uint32_t a = 0; a < arcs.size(); ++a) out[arcs[a].tail].push_back(a);

  // Strip source->sink paths along fewest-hop routes in the flow support.
  std::vector<std::int32_t> parent_arc(n);
  for (;;) {
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    std::queue<std::uint32_t> q;
    q.push(net.source);
    parent_arc[net.source] = -2;
    while (!q.empty() && parent_arc[net.sink] == -1) {
      auto v = q.front();
      q.pop();
      for (auto a : out[v]) {
        if (f[a] <= eps) continue;
        auto w = arcs[a].head;
        if (parent_arc[w] == -1) {
          parent_arc[w] = static_cast<std::int32_t>(a);
          q.push(w);
        }
      }
    }
    if (parent_arc[net.sink] == -1) break;

    PencilPath path;
    std::vector<std::uint32_t> rev_arcs;
    std::uint32_t v = net.sink;
    double bottleneck = kInf;
    while (v != net.source) {
      auto a = static_cast<std::uint32_t>(parent_arc[v]);
      rev_arcs.push_back(a);
      bottleneck = std::min(bottleneck, f[a]);
      v = arcs[a].tail;
    }
    std::reverse(rev_arcs.begin(), rev_arcs.end());
    path.vertices.push_back(net.source);
    for (auto a : rev_arcs) {
      f[a] -= bottleneck;
      path.vertices.push_back(arcs[a].head);
      path.length += arcs[a].length;
    }
    path.raw_weight = bottleneck;
    path.weight = bottleneck / flow.value;
    pencil.paths.push_back(std::move(path));
  }
  return pencil;
}

PencilRatio pencil_inequality_ratio(const PointCloudSpace& space,
                                    const NetGraph& net,
                                    std::span<const NetArc> arcs,
                                    const DiscretePencil& pencil,
                                    std::span<const double> g,
                                    const RieszMeasure& mu) {
  (void)arcs;
  if (g.size() != space.vertex_count())
    throw std::invalid_argument("field size mismatch");
  for (double v : g)
    if (v < 0.0) throw std::invalid_argument("pencil ratio needs g >= 0");

  PencilRatio out;
  for (const auto& path : pencil.paths) {
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
      VertexId u = net.points[path.vertices[i]];
      VertexId v = net.points[path.vertices[i + 1]];
      double len = space.distance(u, v);
      integral += 0.5 * (g[u] + g[v]) * len;
    }
    out.curve_side += path.weight * integral;
  }
  for (std::size_t v = 0; v < g.size(); ++v) out.measure_side += g[v] * mu.weight[v];
  if (out.measure_side > 0.0)
    out.ratio = out.curve_side / out.measure_side;
  else
    out.ratio = out.curve_side == 0.0 ? 0.0 : kInf;
  return out;
}

double pencil_constant(const PointCloudSpace& space, const NetGraph& net,
                       std::span<const NetArc> arcs, const DiscretePencil& pencil,
                       const RieszMeasure& mu) {
  // Both sides of the ratio are linear in g, so the sup over nonnegative g is
  // attained on a coordinate ray.  Coordinates with zero measure weight are
  // the poles; those are excluded (the kernel vanishes there by convention).
  std::vector<std::uint8_t> touched(space.vertex_count(), 0);
  for (const auto& path : pencil.paths)
    for (auto p : path.vertices) touched[net.points[p]] = 1;

  // Single-indicator ratio at vertex z: curve side collects half the length
  // of every pencil arc incident to z, weighted by path weights.
  std::vector<double> incident(space.vertex_count(), 0.0);
  for (const auto& path : pencil.paths) {
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
      VertexId u = net.points[path.vertices[i]];
      VertexId v = net.points[path.vertices[i + 1]];
      double len = space.distance(u, v);
      incident[u] += 0.5 * path.weight * len;
      incident[v] += 0.5 * path.weight * len;
    }
  }

  double best = 0.0;
  for (std::size_t z = 0; z < space.vertex_count(); ++z) {
    if (!touched[z]) continue;
    if (z == mu.x || z == mu.y) continue;
    if (incident[z] <= 0.0) continue;
    if (mu.weight[z] > 0.0) best = std::max(best, incident[z] / mu.weight[z]);
  }

  // Uniform field as a cross-check member of the suite.
  std::vector<double> ones(space.vertex_count(), 1.0);
  PencilRatio uniform =
      pencil_inequality_ratio(space, net, arcs, pencil, ones, mu);
  if (std::isfinite(uniform.ratio)) best = std::max(best, uniform.ratio);
  return best;
}

}  // namespace picheck
