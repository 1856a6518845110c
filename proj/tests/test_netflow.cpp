#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "picheck/netflow.hpp"
#include "test_util.hpp"

using namespace picheck;
using picheck_test::at;

namespace {

NetGraph bare_net(std::uint32_t n, std::uint32_t source, std::uint32_t sink) {
  NetGraph net;
  net.points.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) net.points[i] = i;
  net.source = source;
  net.sink = sink;
  net.delta = 0.1;
  net.L = 2.0;
  return net;
}

// Smallest cut over all source/sink partitions, by enumeration.
double exhaustive_min_cut(const NetGraph& net, const std::vector<NetArc>& arcs) {
  const std::uint32_t n = static_cast<std::uint32_t>(net.points.size());
  std::vector<std::uint32_t> rest;
  for (std::uint32_t i = 0; i < n; ++i)
    if (i != net.source && i != net.sink) rest.push_back(i);
  double best = kInf;
  for (std::uint64_t bits = 0; bits < (1ull << rest.size()); ++bits) {
    std::vector<std::uint32_t> side{net.source};
    for (std::size_t k = 0; k < rest.size(); ++k)
      if (bits >> k & 1) side.push_back(rest[k]);
    best = std::min(best, cut_value(arcs, side, n));
  }
  return best;
}

void check_conservation(const NetGraph& net, const std::vector<NetArc>& arcs,
                        const std::vector<double>& arc_flow, double value) {
  std::vector<double> net_out(net.points.size(), 0.0);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    net_out[arcs[a].tail] += arc_flow[a];
    net_out[arcs[a].head] -= arc_flow[a];
  }
  for (std::uint32_t i = 0; i < net.points.size(); ++i) {
    if (i == net.source)
      CHECK(net_out[i] == doctest::Approx(value).epsilon(1e-9));
    else if (i == net.sink)
      CHECK(net_out[i] == doctest::Approx(-value).epsilon(1e-9));
    else
      CHECK(std::abs(net_out[i]) <= 1e-9);
  }
}

}  // namespace

TEST_CASE("diamond network has flow value two") {
  auto net = bare_net(4, 0, 1);
  std::vector<NetArc> arcs{
      {0, 2, 1.0, 1.0},  // source -> a
      {0, 3, 2.0, 1.0},  // source -> b
      {2, 1, 2.0, 1.0},  // a -> sink
      {3, 1, 1.0, 1.0},  // b -> sink
  };
  auto flow = max_flow(net, arcs);
  CHECK(flow.value == doctest::Approx(2.0).epsilon(1e-12));
  check_conservation(net, arcs, flow.arc_flow, flow.value);

  auto cut = min_cut(net, arcs);
  CHECK(cut.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(cut_value(arcs, cut.source_side, net.points.size()) ==
        doctest::Approx(cut.value).epsilon(1e-12));
  CHECK(exhaustive_min_cut(net, arcs) == doctest::Approx(2.0).epsilon(1e-12));

  for (std::size_t a = 0; a < arcs.size(); ++a) {
    CHECK(flow.arc_flow[a] >= -1e-12);
    CHECK(flow.arc_flow[a] <= arcs[a].capacity + 1e-12);
  }
}

TEST_CASE("disconnected sink carries zero flow") {
  auto net = bare_net(3, 0, 1);
  std::vector<NetArc> arcs{{0, 2, 1.0, 1.0}};  // sink unreachable
  auto flow = max_flow(net, arcs);
  CHECK(flow.value == 0.0);
  CHECK(min_cut(net, arcs).value == doctest::Approx(0.0));
}

TEST_CASE("random networks satisfy duality against enumeration") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> cap(0.1, 2.0);
  for (int inst = 0; inst < 40; ++inst) {
    const std::uint32_t n = 4 + static_cast<std::uint32_t>(rng() % 7);
    auto net = bare_net(n, 0, 1);
    std::vector<NetArc> arcs;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j) {
        if (i == j) continue;
        if ((rng() & 3) == 0) arcs.push_back({i, j, cap(rng), 1.0});
      }
    auto flow = max_flow(net, arcs);
    const double brute = exhaustive_min_cut(net, arcs);
    CHECK(std::abs(flow.value - brute) <=
          1e-9 * std::max(1.0, std::abs(brute)));
    CHECK(std::abs(min_cut(net, arcs).value - brute) <=
          1e-9 * std::max(1.0, std::abs(brute)));
    check_conservation(net, arcs, flow.arc_flow, flow.value);
  }
}

TEST_CASE("pencil stripping reconstructs the flow") {
  auto net = bare_net(5, 0, 1);
  std::vector<NetArc> arcs{
      {0, 2, 1.5, 0.5}, {0, 3, 1.0, 0.7}, {2, 4, 1.0, 0.4},
      {2, 1, 0.8, 0.9}, {3, 4, 1.0, 0.3}, {4, 1, 1.7, 0.6},
  };
  auto flow = max_flow(net, arcs);
  REQUIRE(flow.value > 0.0);
  auto pencil = flow_to_pencil(net, arcs, flow);
  CHECK(pencil.flow_value == doctest::Approx(flow.value).epsilon(1e-12));

  double wsum = 0.0;
  std::vector<double> recon(arcs.size(), 0.0);
  for (const auto& p : pencil.paths) {
    REQUIRE(p.vertices.front() == net.source);
    REQUIRE(p.vertices.back() == net.sink);
    wsum += p.weight;
    double len = 0.0;
    for (std::size_t k = 0; k + 1 < p.vertices.size(); ++k) {
      bool found = false;
      for (std::size_t a = 0; a < arcs.size(); ++a)
        if (arcs[a].tail == p.vertices[k] && arcs[a].head == p.vertices[k + 1]) {
          recon[a] += p.raw_weight;
          len += arcs[a].length;
          found = true;
          break;
        }
      REQUIRE(found);
    }
    CHECK(p.length == doctest::Approx(len).epsilon(1e-12));
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t a = 0; a < arcs.size(); ++a)
    CHECK(recon[a] == doctest::Approx(flow.arc_flow[a]).epsilon(1e-9));
}

TEST_CASE("net graph construction on the grid") {
  auto grid = picheck_test::pole_grid(MetricKind::AmbientEuclidean, 0.05);
  VertexId x = at(grid, 0.5, 0.7), y = at(grid, 1.5, 0.7);
  auto [net, arcs] = build_net_graph(grid, x, y, 0.2, 2.0);

  CHECK(net.points[net.source] == x);
  CHECK(net.points[net.sink] == y);
  CHECK_FALSE(net.scale_flagged);
  CHECK(net.points.size() > 10);
  for (const auto& a : arcs) {
    CHECK(a.capacity >= 0.0);
    CHECK(a.length > 0.0);
    CHECK(a.length <= 4.0 * 0.2 + 1e-9);
  }
  // Flow exists across the window.
  CHECK(max_flow(net, arcs).value > 0.0);

  CHECK_THROWS_AS(build_net_graph(grid, x, y, 1.5, 2.0), std::invalid_argument);
  auto coarse = build_net_graph(grid, x, y, 0.3, 2.0);
  CHECK(coarse.first.scale_flagged);
}

TEST_CASE("pencil ratio never exceeds the pencil constant") {
  auto grid = picheck_test::pole_grid(MetricKind::AmbientEuclidean, 0.05);
  VertexId x = at(grid, 0.5, 0.7), y = at(grid, 1.5, 0.7);
  auto [net, arcs] = build_net_graph(grid, x, y, 0.15, 2.0);
  auto mu = riesz_measure(grid, x, y, 2.0);
  auto pencil = flow_to_pencil(net, arcs, max_flow(net, arcs));
  const double c1 = pencil_constant(grid, net, arcs, pencil, mu);
  CHECK(c1 > 0.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> g(grid.vertex_count());
    for (auto& v : g) v = unif(rng);
    // The indicator suite attains the sup only over fields that vanish at the
    // poles, where the measure side has no mass to answer the curve side.
    g[x] = g[y] = 0.0;
    auto pr = pencil_inequality_ratio(grid, net, arcs, pencil, g, mu);
    CHECK(pr.curve_side >= 0.0);
    CHECK(pr.measure_side > 0.0);
    CHECK(pr.ratio <= c1 * (1.0 + 1e-9));
  }
}
