#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "picheck/mmspace.hpp"
#include "test_util.hpp"

using namespace picheck;
using picheck_test::at;
using picheck_test::unit_grid;

TEST_CASE("distance field matches the metric kind") {
  auto amb = unit_grid(MetricKind::AmbientEuclidean);
  auto gr = unit_grid(MetricKind::GraphPath);
  VertexId a = at(amb, 0.0, 0.0), b = at(amb, 0.5, 0.5);

  CHECK(amb.distance(a, b) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  // Graph metric on the axis grid is the taxicab distance.
  CHECK(gr.distance(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gr.distance(a, b) >= amb.distance(a, b));
  CHECK(amb.distance(a, b) == amb.distance(b, a));

  DistanceField f(gr, a);
  for (VertexId v = 0; v < gr.vertex_count(); ++v)
    CHECK(f[v] == doctest::Approx(gr.distance(a, v)).epsilon(1e-12));
}

TEST_CASE("open ball masses on the unit grid") {
  auto amb = unit_grid(MetricKind::AmbientEuclidean);
  auto gr = unit_grid(MetricKind::GraphPath);
  VertexId c = at(amb, 0.5, 0.5);

  // {d < 0.15}: center + 4 axis + 4 diagonal neighbours, 0.01 weight each.
  DistanceField fa(amb, c);
  CHECK(fa.ball_mass(0.15) == doctest::Approx(0.09).epsilon(1e-12));
  // Taxicab excludes the diagonals at 0.2.
  DistanceField fg(gr, c);
  CHECK(fg.ball_mass(0.15) == doctest::Approx(0.05).epsilon(1e-12));

  // Closed ball picks up the shell the open ball omits.  Probed on an
  // h = 1/8 grid so radii and coordinates are exactly representable; at
  // h = 0.1 the accumulated coordinates straddle the nominal distances.
  GridSpec gs;
  gs.h = 0.125;
  gs.metric = MetricKind::AmbientEuclidean;
  auto exact = euclidean_grid(gs);
  DistanceField fe(exact, at(exact, 0.5, 0.5));
  CHECK(fe.ball_mass_closed(0.125) == doctest::Approx(5.0 / 64.0).epsilon(1e-12));
  CHECK(fe.ball_mass(0.125) == doctest::Approx(1.0 / 64.0).epsilon(1e-12));

  CHECK(local_ball_mass(amb, c, 0.15) == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(local_ball_mass(gr, c, 0.15) == doctest::Approx(0.05).epsilon(1e-12));

  auto bv = fa.ball(0.15);
  CHECK(bv.size() == 9);
  CHECK(measure(amb, bv) == doctest::Approx(0.09).epsilon(1e-12));
  // Ascending by distance.
  for (std::size_t i = 1; i < bv.size(); ++i)
    CHECK(fa[bv[i - 1]] <= fa[bv[i]]);
}

TEST_CASE("sorted index is consistent with the raw field") {
  auto gr = unit_grid(MetricKind::GraphPath);
  DistanceField f(gr, at(gr, 0.3, 0.3));
  auto sd = f.sorted_distances();
  auto pm = f.prefix_mass();
  REQUIRE(sd.size() == gr.vertex_count());
  REQUIRE(pm.size() == sd.size() + 1);
  CHECK(std::is_sorted(sd.begin(), sd.end()));
  CHECK(pm.front() == 0.0);
  CHECK(pm.back() == doctest::Approx(gr.total_mass()).epsilon(1e-12));
}

TEST_CASE("constructor validates its inputs") {
  std::vector<double> coords{0.0, 1.0};
  std::vector<double> w{0.5, 0.5};
  std::vector<Edge> e{{0, 1, 1.0}};
  CHECK_NOTHROW(PointCloudSpace(MetricKind::GraphPath, 1, 1.0, coords, w, e));
  CHECK_THROWS_AS(PointCloudSpace(MetricKind::GraphPath, 1, 1.0, coords,
                                  {0.5, -0.5}, e),
                  std::invalid_argument);
  CHECK_THROWS_AS(PointCloudSpace(MetricKind::GraphPath, 1, 1.0, coords, w,
                                  {{0, 2, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PointCloudSpace(MetricKind::GraphPath, 1, 1.0, coords, w,
                                  {{0, 0, 1.0}}),
                  std::invalid_argument);
  // Negative edge length means "fill in the ambient distance".
  PointCloudSpace s(MetricKind::GraphPath, 1, 1.0, coords, w, {{0, 1, -1.0}});
  CHECK(s.edges()[0].length == doctest::Approx(1.0));
  // External ids default to the identity.
  CHECK(s.external_id(1) == 1);
}

TEST_CASE("point cloud text format round trips") {
  auto gr = unit_grid(MetricKind::GraphPath);
  std::ostringstream out;
  save_point_cloud(gr, out);
  std::istringstream in(out.str());
  PointCloudSpace back = load_point_cloud(in);

  CHECK(back.vertex_count() == gr.vertex_count());
  CHECK(back.edge_count() == gr.edge_count());
  CHECK(back.metric_kind() == gr.metric_kind());
  CHECK(back.resolution() == gr.resolution());
  CHECK(space_hash(back) == space_hash(gr));
}

TEST_CASE("loader rejects malformed input") {
  std::istringstream no_header("v 0 0.0 1.0\n");
  CHECK_THROWS_AS(load_point_cloud(no_header), std::invalid_argument);
  std::istringstream bad_header("pointcloud nope euclidean 0.1\n");
  CHECK_THROWS(load_point_cloud(bad_header));
}

TEST_CASE("local lipschitz slopes") {
  auto seg = segment(11);
  std::vector<double> u(seg.vertex_count());
  for (VertexId v = 0; v < seg.vertex_count(); ++v) u[v] = 3.0 * v * 0.1;
  auto lip = local_lip(seg, u);
  for (double s : lip) CHECK(s == doctest::Approx(3.0).epsilon(1e-9));
  std::vector<double> c(seg.vertex_count(), 7.0);
  for (double s : local_lip(seg, c)) CHECK(s == 0.0);
}

TEST_CASE("delta net separates and covers") {
  auto amb = unit_grid(MetricKind::AmbientEuclidean);
  VertexId x = at(amb, 0.1, 0.1), y = at(amb, 0.9, 0.9);
  const double delta = 0.25;
  auto net = delta_net(amb, delta, x, y);

  CHECK(std::find(net.begin(), net.end(), x) != net.end());
  CHECK(std::find(net.begin(), net.end(), y) != net.end());
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t j = i + 1; j < net.size(); ++j)
      CHECK(amb.distance(net[i], net[j]) >= delta - 1e-12);
  DistanceField cover(amb, net);
  for (VertexId v = 0; v < amb.vertex_count(); ++v)
    CHECK(cover[v] <= delta + 1e-12);
}

TEST_CASE("doubling estimate on the plane grid") {
  auto amb = unit_grid(MetricKind::AmbientEuclidean);
  auto d1 = doubling_estimate(amb);
  auto d2 = doubling_estimate(amb);
  CHECK(d1.value == d2.value);  // deterministic protocol
  CHECK(d1.value >= 3.0);
  CHECK(d1.value <= 9.0);
  CHECK(d1.centers_used > 0);
}

TEST_CASE("quasiconvexity estimates") {
  auto gr = unit_grid(MetricKind::GraphPath);
  std::vector<std::pair<VertexId, VertexId>> pairs{{at(gr, 0, 0), at(gr, 1, 1)}};
  auto qg = quasiconvexity_estimate(gr, pairs);
  CHECK(qg.value == 1.0);  // geodesic by construction
  CHECK(qg.finite);

  auto amb = unit_grid(MetricKind::AmbientEuclidean);
  auto qa = quasiconvexity_estimate(amb, pairs);
  CHECK(qa.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(qa.finite);

  // Two disconnected components: the sampled pair has no graph path.
  std::vector<double> coords{0.0, 1.0, 2.0, 3.0};
  std::vector<double> w(4, 1.0);
  std::vector<Edge> e{{0, 1, 1.0}, {2, 3, 1.0}};
  PointCloudSpace split(MetricKind::AmbientEuclidean, 1, 1.0, coords, w, e);
  std::vector<std::pair<VertexId, VertexId>> cross{{0, 3}};
  CHECK_FALSE(quasiconvexity_estimate(split, cross).finite);
}

TEST_CASE("boundary vertices of the grid are its rim") {
  auto gr = unit_grid(MetricKind::GraphPath);
  auto rim = boundary_vertices(gr);
  CHECK(rim.size() == 40);  // 4 * 10 on an 11x11 grid
  for (VertexId v : rim) {
    auto c = gr.coords(v);
    bool on_rim = false;
    for (double x : c) on_rim |= x < 0.05 || x > 0.95;
    CHECK(on_rim);
  }
}

TEST_CASE("radius schedule doubles up to the cap") {
  auto s = default_radius_schedule(0.1, 0.5);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == doctest::Approx(0.2));
  CHECK(s[1] == doctest::Approx(0.4));
  CHECK(default_radius_schedule(0.1, 0.05).size() == 1);  // never empty
}

TEST_CASE("space hash is stable and input sensitive") {
  auto a = unit_grid(MetricKind::GraphPath);
  auto b = unit_grid(MetricKind::GraphPath);
  auto c = unit_grid(MetricKind::GraphPath, 0.05);
  CHECK(space_hash(a) == space_hash(b));
  CHECK(space_hash(a) != space_hash(c));
}
