#include <doctest.h>

#include <stdexcept>

#include "picheck/gallery.hpp"
#include "picheck/mmspace.hpp"
#include "test_util.hpp"

using namespace picheck;
using picheck_test::at;

TEST_CASE("grid counts, weights and edges") {
  auto g = picheck_test::unit_grid(MetricKind::GraphPath);
  CHECK(g.vertex_count() == 121);
  CHECK(g.edge_count() == 220);
  CHECK(g.weight(0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(g.total_mass() == doctest::Approx(1.21).epsilon(1e-12));
  CHECK(g.dim() == 2);
  CHECK(g.resolution() == 0.1);

  GridSpec d = {};
  d.extent = {1.0, 1.0, 1.0};
  d.h = 0.1;
  d.diagonals = true;
  CHECK(euclidean_grid(d).edge_count() == 420);

  GridSpec tiny = d;
  tiny.vertex_budget = 10;
  CHECK_THROWS_AS(euclidean_grid(tiny), std::invalid_argument);

  GridSpec line;
  line.dim = 1;
  line.extent = {1.0, 1.0, 1.0};
  line.h = 0.25;
  CHECK(euclidean_grid(line).vertex_count() == 5);
}

TEST_CASE("nearest vertex breaks ties toward the lower id") {
  auto g = picheck_test::unit_grid(MetricKind::AmbientEuclidean);
  std::vector<double> p{0.05, 0.0};  // equidistant between ids 0 and 1
  CHECK(nearest_vertex(g, p) == 0);
  std::vector<double> q{0.62, 0.41};
  VertexId v = nearest_vertex(g, q);
  CHECK(g.coords(v)[0] == doctest::Approx(0.6));
  CHECK(g.coords(v)[1] == doctest::Approx(0.4));
}

TEST_CASE("segment weights and spacing") {
  auto s = segment(5);
  CHECK(s.vertex_count() == 5);
  CHECK(s.resolution() == 0.25);
  CHECK(s.weight(2) == doctest::Approx(0.2));
  CHECK(s.coords(4)[0] == doctest::Approx(1.0));
  CHECK(s.edge_count() == 4);
  CHECK_THROWS_AS(segment(1), std::invalid_argument);
}

TEST_CASE("glued planes identify the middle set") {
  GluedPlanesSpec spec;
  spec.extent = 2.0;
  spec.h = 0.5;  // 5x5 sheets
  spec.k = 0;
  auto g = glued_planes(spec);
  CHECK(g.vertex_count() == 49);  // 2*25 minus one shared centre

  VertexId centre_a = glued_planes_vertex(spec, 0, 2, 2);
  VertexId centre_b = glued_planes_vertex(spec, 1, 2, 2);
  CHECK(centre_a == centre_b);

  // Crossing between mirrored corners passes through the gluing point.
  VertexId ca = glued_planes_vertex(spec, 0, 0, 0);
  VertexId cb = glued_planes_vertex(spec, 1, 0, 0);
  CHECK(ca != cb);
  CHECK(g.distance(ca, cb) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(g.distance(ca, centre_a) == doctest::Approx(2.0).epsilon(1e-12));

  spec.k = 1;
  auto line = glued_planes(spec);
  CHECK(line.vertex_count() == 45);  // the whole middle column is shared
  for (int iy = 0; iy < 5; ++iy)
    CHECK(glued_planes_vertex(spec, 0, 2, iy) ==
          glued_planes_vertex(spec, 1, 2, iy));
  // Off the seam the sheets stay distinct.
  CHECK(glued_planes_vertex(spec, 0, 1, 2) != glued_planes_vertex(spec, 1, 1, 2));
}

TEST_CASE("carpet carves the middle ninth") {
  CarpetSpec spec;
  spec.levels = 1;
  spec.hole_fraction = {1.0 / 3.0};
  spec.h = 1.0 / 9.0;
  auto c = carpet_like(spec);
  CHECK(c.vertex_count() == 96);  // 10x10 minus the 2x2 interior of the hole

  // Nothing survives strictly inside the hole.
  for (VertexId v = 0; v < c.vertex_count(); ++v) {
    auto p = c.coords(v);
    bool inside = p[0] > 1.0 / 3.0 + 1e-9 && p[0] < 2.0 / 3.0 - 1e-9 &&
                  p[1] > 1.0 / 3.0 + 1e-9 && p[1] < 2.0 / 3.0 - 1e-9;
    CHECK_FALSE(inside);
  }

  // Still connected around the hole.
  DistanceField f(c, VertexId{0});
  for (VertexId v = 0; v < c.vertex_count(); ++v) CHECK(std::isfinite(f[v]));

  CarpetSpec bad = spec;
  bad.hole_fraction = {0.5};
  CHECK_THROWS_AS(carpet_like(bad), std::invalid_argument);
}

TEST_CASE("gallery constructions are reproducible") {
  GluedPlanesSpec spec;
  spec.h = 0.25;
  CHECK(space_hash(glued_planes(spec)) == space_hash(glued_planes(spec)));
  CarpetSpec cs;
  cs.levels = 2;
  cs.hole_fraction = {1.0 / 3.0};
  cs.h = 1.0 / 27.0;
  CHECK(space_hash(carpet_like(cs)) == space_hash(carpet_like(cs)));
}
