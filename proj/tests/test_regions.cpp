#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "picheck/candidates.hpp"
#include "picheck/region_spec.hpp"
#include "test_util.hpp"

using namespace picheck;
using picheck_test::at;

namespace {

std::filesystem::path temp_file(const std::string& name,
                                const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream out(p);
  out << body;
  return p;
}

}  // namespace

TEST_CASE("ball spec matches the metric ball") {
  auto grid = picheck_test::unit_grid(MetricKind::GraphPath);
  auto region = parse_region(grid, "ball(0.5, 0.5, 0.25)");
  auto direct = ball(grid, at(grid, 0.5, 0.5), 0.25);
  CHECK(region.count() == direct.size());
  for (VertexId v : direct) CHECK(region.contains(v));

  // Spacing is free; the spec text itself becomes the label.
  auto spaced = parse_region(grid, "  ball( 0.5 ,0.5,   0.25 )");
  CHECK(spaced.mask == region.mask);
  CHECK(region.label == "ball(0.5, 0.5, 0.25)");
}

TEST_CASE("halfspace spec on stored coordinates") {
  auto grid = picheck_test::unit_grid(MetricKind::GraphPath);
  auto region = parse_region(grid, "halfspace(1, 0, 0.5)");
  CHECK(region.count() == 66);  // six columns of eleven
  for (VertexId v = 0; v < grid.vertex_count(); ++v)
    CHECK(region.contains(v) == (grid.coords(v)[0] <= 0.5 + 1e-12));

  auto diag = parse_region(grid, "halfspace(1, 1, 1.0)");
  for (VertexId v = 0; v < grid.vertex_count(); ++v) {
    const auto c = grid.coords(v);
    CHECK(diag.contains(v) == (c[0] + c[1] <= 1.0 + 1e-12));
  }
}

TEST_CASE("levelset spec goes through the field resolver") {
  auto grid = picheck_test::unit_grid(MetricKind::GraphPath);
  RegionSpecContext ctx;
  ctx.field_resolver = [&](const std::string& id) -> std::vector<double> {
    REQUIRE(id == "xcoord");
    std::vector<double> f(grid.vertex_count());
    for (VertexId v = 0; v < grid.vertex_count(); ++v) f[v] = grid.coords(v)[0];
    return f;
  };
  auto region = parse_region(grid, "levelset(xcoord, 0.35)", ctx);
  CHECK(region.count() == 44);

  CHECK_THROWS(parse_region(grid, "levelset(xcoord, 0.35)"));
}

TEST_CASE("union spec is the mask union") {
  auto grid = picheck_test::unit_grid(MetricKind::GraphPath);
  auto u =
      parse_region(grid, "union(ball(0.0, 0.0, 0.15), halfspace(1, 0, 0.1))");
  auto a = parse_region(grid, "ball(0.0, 0.0, 0.15)");
  auto b = parse_region(grid, "halfspace(1, 0, 0.1)");
  for (VertexId v = 0; v < grid.vertex_count(); ++v)
    CHECK(u.contains(v) == (a.contains(v) || b.contains(v)));
}

TEST_CASE("file spec reads external vertex ids") {
  auto grid = picheck_test::unit_grid(MetricKind::GraphPath);
  auto p = temp_file("picheck_region_ids.txt",
                     "# corner vertices\n0 5\n7\n");
  auto region = parse_region(grid, "file(" + p.string() + ")");
  CHECK(region.count() == 3);
  CHECK(region.contains(0));
  CHECK(region.contains(5));
  CHECK(region.contains(7));

  // Relative paths resolve against the context base directory.
  RegionSpecContext ctx;
  ctx.base_dir = p.parent_path().string();
  auto rel = parse_region(grid, "file(" + p.filename().string() + ")", ctx);
  CHECK(rel.mask == region.mask);

  auto bad = temp_file("picheck_region_bad.txt", "0 99999\n");
  CHECK_THROWS(parse_region(grid, "file(" + bad.string() + ")"));
}

TEST_CASE("malformed specs report the offending offset") {
  auto grid = picheck_test::unit_grid(MetricKind::GraphPath);
  for (const auto* text : {"blob(1)", "ball(0.5, 0.5)", "ball(0.5, 0.5, 0.25",
                           "union()", "ball(a, b, c)"}) {
    try {
      parse_region(grid, text);
      FAIL_CHECK("expected a parse failure for: " << text);
    } catch (const std::exception& e) {
      CHECK(std::string(e.what()).find("region spec error at offset") !=
            std::string::npos);
    }
  }
}

TEST_CASE("nearest vertex resolution breaks ties to the lowest id") {
  auto grid = picheck_test::unit_grid(MetricKind::GraphPath);
  const std::vector<double> off{0.52, 0.5};
  CHECK(nearest_vertex_to(grid, off) == at(grid, 0.5, 0.5));

  const std::vector<double> mid{0.55, 0.5};
  const VertexId tie = nearest_vertex_to(grid, mid);
  CHECK(tie == std::min(at(grid, 0.5, 0.5), at(grid, 0.6, 0.5)));
}

TEST_CASE("standard candidate suites are deterministic") {
  auto grid = picheck_test::unit_grid(MetricKind::GraphPath);
  auto ctx = make_pole_context(grid, at(grid, 0.2, 0.5), at(grid, 0.8, 0.5),
                               1.5);
  CandidateConfig cfg;
  cfg.random_unions = 10;

  auto a = standard_candidates(grid, ctx, cfg);
  auto b = standard_candidates(grid, ctx, cfg);
  REQUIRE(a.regions.size() == b.regions.size());
  REQUIRE(a.separators.size() == b.separators.size());
  CHECK(a.regions.size() >= cfg.ball_centers);
  CHECK(a.separators.size() >= cfg.separator_levels);
  for (std::size_t i = 0; i < a.regions.size(); ++i) {
    CHECK(a.regions[i].mask == b.regions[i].mask);
    CHECK(a.regions[i].label == b.regions[i].label);
    CHECK(a.regions[i].mask.size() == grid.vertex_count());
  }
  for (std::size_t i = 0; i < a.separators.size(); ++i) {
    CHECK(a.separators[i].omega.mask == b.separators[i].omega.mask);
    CHECK(a.separators[i].margin == b.separators[i].margin);
    CHECK(a.separators[i].margin >= 0.0);
  }
}
