#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "picheck/modulus.hpp"
#include "test_util.hpp"

using namespace picheck;
using picheck_test::at;

namespace {

// Four-vertex pool: x = 0, y = 1, two relays.  The six pool edges support
// every simple x->y path used by the random instances.
struct PoolInstance {
  PointCloudSpace space;
  CurveFamily family;
  RieszMeasure mu;
};

PoolInstance make_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> len(0.5, 2.0);
  std::uniform_real_distribution<double> wgt(0.1, 1.0);

  std::vector<double> coords{0.0, 0.0, 1.0, 0.0, 0.5, 0.4, 0.5, -0.4};
  std::vector<double> weights(4, 1.0);
  std::vector<Edge> edges{{0, 1, len(rng)}, {0, 2, len(rng)}, {2, 1, len(rng)},
                          {0, 3, len(rng)}, {3, 1, len(rng)}, {2, 3, len(rng)}};
  PoolInstance inst{
      PointCloudSpace(MetricKind::GraphPath, 2, 0.1, coords, weights, edges),
      {},
      {}};

  const std::vector<std::vector<VertexId>> pool{
      {0, 1}, {0, 2, 1}, {0, 3, 1}, {0, 2, 3, 1}, {0, 3, 2, 1}};
  const std::vector<std::vector<std::uint32_t>> pool_edges{
      {0}, {1, 2}, {3, 4}, {1, 5, 4}, {3, 5, 2}};

  inst.family.x = 0;
  inst.family.y = 1;
  inst.family.L = 8.0;
  std::vector<std::size_t> picks{0, 1, 2, 3, 4};
  std::shuffle(picks.begin(), picks.end(), rng);
  const std::size_t count = 1 + rng() % 4;
  for (std::size_t k = 0; k < count; ++k) {
    SpacePath p;
    p.vertices = pool[picks[k]];
    p.edges = pool_edges[picks[k]];
    for (auto e : p.edges) p.length += inst.space.edges()[e].length;
    inst.family.paths.push_back(std::move(p));
  }

  inst.mu.x = 0;
  inst.mu.y = 1;
  inst.mu.weight.resize(4);
  for (auto& w : inst.mu.weight) w = wgt(rng);
  return inst;
}

// Reference optimum by enumerating basic solutions of
//   min c . rho   s.t.  A rho >= 1, rho >= 0
// where rows are paths, columns family edges, A[p][e] = len(e), and
// c[e] is the endpoint-averaged mu weight.
double brute_force_modulus(const PoolInstance& inst) {
  std::vector<std::uint32_t> cols;
  for (const auto& p : inst.family.paths)
    for (auto e : p.edges)
      if (std::find(cols.begin(), cols.end(), e) == cols.end())
        cols.push_back(e);
  std::sort(cols.begin(), cols.end());

  const std::size_t nv = cols.size();
  const std::size_t np = inst.family.paths.size();
  std::vector<std::vector<double>> A(np, std::vector<double>(nv, 0.0));
  for (std::size_t p = 0; p < np; ++p)
    for (auto e : inst.family.paths[p].edges) {
      auto c = std::find(cols.begin(), cols.end(), e) - cols.begin();
      A[p][static_cast<std::size_t>(c)] += inst.space.edges()[e].length;
    }
  std::vector<double> cost(nv);
  for (std::size_t c = 0; c < nv; ++c) {
    const Edge& e = inst.space.edges()[cols[c]];
    cost[c] = 0.5 * (inst.mu.weight[e.u] + inst.mu.weight[e.v]);
  }

  double best = kInf;
  // Choose the active constraint rows; the remaining variables sit at zero.
  for (std::uint32_t rows = 0; rows < (1u << np); ++rows) {
    const int nr = __builtin_popcount(rows);
    if (nr == 0 || static_cast<std::size_t>(nr) > nv) continue;
    std::vector<std::size_t> act;
    for (std::size_t p = 0; p < np; ++p)
      if (rows >> p & 1) act.push_back(p);
    // Free columns: every subset of size nr.
    std::vector<std::size_t> comb(static_cast<std::size_t>(nr));
    for (std::size_t i = 0; i < comb.size(); ++i) comb[i] = i;
    while (true) {
      // Solve the square system on the chosen columns.
      const std::size_t m = comb.size();
      std::vector<std::vector<double>> M(m, std::vector<double>(m + 1, 0.0));
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) M[r][c] = A[act[r]][comb[c]];
        M[r][m] = 1.0;
      }
      bool singular = false;
      for (std::size_t c = 0; c < m && !singular; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < m; ++r)
          if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
        if (std::abs(M[piv][c]) < 1e-12) {
          singular = true;
          break;
        }
        std::swap(M[piv], M[c]);
        for (std::size_t r = 0; r < m; ++r) {
          if (r == c) continue;
          const double f = M[r][c] / M[c][c];
          for (std::size_t k = c; k <= m; ++k) M[r][k] -= f * M[c][k];
        }
      }
      if (!singular) {
        std::vector<double> rho(nv, 0.0);
        bool ok = true;
        for (std::size_t c = 0; c < m; ++c) {
          rho[comb[c]] = M[c][m] / M[c][c];
          if (rho[comb[c]] < -1e-9) ok = false;
        }
        for (std::size_t p = 0; p < np && ok; ++p) {
          double lhs = 0.0;
          for (std::size_t c = 0; c < nv; ++c) lhs += A[p][c] * rho[c];
          if (lhs < 1.0 - 1e-9) ok = false;
        }
        if (ok) {
          double obj = 0.0;
          for (std::size_t c = 0; c < nv; ++c) obj += cost[c] * rho[c];
          best = std::min(best, obj);
        }
      }
      // Next combination.
      std::size_t i = m;
      while (i > 0 && comb[i - 1] == nv - m + i - 1) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < m; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("single path modulus loads the cheapest edge") {
  std::mt19937_64 rng(1);
  auto inst = make_instance(rng);
  inst.family.paths.resize(1);
  auto res = modulus(inst.space, inst.family, inst.mu);

  // One constraint: put everything on the edge minimizing cost/length.
  double want = kInf;
  for (auto e : inst.family.paths[0].edges) {
    const Edge& ed = inst.space.edges()[e];
    const double c = 0.5 * (inst.mu.weight[ed.u] + inst.mu.weight[ed.v]);
    want = std::min(want, c / ed.length);
  }
  CHECK(res.value == doctest::Approx(want).epsilon(1e-12));
  CHECK(res.density.worst_path_integral >= 1.0 - 1e-9);
}

TEST_CASE("lp optimum equals basic solution enumeration") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 60; ++t) {
    auto inst = make_instance(rng);
    auto res = modulus(inst.space, inst.family, inst.mu);
    const double brute = brute_force_modulus(inst);
    CHECK(std::abs(res.value - brute) <= 1e-9 * std::max(1.0, brute));
    CHECK(res.density.worst_path_integral >= 1.0 - 1e-9);

    // The reported density must reproduce the objective.
    double obj = 0.0;
    for (std::size_t k = 0; k < res.density.edges.size(); ++k) {
      const Edge& e = inst.space.edges()[res.density.edges[k]];
      obj += res.density.rho[k] * 0.5 *
             (inst.mu.weight[e.u] + inst.mu.weight[e.v]);
    }
    CHECK(obj == doctest::Approx(res.value).epsilon(1e-9));
  }
}

TEST_CASE("modulus is monotone in the family") {
  std::mt19937_64 rng(7);
  auto inst = make_instance(rng);
  while (inst.family.paths.size() < 2) inst = make_instance(rng);
  CurveFamily prefix = inst.family;
  prefix.paths.resize(1);
  const double small = modulus(inst.space, prefix, inst.mu).value;
  const double full = modulus(inst.space, inst.family, inst.mu).value;
  CHECK(full >= small - 1e-12);

  CurveFamily empty = inst.family;
  empty.paths.clear();
  CHECK_THROWS_AS(modulus(inst.space, empty, inst.mu), std::invalid_argument);
}

TEST_CASE("quasigeodesic enumeration on the grid") {
  auto grid = picheck_test::unit_grid(MetricKind::GraphPath);
  VertexId x = at(grid, 0.2, 0.5), y = at(grid, 0.8, 0.5);
  auto fam = enumerate_quasigeodesics(grid, x, y, 1.5, 6);
  REQUIRE(fam.paths.size() == 6);
  CHECK(fam.length_bound == doctest::Approx(0.9).epsilon(1e-12));
  for (std::size_t i = 0; i < fam.paths.size(); ++i) {
    const auto& p = fam.paths[i];
    CHECK(p.vertices.front() == x);
    CHECK(p.vertices.back() == y);
    CHECK(p.length <= fam.length_bound + 1e-12);
    // Loopless and length sorted.
    auto vs = p.vertices;
    std::sort(vs.begin(), vs.end());
    CHECK(std::adjacent_find(vs.begin(), vs.end()) == vs.end());
    if (i > 0) CHECK(fam.paths[i - 1].length <= p.length + 1e-12);
    double len = 0.0;
    for (auto e : p.edges) len += grid.edges()[e].length;
    CHECK(len == doctest::Approx(p.length).epsilon(1e-12));
  }
  // One straight geodesic, then one-row detours.
  CHECK(fam.paths.front().length == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(fam.paths.back().length == doctest::Approx(0.8).epsilon(1e-12));

  auto seg = segment(9);
  auto one = enumerate_quasigeodesics(seg, 0, 8, 2.0, 5);
  CHECK(one.paths.size() == 1);  // the line has a single loopless route
}

TEST_CASE("keith bound grows with the enumeration size") {
  auto grid = picheck_test::unit_grid(MetricKind::GraphPath);
  VertexId x = at(grid, 0.2, 0.5), y = at(grid, 0.8, 0.5);
  auto mu = riesz_measure(grid, x, y, 1.5);
  const std::vector<std::size_t> ks{1, 2, 4, 8};
  auto kb = keith_bound(grid, x, y, 1.5, ks, mu);
  REQUIRE(kb.moduli.size() == ks.size());
  for (std::size_t i = 1; i < kb.moduli.size(); ++i)
    CHECK(kb.moduli[i] >= kb.moduli[i - 1] - 1e-12);
  CHECK(kb.value == doctest::Approx(kb.moduli.back()));
  CHECK(kb.subfamily_estimate);
}

TEST_CASE("duality check against a family supported pencil") {
  auto grid = picheck_test::unit_grid(MetricKind::GraphPath);
  VertexId x = at(grid, 0.2, 0.5), y = at(grid, 0.8, 0.5);
  auto mu = riesz_measure(grid, x, y, 1.5);
  auto fam = enumerate_quasigeodesics(grid, x, y, 1.5, 4);

  std::vector<std::pair<std::vector<VertexId>, double>> pencil{
      {fam.paths[0].vertices, 0.5}, {fam.paths[1].vertices, 0.5}};
  auto dc = pencil_modulus_duality_check(grid, fam, mu, pencil, 2.0);
  CHECK(dc.applicable);
  CHECK(dc.modulus_value == doctest::Approx(modulus(grid, fam, mu).value));
  CHECK(dc.margin == doctest::Approx(dc.modulus_value - 0.5).epsilon(1e-12));

  std::vector<VertexId> stray = fam.paths[0].vertices;
  std::reverse(stray.begin(), stray.end());
  std::vector<std::pair<std::vector<VertexId>, double>> off{{stray, 1.0}};
  CHECK_FALSE(pencil_modulus_duality_check(grid, fam, mu, off, 2.0).applicable);
}
