#include "picheck/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace picheck::lp {

PackingResult solve_packing(const std::vector<std::vector<double>>& rows,
                            const std::vector<double>& b,
                            const std::vector<double>& c) {
  const std::size_t m = rows.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw std::invalid_argument("rhs size mismatch");
  for (const auto& r : rows)
    if (r.size() != n) throw std::invalid_argument("row size mismatch");
  for (double v : b)
    if (v < 0.0 || !std::isfinite(v))
      throw std::invalid_argument("packing rhs must be nonnegative and finite");

  // Tableau: m rows by (n structural + m slack + 1 rhs), plus objective row.
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = rows[i][j];
    t[i][n + i] = 1.0;
    t[i][cols - 1] = b[i];
  }
  // Objective row holds reduced costs of a maximization: start with -c.
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  const double tol = 1e-11;
  PackingResult res;

  for (;;) {
    // Bland: entering = lowest column with negative reduced cost.
    std::size_t enter = cols - 1;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (t[m][j] < -tol) {
        enter = j;
        break;
      }
    }
    if (enter == cols - 1) break;  // optimal

    // Bland: leaving = lowest basis index among minimum-ratio rows.
    std::size_t leave = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] > tol) {
        double ratio = t[i][cols - 1] / t[i][enter];
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && (leave == m || basis[i] < basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) throw std::runtime_error("packing LP is unbounded");

    // Pivot.
    double piv = t[leave][enter];
    for (std::size_t j = 0; j < cols; ++j) t[leave][j] /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double f = t[i][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
    ++res.pivots;
    if (res.pivots > 50'000) throw std::runtime_error("simplex pivot budget exceeded");
  }

  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = t[i][cols - 1];
  res.dual.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) res.dual[i] = std::max(0.0, t[m][n + i]);
  res.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  return res;
}

}  // namespace picheck::lp
