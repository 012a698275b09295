#pragma once

// Independent reference implementations used only by tests. They mirror the
// mathematical definitions directly and deliberately share no code with the
// library paths they check.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace oracles {

namespace detail {

// Walks every monotone alignment path from (i, j) to the end, carrying the
// running cost, and records the cheapest complete path.
inline void walk_alignments(std::span<const double> a, std::span<const double> b,
                            std::size_t i, std::size_t j, double cost_so_far,
                            double& best) {
  const double d = a[i] - b[j];
  const double cost = cost_so_far + d * d;
  const bool last_i = i + 1 == a.size();
  const bool last_j = j + 1 == b.size();
  if (last_i && last_j) {
    if (cost < best) best = cost;
    return;
  }
  if (!last_i && !last_j) walk_alignments(a, b, i + 1, j + 1, cost, best);
  if (!last_i) walk_alignments(a, b, i + 1, j, cost, best);
  if (!last_j) walk_alignments(a, b, i, j + 1, cost, best);
}

// Gaussian elimination with partial pivoting; returns false when singular.
inline bool solve_linear(std::vector<std::vector<double>> m, std::vector<double>& rhs) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::fabs(m[row][col]) > std::fabs(m[pivot][col])) pivot = row;
    }
    if (std::fabs(m[pivot][col]) < 1e-12) return false;
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double f = m[row][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[row][c] -= f * m[col][c];
      rhs[row] -= f * rhs[col];
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    double acc = rhs[col];
    for (std::size_t c = col + 1; c < n; ++c) acc -= m[col][c] * rhs[c];
    rhs[col] = acc / m[col][col];
  }
  return true;
}

}  // namespace detail

// Brute-force enumeration of all monotone alignments; exact for short series.
inline double dtw_exhaustive(std::span<const double> a, std::span<const double> b) {
  double best = std::numeric_limits<double>::infinity();
  detail::walk_alignments(a, b, 0, 0, 0.0, best);
  return best;
}

// Global minimum of the one-class SVM dual
//   min 0.5 a'Ka  s.t.  0 <= a_i <= 1/(nu*n), sum a_i = 1
// by enumerating every active-set partition (each variable at 0, at the cap,
// or free) and solving the equality-constrained subproblem densely. The
// optimum of a convex QP satisfies the KKT conditions of one such partition.
inline double ocsvm_dual_objective(const std::vector<std::vector<double>>& x,
                                   double nu, double gamma) {
  const std::size_t n = x.size();
  const double cap = 1.0 / (nu * static_cast<double>(n));
  std::vector<std::vector<double>> kernel(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double sq = 0.0;
      for (std::size_t d = 0; d < x[i].size(); ++d) {
        const double diff = x[i][d] - x[j][d];
        sq += diff * diff;
      }
      kernel[i][j] = std::exp(-gamma * sq);
    }
  }

  const double feas_tol = 1e-9;
  double best = std::numeric_limits<double>::infinity();
  std::size_t combos = 1;
  for (std::size_t i = 0; i < n; ++i) combos *= 3;

  std::vector<int> state(n);  // 0 = at zero, 1 = at cap, 2 = free
  for (std::size_t combo = 0; combo < combos; ++combo) {
    std::size_t rem = combo;
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = static_cast<int>(rem % 3);
      rem /= 3;
    }
    std::vector<double> alpha(n, 0.0);
    std::vector<std::size_t> free_idx;
    double fixed_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] == 1) {
        alpha[i] = cap;
        fixed_sum += cap;
      } else if (state[i] == 2) {
        free_idx.push_back(i);
      }
    }
    if (fixed_sum > 1.0 + feas_tol) continue;

    if (free_idx.empty()) {
      if (std::fabs(fixed_sum - 1.0) > feas_tol) continue;
    } else {
      // Bordered system: stationarity over the free block plus the equality
      // constraint, with the multiplier as the last unknown.
      const std::size_t f = free_idx.size();
      std::vector<std::vector<double>> m(f + 1, std::vector<double>(f + 1, 0.0));
      std::vector<double> rhs(f + 1, 0.0);
      for (std::size_t r = 0; r < f; ++r) {
        for (std::size_t c = 0; c < f; ++c) m[r][c] = kernel[free_idx[r]][free_idx[c]];
        m[r][f] = -1.0;
        double coupling = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (state[i] == 1) coupling += kernel[free_idx[r]][i] * cap;
        }
        rhs[r] = -coupling;
      }
      for (std::size_t c = 0; c < f; ++c) m[f][c] = 1.0;
      rhs[f] = 1.0 - fixed_sum;
      if (!detail::solve_linear(m, rhs)) continue;
      bool feasible = true;
      for (std::size_t r = 0; r < f; ++r) {
        if (rhs[r] < -feas_tol || rhs[r] > cap + feas_tol) {
          feasible = false;
          break;
        }
        alpha[free_idx[r]] = rhs[r];
      }
      if (!feasible) continue;
    }

    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        objective += alpha[i] * kernel[i][j] * alpha[j];
      }
    }
    objective *= 0.5;
    best = std::min(best, objective);
  }
  return best;
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t p = i; p <= j; ++p) rank[order[p]] = avg;
      i = j + 1;
    }
    return rank;
  };
  const auto rx = ranks(xs);
  const auto ry = ranks(ys);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double cov = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (rx[i] - mx) * (ry[i] - my);
    vx += (rx[i] - mx) * (rx[i] - mx);
    vy += (ry[i] - my) * (ry[i] - my);
  }
  if (vx == 0.0 || vy == 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

}  // namespace oracles
