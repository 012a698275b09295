#include "teaser/ocsvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "teaser/core.hpp"
#include "teaser/rng.hpp"

namespace teaser {

namespace {

constexpr double kKktTolerance = 1e-4;
constexpr std::size_t kMaxPairUpdates = 100000;

// The solver equalizes the margin support vectors' decision values only up
// to kKktTolerance, so points mathematically on the sphere come out at
// f = 0 +- tolerance. The acceptance test absorbs that noise; otherwise
// boundary points (including the margin SVs themselves) flip sign at random.
constexpr double kDecisionSlack = kKktTolerance;

}  // namespace

double rbf_kernel(std::span<const double> x, std::span<const double> y,
                  double gamma) {
  if (x.size() != y.size())
    throw std::invalid_argument("rbf_kernel: dimension mismatch");
  if (gamma <= 0.0) throw std::invalid_argument("rbf_kernel: gamma must be > 0");
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sq += d * d;
  }
  return std::exp(-gamma * sq);
}

MasterModel train_ocsvm(const std::vector<std::vector<double>>& features,
                        double nu, double gamma, std::uint64_t seed) {
  if (nu <= 0.0 || nu > 1.0)
    throw std::invalid_argument("train_ocsvm: nu must be in (0, 1]");
  if (gamma <= 0.0) throw std::invalid_argument("train_ocsvm: gamma must be > 0");

  MasterModel model;
  model.gamma = gamma;
  model.nu = nu;
  if (features.size() < 2) {
    model.accept_all = true;
    return model;
  }

  const std::size_t n = features.size();
  const double c = 1.0 / (nu * static_cast<double>(n));
  const double bound_eps = c * 1e-12;

  std::vector<std::vector<double>> kernel(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      kernel[i][j] = kernel[j][i] = rbf_kernel(features[i], features[j], gamma);
    }
  }

  // Feasible start: spread the unit mass over a random subset at the box
  // bound, remainder on the next index.
  std::vector<double> alpha(n, 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  double remaining = 1.0;
  for (std::size_t k = 0; k < n && remaining > bound_eps; ++k) {
    const double take = std::min(c, remaining);
    alpha[order[k]] = take;
    remaining -= take;
  }

  // g_i = (K alpha)_i, maintained incrementally.
  std::vector<double> g(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += kernel[i][j] * alpha[j];
    g[i] = acc;
  }

  model.converged = false;
  for (std::size_t iter = 0; iter < kMaxPairUpdates; ++iter) {
    // Maximal violating pair: mass should flow from the highest gradient
    // (among alpha > 0) to the lowest (among alpha < C).
    std::size_t up = kNoIndex;
    std::size_t down = kNoIndex;
    for (std::size_t i = 0; i < n; ++i) {
      if (alpha[i] < c - bound_eps && (up == kNoIndex || g[i] < g[up])) up = i;
      if (alpha[i] > bound_eps && (down == kNoIndex || g[i] > g[down])) down = i;
    }
    if (up == kNoIndex || down == kNoIndex || g[down] - g[up] <= kKktTolerance) {
      model.converged = true;
      break;
    }
    const double eta = kernel[up][up] + kernel[down][down] - 2.0 * kernel[up][down];
    double step = eta > 1e-12 ? (g[down] - g[up]) / eta
                              : std::numeric_limits<double>::infinity();
    step = std::min({step, c - alpha[up], alpha[down]});
    alpha[up] += step;
    alpha[down] -= step;
    if (alpha[up] > c - bound_eps) alpha[up] = c;
    if (alpha[down] < bound_eps) alpha[down] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      g[i] += step * (kernel[i][up] - kernel[i][down]);
    }
  }

  model.objective = 0.0;
  for (std::size_t i = 0; i < n; ++i) model.objective += alpha[i] * g[i];
  model.objective *= 0.5;

  // rho: decision value on the margin support vectors, averaged; when every
  // support vector sits at the bound, the smallest support-vector value.
  double margin_sum = 0.0;
  std::size_t margin_count = 0;
  double min_sv = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] <= bound_eps) continue;  // same zero threshold as the solver
    min_sv = std::min(min_sv, g[i]);
    if (alpha[i] < c - bound_eps) {
      margin_sum += g[i];
      ++margin_count;
    }
  }
  model.rho = margin_count > 0 ? margin_sum / static_cast<double>(margin_count)
                               : min_sv;

  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > bound_eps) {
      model.support_features.push_back(features[i]);
      model.alphas.push_back(alpha[i]);
    }
  }
  return model;
}

double master_score(const MasterModel& model, std::span<const double> x) {
  double f = 0.0;
  for (std::size_t i = 0; i < model.support_features.size(); ++i) {
    f += model.alphas[i] * rbf_kernel(model.support_features[i], x, model.gamma);
  }
  return f - model.rho;
}

bool master_decide(const MasterModel& model, std::span<const double> x) {
  if (model.accept_all) return true;
  if (!model.support_features.empty() &&
      model.support_features.front().size() != x.size())
    throw std::invalid_argument("master_decide: dimension mismatch");
  return master_score(model, x) >= -kDecisionSlack;
}

double select_gamma(const std::vector<std::vector<double>>& correct,
                    const std::vector<std::vector<double>>& incorrect,
                    double nu, std::span<const double> grid, std::uint64_t seed) {
  if (correct.empty()) throw std::invalid_argument("select_gamma: no positive samples");
  if (grid.empty()) throw std::invalid_argument("select_gamma: empty grid");

  double best_gamma = 0.0;
  double best_score = -std::numeric_limits<double>::infinity();
  bool have_best = false;
  for (double gamma : grid) {
    const MasterModel model = train_ocsvm(correct, nu, gamma, seed);
    std::size_t accepted_pos = 0;
    for (const auto& f : correct) {
      if (master_decide(model, f)) ++accepted_pos;
    }
    double score = static_cast<double>(accepted_pos) /
                   static_cast<double>(correct.size());
    if (!incorrect.empty()) {
      std::size_t accepted_neg = 0;
      for (const auto& f : incorrect) {
        if (master_decide(model, f)) ++accepted_neg;
      }
      score -= static_cast<double>(accepted_neg) /
               static_cast<double>(incorrect.size());
    }
    if (!have_best || score > best_score ||
        (score == best_score && gamma < best_gamma)) {
      have_best = true;
      best_score = score;
      best_gamma = gamma;
    }
  }
  return best_gamma;
}

}  // namespace teaser
