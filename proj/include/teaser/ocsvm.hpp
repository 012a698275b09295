#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace teaser {

// exp(-gamma * ||x - y||^2)
double rbf_kernel(std::span<const double> x, std::span<const double> y,
                  double gamma);

// One-class SVM over a slave's probability features. Acceptance means the
// feature vector lies inside the learned hypersphere:
//   f(x) = sum_i alpha_i K(x_i, x) - rho >= 0.
struct MasterModel {
  std::vector<std::vector<double>> support_features;  // alpha > 0 only
  std::vector<double> alphas;
  double rho = 0.0;
  double gamma = 1.0;
  double nu = 0.05;
  bool accept_all = false;  // fallback when fewer than 2 training samples
  bool converged = true;
  double objective = 0.0;  // 0.5 * alpha' K alpha at the solution
};

// Solves the one-class SVM dual
//   min 0.5 sum_ij alpha_i alpha_j K(x_i, x_j)
//   s.t. 0 <= alpha_i <= 1/(nu*N), sum alpha_i = 1
// by pairwise coordinate descent: a random feasible start, then repeatedly
// updating the maximal violating pair until the KKT gap drops below 1e-4
// (capped at 1e5 pair updates, flagged via `converged`). rho averages the
// decision values of the margin support vectors. Fewer than 2 samples yield
// the accept-all fallback instead of an error.
MasterModel train_ocsvm(const std::vector<std::vector<double>>& features,
                        double nu, double gamma, std::uint64_t seed = 0);

double master_score(const MasterModel& model, std::span<const double> x);
bool master_decide(const MasterModel& model, std::span<const double> x);

// Grid search for the kernel width: trains on the correctly-classified
// features and scores
//   J(gamma) = (fraction of correct accepted) - (fraction of incorrect accepted)
// with the second term 0 when `incorrect` is empty. Ties take the smallest
// gamma.
double select_gamma(const std::vector<std::vector<double>>& correct,
                    const std::vector<std::vector<double>>& incorrect,
                    double nu, std::span<const double> grid,
                    std::uint64_t seed = 0);

}  // namespace teaser
