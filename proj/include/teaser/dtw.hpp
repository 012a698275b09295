#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "teaser/core.hpp"
#include "teaser/slave.hpp"

namespace teaser {

// Minimum cumulative squared-difference alignment cost under the standard
// recurrence with match/insert/delete steps. `band` is the Sakoe-Chiba window
// as a fraction of the longer series; the half-width is
// max(ceil(band * max(|a|,|b|)), ||a|-|b||), so the corner stays reachable.
// band = 1 is unconstrained. No final square root: 1-NN ranking does not
// need it.
double dtw_distance(std::span<const double> a, std::span<const double> b,
                    double band = 1.0);

// 1-NN DTW slave for one snapshot level. Exemplars are the z-normalized
// training snapshots, all of equal length.
struct DtwSlaveModel {
  std::vector<std::vector<double>> exemplars;
  std::vector<std::size_t> labels;  // class index per exemplar
  std::size_t num_classes = 0;
  double band = 1.0;
  double softness = 1e-6;  // epsilon in the inverse-distance weights
  double cv_accuracy = 0.0;
};

// Stores the exemplars and picks the warping band from {0.1, 1.0} by
// stratified 10-fold cross-validated 1-NN accuracy (leave-one-out when a
// class has fewer than 10 members, band 1.0 when any class has fewer than
// 2). Ties prefer the smaller band.
DtwSlaveModel fit_dtw_slave(const std::vector<std::vector<double>>& snapshots,
                            const std::vector<std::size_t>& labels,
                            std::size_t num_classes, std::uint64_t seed);

// Class probabilities from inverse nearest-class distances:
// p_c = (1/(d_c + eps)) / sum_j (1/(d_j + eps)). A query shorter than the
// exemplars is compared against exemplar prefixes of its own length.
// `exclude` drops one exemplar, used for leave-one-out training outputs.
SlaveOutput predict_proba_dtw(const DtwSlaveModel& model, const Snapshot& q,
                              std::size_t exclude = kNoIndex);

}  // namespace teaser
