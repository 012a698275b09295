#include "teaser/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cross_validation.hpp"
#include "teaser/rng.hpp"

namespace teaser {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t band_half_width(std::size_t n, std::size_t m, double band) {
  const std::size_t longer = std::max(n, m);
  const auto from_band =
      static_cast<std::size_t>(std::ceil(band * static_cast<double>(longer)));
  const std::size_t from_lengths = n > m ? n - m : m - n;
  return std::max(from_band, from_lengths);
}

}  // namespace

double dtw_distance(std::span<const double> a, std::span<const double> b,
                    double band) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("dtw_distance: empty series");
  if (band < 0.0 || band > 1.0)
    throw std::invalid_argument("dtw_distance: band must be in [0, 1]");

  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t r = band_half_width(n, m, band);

  std::vector<double> prev(m, kInf);
  std::vector<double> curr(m, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > r ? i - r : 0;
    const std::size_t hi = std::min(m - 1, i + r);
    std::fill(curr.begin(), curr.end(), kInf);
    for (std::size_t j = lo; j <= hi; ++j) {
      const double d = a[i] - b[j];
      const double cost = d * d;
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else {
        best = kInf;
        if (i > 0) best = std::min(best, prev[j]);             // insert
        if (j > 0) best = std::min(best, curr[j - 1]);         // delete
        if (i > 0 && j > 0) best = std::min(best, prev[j - 1]);  // match
      }
      curr[j] = cost + best;
    }
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

DtwSlaveModel fit_dtw_slave(const std::vector<std::vector<double>>& snapshots,
                            const std::vector<std::size_t>& labels,
                            std::size_t num_classes, std::uint64_t seed) {
  if (snapshots.empty()) throw DatasetError("fit_dtw_slave: no snapshots");
  if (snapshots.size() != labels.size())
    throw DatasetError("fit_dtw_slave: snapshots/labels length mismatch");
  if (num_classes < 1) throw DatasetError("fit_dtw_slave: no classes");

  std::vector<std::size_t> class_counts(num_classes, 0);
  for (std::size_t label : labels) {
    if (label >= num_classes) throw DatasetError("fit_dtw_slave: label out of range");
    ++class_counts[label];
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (class_counts[c] == 0)
      throw DatasetError("fit_dtw_slave: class " + std::to_string(c) +
                         " has no examples");
  }
  for (const auto& s : snapshots) {
    if (s.size() != snapshots.front().size())
      throw std::invalid_argument("fit_dtw_slave: snapshots differ in length");
  }

  DtwSlaveModel model;
  model.exemplars = snapshots;
  model.labels = labels;
  model.num_classes = num_classes;

  static constexpr double kBandGrid[] = {0.1, 1.0};

  Rng rng(seed);
  const detail::FoldPlan folds = detail::make_folds(labels, num_classes, rng);
  if (!folds.usable()) {
    model.band = 1.0;  // cannot stratify; keep the unconstrained default
    model.cv_accuracy = 0.0;
    return model;
  }

  const std::size_t n = snapshots.size();
  double best_acc = -1.0;
  for (double band : kBandGrid) {
    // Pairwise matrix once per band; every fold reads from it.
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        dist[i][j] = dist[j][i] = dtw_distance(snapshots[i], snapshots[j], band);
      }
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t nearest = kNoIndex;
      for (std::size_t j = 0; j < n; ++j) {
        if (folds.fold_of[j] == folds.fold_of[i]) continue;
        if (nearest == kNoIndex || dist[i][j] < dist[i][nearest]) nearest = j;
      }
      if (nearest != kNoIndex && labels[nearest] == labels[i]) ++correct;
    }
    const double acc = static_cast<double>(correct) / static_cast<double>(n);
    if (acc > best_acc) {  // ties keep the smaller band
      best_acc = acc;
      model.band = band;
    }
  }
  model.cv_accuracy = best_acc;
  return model;
}

SlaveOutput predict_proba_dtw(const DtwSlaveModel& model, const Snapshot& q,
                              std::size_t exclude) {
  if (model.exemplars.empty())
    throw std::invalid_argument("predict_proba_dtw: empty model");
  if (q.length == 0) throw std::invalid_argument("predict_proba_dtw: empty query");
  if (q.length > model.exemplars.front().size())
    throw std::invalid_argument("predict_proba_dtw: query longer than exemplars");

  std::vector<double> class_dist(model.num_classes, kInf);
  for (std::size_t i = 0; i < model.exemplars.size(); ++i) {
    if (i == exclude) continue;
    std::span<const double> prefix(model.exemplars[i].data(), q.length);
    const double d = dtw_distance(q.values, prefix, model.band);
    class_dist[model.labels[i]] = std::min(class_dist[model.labels[i]], d);
  }

  std::vector<double> weights(model.num_classes);
  for (std::size_t c = 0; c < model.num_classes; ++c) {
    weights[c] = 1.0 / (class_dist[c] + model.softness);  // inf distance -> 0
  }
  return make_slave_output(weights);
}

}  // namespace teaser
