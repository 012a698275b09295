#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "teaser/core.hpp"
#include "teaser/slave.hpp"

namespace teaser {

// Raised when a query snapshot is shorter than the model's sliding window.
// The prediction loop treats it as "skip this level".
class SnapshotTooShort : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Sparse word-count histogram, sorted by word. Sorted storage keeps dot
// products and serialization byte-stable.
using WordHistogram = std::vector<std::pair<std::uint32_t, double>>;

double cosine_similarity(const WordHistogram& a, const WordHistogram& b);

// Symbolic bag-of-patterns slave: sliding windows are z-normalized,
// represented by their first Fourier coefficients (DC excluded), discretized
// into 4 equi-depth bins per coefficient, and counted as words with
// numerosity reduction (consecutive duplicates collapse).
struct BopSlaveModel {
  static constexpr std::size_t kAlphabetSize = 4;

  std::size_t window_length = 0;
  std::size_t word_length = 0;  // 4 or 6 symbols per word
  std::vector<std::array<double, 3>> bin_edges;  // per coefficient position
  std::vector<WordHistogram> histograms;         // per training series
  std::vector<std::size_t> labels;
  std::size_t num_classes = 0;
  double cv_accuracy = 0.0;
};

// Selects window length from {ceil(s/2), ceil(s/4)} and word length from
// {4, 6} by cross-validated 1-NN cosine accuracy (same fold rules as the DTW
// slave; bin edges are re-learned inside each fold). Ties prefer the shorter
// word, then the larger window.
BopSlaveModel fit_bop_slave(const std::vector<std::vector<double>>& snapshots,
                            const std::vector<std::size_t>& labels,
                            std::size_t num_classes, std::uint64_t seed);

// Histogram of a query series under the model's learned discretization.
WordHistogram bop_histogram(const BopSlaveModel& model,
                            std::span<const double> values);

// p_c proportional to the best cosine similarity against class c's training
// histograms; an all-zero similarity vector falls back to uniform.
SlaveOutput predict_proba_bop(const BopSlaveModel& model, const Snapshot& q,
                              std::size_t exclude = kNoIndex);

}  // namespace teaser
