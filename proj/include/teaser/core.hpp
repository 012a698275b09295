#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace teaser {

// Raised when a dataset violates structural requirements (empty, class with
// too few members, non-finite values, ...).
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

// A univariate sequence of measurements ordered in time.
struct TimeSeries {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
};

// Series with a parallel list of class labels and the derived vocabulary.
// `classes` is the sorted set of distinct labels; slaves and masters work on
// indices into it.
struct LabeledDataset {
  std::vector<TimeSeries> series;
  std::vector<std::string> labels;   // parallel to series
  std::vector<std::string> classes;  // sorted distinct labels

  std::size_t size() const { return series.size(); }
  std::size_t num_classes() const { return classes.size(); }
  std::size_t n_max() const;

  // Index into `classes`, or kNoIndex for labels the dataset has never seen.
  std::size_t class_index(const std::string& label) const;

  // Validates shape and values, derives `classes`.
  static LabeledDataset make(std::vector<TimeSeries> series,
                             std::vector<std::string> labels);
};

// The prefix of a series available after `length` data points.
struct Snapshot {
  std::vector<double> values;
  std::size_t length = 0;  // effective prefix length, == values.size()
  bool normalized = false;
};

// Snapshot lengths s_i = i*w for i = 1..S with S = ceil(n_max / w), so the
// last snapshot always covers the longest training series.
struct SnapshotSchedule {
  std::size_t w = 0;
  std::vector<std::size_t> lengths;

  std::size_t levels() const { return lengths.size(); }
};

// Shifts and scales x to mean 0 and population standard deviation 1. The
// statistics come from x alone, never from data past the end of x. A prefix
// whose population std falls below 1e-8 maps to all zeros.
std::vector<double> z_normalize(std::span<const double> x);

// First min(s, n) values of t. s < 1 is an error; s past the end clamps.
Snapshot snapshot(const TimeSeries& t, std::size_t s);

// Truncate-then-normalize, the only order that avoids leaking future values.
Snapshot normalized_snapshot(std::span<const double> values, std::size_t s);

SnapshotSchedule build_schedule(std::size_t n_max, std::size_t w);

}  // namespace teaser
