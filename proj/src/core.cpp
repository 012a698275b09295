#include "teaser/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace teaser {

namespace {
constexpr double kStdFloor = 1e-8;
}

std::size_t LabeledDataset::n_max() const {
  std::size_t n = 0;
  for (const auto& t : series) n = std::max(n, t.size());
  return n;
}

std::size_t LabeledDataset::class_index(const std::string& label) const {
  auto it = std::lower_bound(classes.begin(), classes.end(), label);
  if (it == classes.end() || *it != label) return kNoIndex;
  return static_cast<std::size_t>(it - classes.begin());
}

LabeledDataset LabeledDataset::make(std::vector<TimeSeries> series,
                                    std::vector<std::string> labels) {
  if (series.empty()) throw DatasetError("dataset has no series");
  if (series.size() != labels.size())
    throw DatasetError("series/labels length mismatch");
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].empty())
      throw DatasetError("series " + std::to_string(i) + " is empty");
    for (double v : series[i].values) {
      if (!std::isfinite(v))
        throw DatasetError("series " + std::to_string(i) +
                           " contains a non-finite value");
    }
  }
  LabeledDataset d;
  d.series = std::move(series);
  d.labels = std::move(labels);
  std::set<std::string> distinct(d.labels.begin(), d.labels.end());
  d.classes.assign(distinct.begin(), distinct.end());
  return d;
}

std::vector<double> z_normalize(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("z_normalize: empty input");
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);
  std::vector<double> out(x.size());
  if (sd < kStdFloor) {
    return out;  // constant prefix: all zeros
  }
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - mean) / sd;
  return out;
}

Snapshot snapshot(const TimeSeries& t, std::size_t s) {
  if (s < 1) throw std::invalid_argument("snapshot: prefix length must be >= 1");
  const std::size_t eff = std::min(s, t.size());
  Snapshot snap;
  snap.values.assign(t.values.begin(), t.values.begin() + static_cast<long>(eff));
  snap.length = eff;
  snap.normalized = false;
  return snap;
}

Snapshot normalized_snapshot(std::span<const double> values, std::size_t s) {
  if (s < 1) throw std::invalid_argument("snapshot: prefix length must be >= 1");
  const std::size_t eff = std::min(s, values.size());
  Snapshot snap;
  snap.values = z_normalize(values.subspan(0, eff));
  snap.length = eff;
  snap.normalized = true;
  return snap;
}

SnapshotSchedule build_schedule(std::size_t n_max, std::size_t w) {
  if (n_max < 1) throw std::invalid_argument("build_schedule: n_max must be >= 1");
  if (w < 1) throw std::invalid_argument("build_schedule: w must be >= 1");
  const std::size_t levels = (n_max + w - 1) / w;
  SnapshotSchedule sched;
  sched.w = w;
  sched.lengths.reserve(levels);
  for (std::size_t i = 1; i <= levels; ++i) sched.lengths.push_back(i * w);
  return sched;
}

}  // namespace teaser
