#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "teaser/core.hpp"

namespace teaser {

// Synthetic benchmark: each class is a distinct short burst shape planted at
// a uniform-random offset on a noisy baseline, so the informative pattern
// appears at a different position in every series.
struct SynthSpec {
  std::size_t num_classes = 2;
  std::size_t n_train = 100;
  std::size_t n_test = 100;
  std::size_t len_min = 200;
  std::size_t len_max = 200;
  double offset_min_frac = 0.05;  // of the series length
  double offset_max_frac = 0.50;
  std::size_t burst_length = 0;  // 0 = max(8, len_min / 10)
  double amplitude = 4.0;
  double noise = 0.25;  // baseline standard deviation
};

struct SynthRecord {
  std::string split;  // "train" or "test"
  std::size_t index = 0;
  std::string label;
  std::size_t offset = 0;
  std::size_t length = 0;
};

struct SynthResult {
  LabeledDataset train;
  LabeledDataset test;
  std::vector<SynthRecord> records;
  std::size_t burst_length = 0;
};

SynthResult make_burst_dataset(const SynthSpec& spec, std::uint64_t seed);

// split,index,label,offset,length
void write_offsets_csv(const std::vector<SynthRecord>& records,
                       const std::string& path);

}  // namespace teaser
