#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace teaser {

// What a slave classifier reports for one snapshot: the predicted class, the
// full probability vector, and the gap between the two best probabilities.
struct SlaveOutput {
  std::size_t label = 0;      // argmax of probs, lowest index on ties
  std::vector<double> probs;  // sums to 1
  double delta_d = 0.0;       // best minus second best; == probs[0] when k == 1
};

// Normalizes a vector of non-negative scores into a SlaveOutput. Throws
// std::invalid_argument on an all-zero or negative input.
SlaveOutput make_slave_output(std::span<const double> scores);

// Feature vector handed to the paired master: the k class probabilities
// followed by delta_d.
std::vector<double> master_features(const SlaveOutput& out);

}  // namespace teaser
