#include "teaser/slave.hpp"

#include <stdexcept>

namespace teaser {

SlaveOutput make_slave_output(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("make_slave_output: empty scores");
  double sum = 0.0;
  for (double s : scores) {
    if (s < 0.0) throw std::invalid_argument("make_slave_output: negative score");
    sum += s;
  }
  if (sum <= 0.0) throw std::invalid_argument("make_slave_output: all-zero scores");

  SlaveOutput out;
  out.probs.resize(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out.probs[i] = scores[i] / sum;

  std::size_t best = 0;
  for (std::size_t i = 1; i < out.probs.size(); ++i) {
    if (out.probs[i] > out.probs[best]) best = i;
  }
  out.label = best;

  if (out.probs.size() == 1) {
    out.delta_d = out.probs[0];
    return out;
  }
  double second = 0.0;
  bool have_second = false;
  for (std::size_t i = 0; i < out.probs.size(); ++i) {
    if (i == best) continue;
    if (!have_second || out.probs[i] > second) {
      second = out.probs[i];
      have_second = true;
    }
  }
  out.delta_d = out.probs[best] - second;
  return out;
}

std::vector<double> master_features(const SlaveOutput& out) {
  std::vector<double> f = out.probs;
  f.push_back(out.delta_d);
  return f;
}

}  // namespace teaser
