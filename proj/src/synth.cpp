#include "teaser/synth.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "teaser/rng.hpp"

namespace teaser {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Class c carries c+1 oscillation cycles under a half-sine envelope.
double burst_value(std::size_t cls, std::size_t t, std::size_t burst_length,
                   double amplitude) {
  const double u = static_cast<double>(t) / static_cast<double>(burst_length - 1);
  const double envelope = std::sin(kPi * u);
  const double carrier = std::sin(2.0 * kPi * static_cast<double>(cls + 1) * u);
  return amplitude * envelope * carrier;
}

void validate(const SynthSpec& spec, std::size_t burst_length) {
  if (spec.num_classes < 2)
    throw std::invalid_argument("synth: need at least 2 classes");
  if (spec.n_train < 2 * spec.num_classes)
    throw std::invalid_argument("synth: need at least 2 train series per class");
  if (spec.n_test < 1) throw std::invalid_argument("synth: need test series");
  if (spec.len_min < 2 || spec.len_min > spec.len_max)
    throw std::invalid_argument("synth: bad length range");
  if (spec.offset_min_frac < 0.0 || spec.offset_max_frac > 1.0 ||
      spec.offset_min_frac > spec.offset_max_frac)
    throw std::invalid_argument("synth: bad offset range");
  if (burst_length < 4 || burst_length > spec.len_min)
    throw std::invalid_argument("synth: burst does not fit the shortest series");
  const auto max_offset = static_cast<std::size_t>(
      std::llround(spec.offset_max_frac * static_cast<double>(spec.len_min)));
  if (max_offset + burst_length > spec.len_min)
    throw std::invalid_argument("synth: burst at the latest offset overruns the series");
  if (spec.noise < 0.0) throw std::invalid_argument("synth: negative noise");
}

}  // namespace

SynthResult make_burst_dataset(const SynthSpec& spec, std::uint64_t seed) {
  const std::size_t burst_length =
      spec.burst_length > 0 ? spec.burst_length
                            : std::max<std::size_t>(8, spec.len_min / 10);
  validate(spec, burst_length);

  Rng rng(seed);
  SynthResult result;
  result.burst_length = burst_length;

  auto generate = [&](const std::string& split, std::size_t count) {
    std::vector<TimeSeries> series;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t cls = i % spec.num_classes;
      const std::size_t length =
          spec.len_min + rng.below(spec.len_max - spec.len_min + 1);
      const auto lo = static_cast<std::size_t>(
          std::llround(spec.offset_min_frac * static_cast<double>(length)));
      const auto hi = static_cast<std::size_t>(
          std::llround(spec.offset_max_frac * static_cast<double>(length)));
      const std::size_t offset = lo + rng.below(hi - lo + 1);

      TimeSeries t;
      t.values.resize(length);
      for (std::size_t p = 0; p < length; ++p) t.values[p] = spec.noise * rng.gaussian();
      for (std::size_t p = 0; p < burst_length && offset + p < length; ++p) {
        t.values[offset + p] += burst_value(cls, p, burst_length, spec.amplitude);
      }
      series.push_back(std::move(t));
      labels.push_back(std::to_string(cls));
      result.records.push_back(
          {split, i, std::to_string(cls), offset, length});
    }
    return LabeledDataset::make(std::move(series), std::move(labels));
  };

  result.train = generate("train", spec.n_train);
  result.test = generate("test", spec.n_test);
  return result;
}

void write_offsets_csv(const std::vector<SynthRecord>& records,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "split,index,label,offset,length\n";
  for (const auto& r : records) {
    out << r.split << ',' << r.index << ',' << r.label << ',' << r.offset << ','
        << r.length << '\n';
  }
}

}  // namespace teaser
