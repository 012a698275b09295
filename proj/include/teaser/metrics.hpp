#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "teaser/pipeline.hpp"

namespace teaser {

double accuracy(std::span<const std::pair<std::size_t, std::size_t>> truth_pred);

// Mean of s_used / series length, in [0, 1]; lower is earlier.
double earliness(std::span<const std::pair<std::size_t, std::size_t>> used_len);

// 2 * (1 - earliness) * accuracy / ((1 - earliness) + accuracy), defined as 0
// when both terms vanish.
double harmonic_mean(double accuracy, double earliness);

struct ParetoCounts {
  std::size_t wins = 0;
  std::size_t ties = 0;
  std::size_t losses = 0;
};

// Per-dataset domination counts on (accuracy, earliness) pairs: a wins when
// it is at least as accurate and at least as early with one strict
// inequality; incomparable pairs count as ties.
ParetoCounts pareto_counts(
    std::span<const std::pair<double, double>> a,
    std::span<const std::pair<double, double>> b);

struct EvalReport {
  double accuracy = 0.0;
  double earliness = 0.0;
  double hm = 0.0;
  std::size_t n_test = 0;
  std::size_t n_correct = 0;
  std::size_t n_forced = 0;
  std::size_t n_unknown_label = 0;   // test labels the model never saw
  std::size_t n_overlong = 0;        // test series longer than the schedule
  struct Row {
    std::string truth;
    std::string predicted;
    std::size_t s_used = 0;
    std::size_t length = 0;
    bool forced = false;
  };
  std::vector<Row> per_series;
};

// Classifies every test series with the streaming engine and aggregates the
// metrics. Labels unknown to the model count as misclassifications.
EvalReport evaluate(const TeaserModel& model, const LabeledDataset& test);

// Trains and evaluates one model per interval length, reports in w order.
std::vector<EvalReport> sweep_w(const LabeledDataset& train,
                                const LabeledDataset& test,
                                const TeaserConfig& base,
                                std::span<const std::size_t> w_values,
                                std::uint64_t seed = 0);

// One row per series: truth,prediction,s_used,length,forced
void write_report_csv(const EvalReport& report, const std::string& path);

// Summary object: accuracy, earliness, hm, n_test, n_correct, n_forced,
// forced_fraction
void write_summary_json(const EvalReport& report, const std::string& path);
std::string summary_json(const EvalReport& report);

}  // namespace teaser
