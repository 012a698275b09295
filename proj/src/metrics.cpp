#include "teaser/metrics.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace teaser {

double accuracy(std::span<const std::pair<std::size_t, std::size_t>> truth_pred) {
  if (truth_pred.empty()) throw std::invalid_argument("accuracy: empty input");
  std::size_t correct = 0;
  for (const auto& [truth, pred] : truth_pred) {
    if (truth == pred) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(truth_pred.size());
}

double earliness(std::span<const std::pair<std::size_t, std::size_t>> used_len) {
  if (used_len.empty()) throw std::invalid_argument("earliness: empty input");
  double sum = 0.0;
  for (const auto& [used, len] : used_len) {
    if (len == 0 || used > len)
      throw std::invalid_argument("earliness: s_used must be in [0, length]");
    sum += static_cast<double>(used) / static_cast<double>(len);
  }
  return sum / static_cast<double>(used_len.size());
}

double harmonic_mean(double accuracy, double earliness) {
  const double timeliness = 1.0 - earliness;
  const double denom = timeliness + accuracy;
  if (denom <= 0.0) return 0.0;
  return 2.0 * timeliness * accuracy / denom;
}

ParetoCounts pareto_counts(std::span<const std::pair<double, double>> a,
                           std::span<const std::pair<double, double>> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("pareto_counts: length mismatch");
  ParetoCounts counts;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& [acc_a, earl_a] = a[i];
    const auto& [acc_b, earl_b] = b[i];
    const bool a_dominates =
        acc_a >= acc_b && earl_a <= earl_b && (acc_a > acc_b || earl_a < earl_b);
    const bool b_dominates =
        acc_b >= acc_a && earl_b <= earl_a && (acc_b > acc_a || earl_b < earl_a);
    if (a_dominates) {
      ++counts.wins;
    } else if (b_dominates) {
      ++counts.losses;
    } else {
      ++counts.ties;
    }
  }
  return counts;
}

EvalReport evaluate(const TeaserModel& model, const LabeledDataset& test) {
  if (test.size() == 0) throw std::invalid_argument("evaluate: empty test set");
  EvalReport report;
  report.n_test = test.size();
  report.per_series.reserve(test.size());

  const std::size_t horizon = model.schedule.lengths.empty()
                                  ? 0
                                  : model.schedule.lengths.back();
  double earliness_sum = 0.0;
  for (std::size_t j = 0; j < test.size(); ++j) {
    const Decision d = classify_series(model, test.series[j]);
    EvalReport::Row row;
    row.truth = test.labels[j];
    row.predicted = model.class_labels[d.label];
    row.s_used = d.s_used;
    row.length = test.series[j].size();
    row.forced = d.forced;
    if (row.length > horizon) ++report.n_overlong;
    const std::size_t truth_idx = [&] {
      auto it = std::lower_bound(model.class_labels.begin(),
                                 model.class_labels.end(), row.truth);
      if (it == model.class_labels.end() || *it != row.truth) return kNoIndex;
      return static_cast<std::size_t>(it - model.class_labels.begin());
    }();
    if (truth_idx == kNoIndex) ++report.n_unknown_label;
    if (truth_idx == d.label) ++report.n_correct;
    if (d.forced) ++report.n_forced;
    earliness_sum +=
        static_cast<double>(d.s_used) / static_cast<double>(row.length);
    report.per_series.push_back(std::move(row));
  }
  report.accuracy = static_cast<double>(report.n_correct) /
                    static_cast<double>(report.n_test);
  report.earliness = earliness_sum / static_cast<double>(report.n_test);
  report.hm = harmonic_mean(report.accuracy, report.earliness);
  return report;
}

std::vector<EvalReport> sweep_w(const LabeledDataset& train,
                                const LabeledDataset& test,
                                const TeaserConfig& base,
                                std::span<const std::size_t> w_values,
                                std::uint64_t seed) {
  if (w_values.empty()) throw std::invalid_argument("sweep_w: no w values");
  std::vector<EvalReport> reports;
  reports.reserve(w_values.size());
  for (std::size_t w : w_values) {
    TeaserConfig config = base;
    config.w = w;
    const TrainResult trained = teaser::train(train, config, seed);
    reports.push_back(evaluate(trained.model, test));
  }
  return reports;
}

void write_report_csv(const EvalReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "truth,prediction,s_used,length,forced\n";
  for (const auto& row : report.per_series) {
    out << row.truth << ',' << row.predicted << ',' << row.s_used << ','
        << row.length << ',' << (row.forced ? "true" : "false") << '\n';
  }
}

std::string summary_json(const EvalReport& report) {
  nlohmann::json j;
  j["accuracy"] = report.accuracy;
  j["earliness"] = report.earliness;
  j["hm"] = report.hm;
  j["n_test"] = report.n_test;
  j["n_correct"] = report.n_correct;
  j["n_forced"] = report.n_forced;
  j["forced_fraction"] = static_cast<double>(report.n_forced) /
                         static_cast<double>(report.n_test);
  return j.dump(2);
}

void write_summary_json(const EvalReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << summary_json(report) << '\n';
}

}  // namespace teaser
