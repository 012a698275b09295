#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "teaser/bop.hpp"
#include "teaser/core.hpp"
#include "teaser/dtw.hpp"
#include "teaser/ocsvm.hpp"
#include "teaser/slave.hpp"

namespace teaser {

enum class SlaveKind { kDtw, kBop };

std::string to_string(SlaveKind kind);
SlaveKind slave_kind_from_string(const std::string& name);

struct TeaserConfig {
  std::size_t w = 0;  // 0 = auto: ceil(n_max / 20)
  SlaveKind slave_kind = SlaveKind::kDtw;
  double nu = 0.05;
  std::vector<double> gamma_grid = {1, 2, 5, 10, 20, 50, 100};
  std::vector<std::size_t> v_grid = {1, 2, 3, 4, 5};
};

// One slave/master pair. A level that could not be trained (some class has
// fewer than 2 series reaching its snapshot length) borrows the most recent
// trained pair via `owner`; its other fields are unset. `owner == kNoIndex`
// marks a level with no pair at all, skipped during prediction.
struct TeaserLevel {
  std::size_t owner = kNoIndex;
  std::optional<DtwSlaveModel> dtw;
  std::optional<BopSlaveModel> bop;
  MasterModel master;
  std::size_t snapshot_length = 0;  // input length the pair was trained at
  double gamma = 0.0;
};

struct TeaserModel {
  SnapshotSchedule schedule;
  std::vector<std::string> class_labels;
  SlaveKind slave_kind = SlaveKind::kDtw;
  double nu = 0.05;
  std::size_t v = 1;
  std::vector<TeaserLevel> levels;

  std::size_t num_classes() const { return class_labels.size(); }

  // The trained pair evaluated at `level`, nullptr when none exists.
  const TeaserLevel* effective_level(std::size_t level) const;
};

struct Decision {
  std::size_t label = 0;   // index into class_labels
  std::size_t s_used = 0;  // data points consumed when the label was fixed
  bool forced = false;     // emitted at stream end without reaching v

  bool operator==(const Decision&) const = default;
};

// Incremental per-series prediction state. Owned by exactly one stream.
struct StreamState {
  std::vector<double> buffer;
  std::size_t next_level = 0;
  std::optional<std::size_t> run_label;
  std::size_t run_length = 0;
  std::optional<Decision> decided;
  std::optional<std::size_t> last_label;  // most recent slave label, feeds forced emission
};

// Appends points and evaluates every newly completed snapshot level. Returns
// the decision once the same accepted label has occurred v times in a row.
// Throws std::logic_error when called after a decision.
std::optional<Decision> push(const TeaserModel& model, StreamState& state,
                             std::span<const double> points);

// Declares end of stream: evaluates the data left over past the last
// completed level, then falls back to a forced decision with the most recent
// slave label. Idempotent once decided.
Decision finish(const TeaserModel& model, StreamState& state);

// Offline replay: feeds t through push in w-sized chunks and finishes at the
// last point. Identical to the streaming path by construction.
Decision classify_series(const TeaserModel& model, const TimeSeries& t);

// Consecutive-agreement bookkeeping shared by the streaming path and the
// training replay. A rejection clears the streak; an accepted label extends
// it or restarts it at 1. Returns true once the streak reaches v.
bool update_streak(std::optional<std::size_t>& run_label, std::size_t& run_length,
                   bool accepted, std::size_t label, std::size_t v);

// One slave+master evaluation recorded during training replay. `s` is the
// number of data points consumed at the trigger: the schedule length for
// in-stream levels, the series length for the end-of-stream snapshot.
struct LevelEvaluation {
  std::size_t s = 0;
  bool accepted = false;
  std::size_t label = 0;
};

struct SeriesTrace {
  std::vector<LevelEvaluation> evals;
  std::size_t length = 0;
  std::size_t truth = 0;
};

// Decision the streaming engine would reach on this trace under threshold v.
Decision replay_trace(const SeriesTrace& trace, std::size_t v);

struct TrainLevelInfo {
  std::size_t snapshot_length = 0;
  bool trained = false;
  bool reused = false;
  double slave_cv_accuracy = 0.0;
  double gamma = 0.0;
  std::size_t n_usable = 0;
  std::size_t n_correct = 0;  // master training set size N'
  bool master_accept_all = false;
  bool master_converged = true;
};

struct TrainingReport {
  std::vector<TrainLevelInfo> levels;
  std::vector<double> hm_by_v;  // parallel to the sorted v grid
  std::vector<std::size_t> v_grid;
  std::size_t selected_v = 1;
  double train_hm = 0.0;
  double train_accuracy = 0.0;
  double train_earliness = 0.0;
  // Per training series: the leave-one-out replay of the prediction loop
  // (each series is withheld from the exemplar sets while classified, like
  // during master training). The v grid search runs on these.
  std::vector<SeriesTrace> traces;
};

struct TrainResult {
  TeaserModel model;
  TrainingReport report;
};

// The full training pipeline: per level, truncate, z-normalize, fit the
// slave with cross-validated hyper-parameters, compute leave-one-out slave
// outputs, keep the correctly classified ones and fit the one-class master
// on their features; finally pick v by replaying the prediction loop
// (leave-one-out as well) on the training set and maximizing the harmonic
// mean of accuracy and earliness.
TrainResult train(const LabeledDataset& data, const TeaserConfig& config,
                  std::uint64_t seed = 0);

}  // namespace teaser
