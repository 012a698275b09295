#include "teaser/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

#include "teaser/metrics.hpp"
#include "teaser/rng.hpp"

namespace teaser {

namespace {

SlaveOutput predict_slave(const TeaserLevel& level, SlaveKind kind,
                          const Snapshot& q, std::size_t exclude = kNoIndex) {
  if (kind == SlaveKind::kDtw) return predict_proba_dtw(*level.dtw, q, exclude);
  return predict_proba_bop(*level.bop, q, exclude);
}

struct SnapshotEvaluation {
  bool evaluated = false;
  bool accepted = false;
  std::size_t label = 0;
};

// Runs the pair owned by `level` on the z-normalized buffer prefix. `limit`
// caps the prefix (the full buffer at end of stream); the pair never sees
// more points than it was trained on. `exclude` drops one training exemplar,
// used when replaying the training set leave-one-out.
SnapshotEvaluation evaluate_snapshot(const TeaserModel& model, std::size_t level,
                                     std::span<const double> buffer,
                                     std::size_t limit,
                                     std::size_t exclude = kNoIndex) {
  SnapshotEvaluation result;
  const TeaserLevel* pair = model.effective_level(level);
  if (pair == nullptr) return result;
  const std::size_t s = std::min({limit, pair->snapshot_length, buffer.size()});
  if (s == 0) return result;
  const Snapshot snap = normalized_snapshot(buffer, s);
  SlaveOutput out;
  try {
    out = predict_slave(*pair, model.slave_kind, snap, exclude);
  } catch (const SnapshotTooShort&) {
    return result;  // caller skips this level
  }
  result.evaluated = true;
  result.label = out.label;
  result.accepted = master_decide(pair->master, master_features(out));
  return result;
}

}  // namespace

std::string to_string(SlaveKind kind) {
  return kind == SlaveKind::kDtw ? "dtw" : "bop";
}

SlaveKind slave_kind_from_string(const std::string& name) {
  if (name == "dtw") return SlaveKind::kDtw;
  if (name == "bop") return SlaveKind::kBop;
  throw std::invalid_argument("unknown slave kind: " + name);
}

const TeaserLevel* TeaserModel::effective_level(std::size_t level) const {
  if (level >= levels.size()) return nullptr;
  const std::size_t owner = levels[level].owner;
  if (owner == kNoIndex) return nullptr;
  return &levels[owner];
}

bool update_streak(std::optional<std::size_t>& run_label, std::size_t& run_length,
                   bool accepted, std::size_t label, std::size_t v) {
  if (!accepted) {
    run_label.reset();
    run_length = 0;
    return false;
  }
  if (run_label.has_value() && *run_label == label) {
    ++run_length;
  } else {
    run_label = label;
    run_length = 1;
  }
  return run_length >= v;
}

std::optional<Decision> push(const TeaserModel& model, StreamState& state,
                             std::span<const double> points) {
  if (state.decided.has_value())
    throw std::logic_error("push: stream already decided");
  state.buffer.insert(state.buffer.end(), points.begin(), points.end());

  const auto& lengths = model.schedule.lengths;
  while (!state.decided.has_value() && state.next_level < lengths.size() &&
         state.buffer.size() >= lengths[state.next_level]) {
    const std::size_t level = state.next_level;
    const auto ev = evaluate_snapshot(model, level, state.buffer, lengths[level]);
    if (ev.evaluated) {
      state.last_label = ev.label;
      if (update_streak(state.run_label, state.run_length, ev.accepted, ev.label,
                        model.v)) {
        state.decided = Decision{*state.run_label, lengths[level], false};
      }
    }
    ++state.next_level;
  }
  return state.decided;
}

Decision finish(const TeaserModel& model, StreamState& state) {
  if (state.decided.has_value()) return *state.decided;
  const std::size_t n = state.buffer.size();
  if (n == 0) throw std::invalid_argument("finish: empty stream");

  const auto& lengths = model.schedule.lengths;
  const bool fresh_data =
      state.next_level == 0 || n > lengths[state.next_level - 1];
  if (state.next_level < lengths.size() && fresh_data) {
    const auto ev = evaluate_snapshot(model, state.next_level, state.buffer, n);
    if (ev.evaluated) {
      state.last_label = ev.label;
      if (update_streak(state.run_label, state.run_length, ev.accepted, ev.label,
                        model.v)) {
        state.decided = Decision{*state.run_label, n, false};
      }
    }
  }
  if (!state.decided.has_value()) {
    state.decided = Decision{state.last_label.value_or(0), n, true};
  }
  return *state.decided;
}

Decision classify_series(const TeaserModel& model, const TimeSeries& t) {
  if (t.empty()) throw std::invalid_argument("classify_series: empty series");
  StreamState state;
  const std::size_t w = model.schedule.w;
  std::size_t pos = 0;
  while (pos < t.size() && !state.decided.has_value()) {
    const std::size_t chunk = std::min(w, t.size() - pos);
    push(model, state, std::span<const double>(t.values.data() + pos, chunk));
    pos += chunk;
  }
  if (state.decided.has_value()) return *state.decided;
  return finish(model, state);
}

Decision replay_trace(const SeriesTrace& trace, std::size_t v) {
  std::optional<std::size_t> run_label;
  std::size_t run_length = 0;
  std::optional<std::size_t> last_label;
  for (const auto& ev : trace.evals) {
    last_label = ev.label;
    if (update_streak(run_label, run_length, ev.accepted, ev.label, v)) {
      return Decision{*run_label, ev.s, false};
    }
  }
  return Decision{last_label.value_or(0), trace.length, true};
}

TrainResult train(const LabeledDataset& data, const TeaserConfig& config,
                  std::uint64_t seed) {
  const std::size_t k = data.num_classes();
  if (k < 2) throw DatasetError("train: need at least 2 classes");
  if (config.nu <= 0.0 || config.nu > 1.0)
    throw std::invalid_argument("train: nu must be in (0, 1]");
  if (config.v_grid.empty()) throw std::invalid_argument("train: empty v grid");
  for (std::size_t v : config.v_grid) {
    if (v < 1) throw std::invalid_argument("train: v must be >= 1");
  }
  if (config.gamma_grid.empty())
    throw std::invalid_argument("train: empty gamma grid");

  const std::size_t n_series = data.size();
  std::vector<std::size_t> truth(n_series);
  std::vector<std::size_t> class_counts(k, 0);
  for (std::size_t j = 0; j < n_series; ++j) {
    truth[j] = data.class_index(data.labels[j]);
    ++class_counts[truth[j]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (class_counts[c] < 2)
      throw DatasetError("train: class '" + data.classes[c] +
                         "' has fewer than 2 examples");
  }

  const std::size_t n_max = data.n_max();
  const std::size_t w = config.w > 0 ? config.w : (n_max + 19) / 20;
  TrainResult result;
  TeaserModel& model = result.model;
  model.schedule = build_schedule(n_max, w);
  model.class_labels = data.classes;
  model.slave_kind = config.slave_kind;
  model.nu = config.nu;
  const std::size_t n_levels = model.schedule.levels();
  model.levels.resize(n_levels);
  result.report.levels.resize(n_levels);

  Rng root(seed);

  // Dataset indices each trained level saw, for leave-one-out replay below.
  std::vector<std::vector<std::size_t>> level_members(n_levels);

  for (std::size_t i = 0; i < n_levels; ++i) {
    const std::size_t s_i = model.schedule.lengths[i];
    TeaserLevel& level = model.levels[i];
    TrainLevelInfo& info = result.report.levels[i];
    info.snapshot_length = s_i;

    std::vector<std::size_t> usable;
    std::vector<std::size_t> usable_counts(k, 0);
    for (std::size_t j = 0; j < n_series; ++j) {
      if (data.series[j].size() >= s_i) {
        usable.push_back(j);
        ++usable_counts[truth[j]];
      }
    }
    info.n_usable = usable.size();

    bool trainable =
        *std::min_element(usable_counts.begin(), usable_counts.end()) >= 2;
    if (trainable && config.slave_kind == SlaveKind::kBop) {
      // The shortest usable window still has to fit the word length.
      trainable = s_i >= 3;
    }
    if (!trainable) {
      level.owner = i > 0 ? model.levels[i - 1].owner : kNoIndex;
      info.reused = level.owner != kNoIndex;
      continue;
    }

    std::vector<std::vector<double>> snapshots;
    std::vector<std::size_t> snapshot_labels;
    snapshots.reserve(usable.size());
    for (std::size_t j : usable) {
      snapshots.push_back(
          z_normalize(std::span<const double>(data.series[j].values.data(), s_i)));
      snapshot_labels.push_back(truth[j]);
    }

    Rng level_rng = root.fork(i);
    level.owner = i;
    level.snapshot_length = s_i;
    level_members[i] = usable;
    double cv_accuracy = 0.0;
    if (config.slave_kind == SlaveKind::kDtw) {
      level.dtw = fit_dtw_slave(snapshots, snapshot_labels, k, level_rng.next_u64());
      cv_accuracy = level.dtw->cv_accuracy;
    } else {
      try {
        level.bop =
            fit_bop_slave(snapshots, snapshot_labels, k, level_rng.next_u64());
      } catch (const std::invalid_argument&) {
        // no feasible window/word combination at this snapshot length
        level.owner = i > 0 ? model.levels[i - 1].owner : kNoIndex;
        level.snapshot_length = 0;
        level_members[i].clear();
        info.reused = level.owner != kNoIndex;
        continue;
      }
      cv_accuracy = level.bop->cv_accuracy;
    }
    info.trained = true;
    info.slave_cv_accuracy = cv_accuracy;

    // Leave-one-out slave outputs on the training snapshots; the master
    // only ever sees features of correctly classified instances.
    std::vector<std::vector<double>> correct_features;
    std::vector<std::vector<double>> incorrect_features;
    for (std::size_t pos = 0; pos < snapshots.size(); ++pos) {
      Snapshot snap{snapshots[pos], s_i, true};
      const SlaveOutput out = predict_slave(level, config.slave_kind, snap, pos);
      auto& bucket = out.label == snapshot_labels[pos] ? correct_features
                                                       : incorrect_features;
      bucket.push_back(master_features(out));
    }
    info.n_correct = correct_features.size();

    double gamma = config.gamma_grid.front();
    const std::uint64_t master_seed = level_rng.next_u64();
    if (correct_features.size() >= 2) {
      gamma = select_gamma(correct_features, incorrect_features, config.nu,
                           config.gamma_grid, master_seed);
    }
    level.gamma = gamma;
    info.gamma = gamma;
    level.master = train_ocsvm(correct_features, config.nu, gamma, master_seed);
    info.master_accept_all = level.master.accept_all;
    info.master_converged = level.master.converged;
  }

  // Replay the prediction loop over the training set once, leave-one-out:
  // each series is withheld from the exemplar sets while it is classified,
  // mirroring how the masters were trained. Memory-based slaves would
  // otherwise recognize every training series exactly and report a perfect
  // streak at every level, making the v search meaningless. The v grid
  // search below then only re-runs the cheap streak bookkeeping.
  auto member_position = [&](std::size_t level, std::size_t series_idx) {
    const std::size_t owner = model.levels[level].owner;
    if (owner == kNoIndex) return kNoIndex;
    const auto& members = level_members[owner];
    const auto it = std::lower_bound(members.begin(), members.end(), series_idx);
    if (it == members.end() || *it != series_idx) return kNoIndex;
    return static_cast<std::size_t>(it - members.begin());
  };
  result.report.traces.reserve(n_series);
  for (std::size_t j = 0; j < n_series; ++j) {
    const auto& values = data.series[j].values;
    SeriesTrace trace;
    trace.length = values.size();
    trace.truth = truth[j];
    std::size_t next = n_levels;
    for (std::size_t i = 0; i < n_levels; ++i) {
      if (model.schedule.lengths[i] > values.size()) {
        next = i;
        break;
      }
      const auto ev = evaluate_snapshot(model, i, values, model.schedule.lengths[i],
                                        member_position(i, j));
      if (ev.evaluated) {
        trace.evals.push_back({model.schedule.lengths[i], ev.accepted, ev.label});
      }
    }
    if (next < n_levels &&
        (next == 0 || values.size() > model.schedule.lengths[next - 1])) {
      const auto ev = evaluate_snapshot(model, next, values, values.size(),
                                        member_position(next, j));
      if (ev.evaluated) {
        trace.evals.push_back({values.size(), ev.accepted, ev.label});
      }
    }
    result.report.traces.push_back(std::move(trace));
  }

  std::vector<std::size_t> v_grid = config.v_grid;
  std::sort(v_grid.begin(), v_grid.end());
  v_grid.erase(std::unique(v_grid.begin(), v_grid.end()), v_grid.end());
  result.report.v_grid = v_grid;

  double best_hm = -1.0;
  for (std::size_t v : v_grid) {
    std::size_t n_correct = 0;
    double earliness_sum = 0.0;
    for (const auto& trace : result.report.traces) {
      const Decision d = replay_trace(trace, v);
      if (d.label == trace.truth) ++n_correct;
      earliness_sum +=
          static_cast<double>(d.s_used) / static_cast<double>(trace.length);
    }
    const double acc = static_cast<double>(n_correct) /
                       static_cast<double>(n_series);
    const double earl = earliness_sum / static_cast<double>(n_series);
    const double hm = harmonic_mean(acc, earl);
    result.report.hm_by_v.push_back(hm);
    if (hm > best_hm) {  // ties keep the smaller v
      best_hm = hm;
      model.v = v;
      result.report.train_accuracy = acc;
      result.report.train_earliness = earl;
    }
  }
  result.report.selected_v = model.v;
  result.report.train_hm = best_hm;
  return result;
}

}  // namespace teaser
