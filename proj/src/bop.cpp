#include "teaser/bop.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cross_validation.hpp"
#include "teaser/rng.hpp"

namespace teaser {

namespace {

constexpr double kTau = 6.283185307179586476925287;

// Per-window feature vector: [Re X_1, Im X_1, Re X_2, Im X_2, ...] of the
// z-normalized window, word_length entries in total.
std::vector<double> window_features(std::span<const double> window,
                                    std::size_t word_length) {
  const std::vector<double> z = z_normalize(window);
  const std::size_t len = z.size();
  std::vector<double> feats;
  feats.reserve(word_length);
  for (std::size_t k = 1; k <= word_length / 2; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t t = 0; t < len; ++t) {
      const double angle = kTau * static_cast<double>(k * t) / static_cast<double>(len);
      re += z[t] * std::cos(angle);
      im -= z[t] * std::sin(angle);
    }
    feats.push_back(re);
    feats.push_back(im);
  }
  return feats;
}

struct Discretizer {
  std::size_t window_length = 0;
  std::size_t word_length = 0;
  std::vector<std::array<double, 3>> edges;
};

// Equi-depth boundaries per coefficient position, learned over all windows
// of all training series.
Discretizer learn_discretizer(const std::vector<std::vector<double>>& series,
                              const std::vector<std::size_t>& subset,
                              std::size_t window_length, std::size_t word_length) {
  Discretizer d;
  d.window_length = window_length;
  d.word_length = word_length;
  std::vector<std::vector<double>> columns(word_length);
  for (std::size_t idx : subset) {
    const auto& s = series[idx];
    for (std::size_t start = 0; start + window_length <= s.size(); ++start) {
      const auto feats = window_features(
          std::span<const double>(s.data() + start, window_length), word_length);
      for (std::size_t p = 0; p < word_length; ++p) columns[p].push_back(feats[p]);
    }
  }
  d.edges.resize(word_length);
  for (std::size_t p = 0; p < word_length; ++p) {
    auto& col = columns[p];
    std::sort(col.begin(), col.end());
    const std::size_t n = col.size();
    for (std::size_t q = 1; q <= 3; ++q) {
      d.edges[p][q - 1] = col[std::min(n * q / 4, n - 1)];
    }
  }
  return d;
}

std::uint32_t encode_word(const std::vector<double>& feats,
                          const std::vector<std::array<double, 3>>& edges) {
  std::uint32_t word = 0;
  for (std::size_t p = 0; p < feats.size(); ++p) {
    std::uint32_t symbol = 0;
    for (double e : edges[p]) {
      if (feats[p] >= e) ++symbol;
    }
    word |= symbol << (2 * p );
  }
  return word;
}

WordHistogram build_histogram(const Discretizer& d, std::span<const double> values) {
  std::map<std::uint32_t, double> counts;
  bool have_prev = false;
  std::uint32_t prev = 0;
  for (std::size_t start = 0; start + d.window_length <= values.size(); ++start) {
    const auto feats = window_features(values.subspan(start, d.window_length),
                                       d.word_length);
    const std::uint32_t word = encode_word(feats, d.edges);
    if (have_prev && word == prev) continue;  // numerosity reduction
    counts[word] += 1.0;
    prev = word;
    have_prev = true;
  }
  return WordHistogram(counts.begin(), counts.end());
}

// 1-NN over histograms; ties keep the earlier index.
std::size_t nearest_histogram(const WordHistogram& q,
                              const std::vector<WordHistogram>& hists,
                              const std::vector<std::size_t>& candidates) {
  std::size_t best = kNoIndex;
  double best_sim = -1.0;
  for (std::size_t idx : candidates) {
    const double sim = cosine_similarity(q, hists[idx]);
    if (sim > best_sim) {
      best_sim = sim;
      best = idx;
    }
  }
  return best;
}

struct GridPoint {
  std::size_t window_length;
  std::size_t word_length;
};

// Highest retained coefficient index is word/2; the window must have that
// many distinct non-DC bins.
bool feasible(const GridPoint& g, std::size_t snapshot_length) {
  return g.window_length <= snapshot_length &&
         g.window_length >= g.word_length / 2 + 1;
}

std::vector<GridPoint> candidate_grid(std::size_t snapshot_length) {
  const std::size_t half = (snapshot_length + 1) / 2;
  const std::size_t quarter = (snapshot_length + 3) / 4;
  std::vector<GridPoint> grid;
  for (std::size_t word : {std::size_t{4}, std::size_t{6}}) {
    for (std::size_t window : {half, quarter}) {
      GridPoint g{window, word};
      if (!feasible(g, snapshot_length)) continue;
      const bool dup = std::any_of(grid.begin(), grid.end(), [&](const GridPoint& o) {
        return o.window_length == g.window_length && o.word_length == g.word_length;
      });
      if (!dup) grid.push_back(g);
    }
  }
  return grid;
}

}  // namespace

double cosine_similarity(const WordHistogram& a, const WordHistogram& b) {
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [w, c] : a) na += c * c;
  for (const auto& [w, c] : b) nb += c * c;
  if (na == 0.0 || nb == 0.0) return 0.0;
  double dot = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (a[i].first > b[j].first) {
      ++j;
    } else {
      dot += a[i].second * b[j].second;
      ++i;
      ++j;
    }
  }
  return dot / std::sqrt(na * nb);
}

BopSlaveModel fit_bop_slave(const std::vector<std::vector<double>>& snapshots,
                            const std::vector<std::size_t>& labels,
                            std::size_t num_classes, std::uint64_t seed) {
  if (snapshots.empty()) throw DatasetError("fit_bop_slave: no snapshots");
  if (snapshots.size() != labels.size())
    throw DatasetError("fit_bop_slave: snapshots/labels length mismatch");
  std::vector<std::size_t> class_counts(num_classes, 0);
  for (std::size_t label : labels) {
    if (label >= num_classes) throw DatasetError("fit_bop_slave: label out of range");
    ++class_counts[label];
  }
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (class_counts[c] == 0)
      throw DatasetError("fit_bop_slave: class " + std::to_string(c) +
                         " has no examples");
  }
  const std::size_t snapshot_length = snapshots.front().size();
  for (const auto& s : snapshots) {
    if (s.size() != snapshot_length)
      throw std::invalid_argument("fit_bop_slave: snapshots differ in length");
  }

  const auto grid = candidate_grid(snapshot_length);
  if (grid.empty())
    throw std::invalid_argument(
        "fit_bop_slave: snapshot too short for any window/word combination");

  const std::size_t n = snapshots.size();
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;

  Rng rng(seed);
  const detail::FoldPlan folds = detail::make_folds(labels, num_classes, rng);

  GridPoint chosen = grid.front();
  double best_acc = 0.0;
  if (folds.usable()) {
    best_acc = -1.0;
    for (const auto& g : grid) {
      std::size_t correct = 0;
      for (std::size_t f = 0; f < folds.num_folds; ++f) {
        std::vector<std::size_t> train_idx;
        std::vector<std::size_t> val_idx;
        for (std::size_t i = 0; i < n; ++i) {
          (folds.fold_of[i] == f ? val_idx : train_idx).push_back(i);
        }
        if (val_idx.empty()) continue;
        const auto disc =
            learn_discretizer(snapshots, train_idx, g.window_length, g.word_length);
        std::vector<WordHistogram> hists(n);
        for (std::size_t i : train_idx) hists[i] = build_histogram(disc, snapshots[i]);
        for (std::size_t i : val_idx) {
          const auto qh = build_histogram(disc, snapshots[i]);
          const std::size_t nn = nearest_histogram(qh, hists, train_idx);
          if (nn != kNoIndex && labels[nn] == labels[i]) ++correct;
        }
      }
      const double acc = static_cast<double>(correct) / static_cast<double>(n);
      if (acc > best_acc) {  // ties keep the earlier grid point
        best_acc = acc;
        chosen = g;
      }
    }
  }

  const auto disc =
      learn_discretizer(snapshots, all, chosen.window_length, chosen.word_length);
  BopSlaveModel model;
  model.window_length = chosen.window_length;
  model.word_length = chosen.word_length;
  model.bin_edges = disc.edges;
  model.labels = labels;
  model.num_classes = num_classes;
  model.cv_accuracy = std::max(best_acc, 0.0);
  model.histograms.reserve(n);
  for (const auto& s : snapshots) model.histograms.push_back(build_histogram(disc, s));
  return model;
}

WordHistogram bop_histogram(const BopSlaveModel& model,
                            std::span<const double> values) {
  Discretizer d{model.window_length, model.word_length, model.bin_edges};
  return build_histogram(d, values);
}

SlaveOutput predict_proba_bop(const BopSlaveModel& model, const Snapshot& q,
                              std::size_t exclude) {
  if (model.histograms.empty())
    throw std::invalid_argument("predict_proba_bop: empty model");
  if (q.length < model.window_length)
    throw SnapshotTooShort("predict_proba_bop: query shorter than the window");

  const WordHistogram qh = bop_histogram(model, q.values);
  std::vector<double> class_sim(model.num_classes, 0.0);
  for (std::size_t i = 0; i < model.histograms.size(); ++i) {
    if (i == exclude) continue;
    const double sim = cosine_similarity(qh, model.histograms[i]);
    class_sim[model.labels[i]] = std::max(class_sim[model.labels[i]], sim);
  }

  double total = 0.0;
  for (double s : class_sim) total += s;
  if (total <= 0.0) {
    std::vector<double> uniform(model.num_classes, 1.0);
    return make_slave_output(uniform);
  }
  return make_slave_output(class_sim);
}

}  // namespace teaser
