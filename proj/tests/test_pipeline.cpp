#include <doctest.h>

#include <cmath>

#include "teaser/metrics.hpp"
#include "teaser/pipeline.hpp"
#include "teaser/rng.hpp"
#include "teaser/synth.hpp"

using namespace teaser;

namespace {

// Deterministic pair behavior per level: the slave predicts the scripted
// label (its exemplar is the probe's own normalized prefix), the master
// accepts or rejects per script.
struct LevelScript {
  std::size_t label = 0;
  bool accept = true;
};

MasterModel rejecting_master() {
  MasterModel m;
  m.support_features = {{99.0, 99.0, 99.0}};
  m.alphas = {1.0};
  m.rho = 1.0;
  m.gamma = 1.0;
  return m;
}

MasterModel accepting_master() {
  MasterModel m;
  m.accept_all = true;
  return m;
}

TeaserModel scripted_model(const TimeSeries& probe, std::size_t w,
                           const std::vector<LevelScript>& script,
                           std::size_t v) {
  TeaserModel model;
  model.schedule.w = w;
  model.class_labels = {"A", "B"};
  model.slave_kind = SlaveKind::kDtw;
  model.v = v;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const std::size_t s_i = (i + 1) * w;
    model.schedule.lengths.push_back(s_i);
    TeaserLevel level;
    level.owner = i;
    level.snapshot_length = s_i;

    std::vector<double> self(probe.values.begin(),
                             probe.values.begin() + static_cast<long>(s_i));
    std::vector<double> far(s_i);
    for (std::size_t t = 0; t < s_i; ++t) far[t] = t % 2 == 0 ? 3.0 : -3.0;

    DtwSlaveModel slave;
    slave.num_classes = 2;
    const std::size_t scripted = script[i].label;
    slave.exemplars = {z_normalize(self), z_normalize(far)};
    slave.labels = {scripted, scripted == 0 ? std::size_t{1} : std::size_t{0}};
    level.dtw = std::move(slave);
    level.master = script[i].accept ? accepting_master() : rejecting_master();
    model.levels.push_back(std::move(level));
  }
  return model;
}

TimeSeries ramp(std::size_t len) {
  TimeSeries t;
  t.values.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    t.values[i] = static_cast<double>(i) + 0.1 * static_cast<double>(i % 3);
  }
  return t;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("streak bookkeeping follows the reset rules") {
  std::optional<std::size_t> label;
  std::size_t length = 0;
  CHECK_FALSE(update_streak(label, length, true, 4, 2));
  CHECK(length == 1);
  CHECK(update_streak(label, length, true, 4, 2));  // second agreement
  CHECK_FALSE(update_streak(label, length, false, 4, 2));  // rejection clears
  CHECK(length == 0);
  CHECK_FALSE(label.has_value());
  CHECK_FALSE(update_streak(label, length, true, 1, 2));
  CHECK_FALSE(update_streak(label, length, true, 2, 2));  // label change restarts at 1
  CHECK(length == 1);
  CHECK(*label == 2);
}

TEST_CASE("immediate acceptance decides at the first level") {
  const TimeSeries probe = ramp(8);
  const auto model = scripted_model(probe, 2, {{0, true}}, 1);
  StreamState state;
  const auto decision =
      push(model, state, std::span<const double>(probe.values.data(), 2));
  REQUIRE(decision.has_value());
  CHECK(*decision == Decision{0, 2, false});
}

TEST_CASE("a rejection interrupts the streak") {
  const TimeSeries probe = ramp(8);
  const auto model = scripted_model(
      probe, 2, {{0, true}, {0, false}, {0, true}, {0, true}}, 2);
  const Decision d = classify_series(model, probe);
  CHECK(d == Decision{0, 8, false});  // streak completes only at level 4
}

TEST_CASE("a label change restarts the streak at one") {
  const TimeSeries probe = ramp(8);
  const auto model =
      scripted_model(probe, 2, {{0, true}, {1, true}, {1, true}, {0, true}}, 2);
  const Decision d = classify_series(model, probe);
  CHECK(d == Decision{1, 6, false});  // B at levels 2 and 3
}

TEST_CASE("push after a decision is an error") {
  const TimeSeries probe = ramp(8);
  const auto model = scripted_model(probe, 2, {{0, true}}, 1);
  StreamState state;
  push(model, state, probe.values);
  REQUIRE(state.decided.has_value());
  const std::vector<double> more{1.0};
  CHECK_THROWS_AS(push(model, state, more), std::logic_error);
  CHECK(finish(model, state) == *state.decided);  // finish stays idempotent
}

TEST_CASE("series shorter than w gets one snapshot at its end") {
  const TimeSeries probe = ramp(4);
  const TimeSeries shorty{{probe.values[0], probe.values[1]}};

  const auto accepting = scripted_model(probe, 4, {{0, true}}, 1);
  const Decision d_accept = classify_series(accepting, shorty);
  CHECK(d_accept == Decision{0, 2, false});

  const auto rejecting = scripted_model(probe, 4, {{0, false}}, 1);
  const Decision d_forced = classify_series(rejecting, shorty);
  CHECK(d_forced == Decision{0, 2, true});
}

TEST_CASE("forced decision repeats the last evaluated label") {
  const TimeSeries probe = ramp(8);
  const auto model = scripted_model(
      probe, 2, {{0, false}, {1, false}, {1, false}, {1, false}}, 2);
  const Decision d = classify_series(model, probe);
  CHECK(d == Decision{1, 8, true});
}

TEST_CASE("empty stream cannot finish and empty series cannot classify") {
  const TimeSeries probe = ramp(4);
  const auto model = scripted_model(probe, 2, {{0, true}, {0, true}}, 1);
  StreamState state;
  CHECK_THROWS_AS(finish(model, state), std::invalid_argument);
  CHECK_THROWS_AS(classify_series(model, TimeSeries{}), std::invalid_argument);
}

TEST_CASE("point, chunk and offline replays agree on a trained model") {
  SynthSpec spec;
  spec.n_train = 24;
  spec.n_test = 12;
  spec.len_min = spec.len_max = 60;
  spec.noise = 0.25;
  const auto synth = make_burst_dataset(spec, 5);
  TeaserConfig config;
  config.w = 10;
  config.slave_kind = SlaveKind::kBop;
  const auto trained = train(synth.train, config, 5);

  Rng rng(6);
  for (const auto& series : synth.test.series) {
    const Decision offline = classify_series(trained.model, series);

    StreamState one_by_one;
    std::optional<Decision> d1;
    for (double v : series.values) {
      d1 = push(trained.model, one_by_one, {&v, 1});
      if (d1.has_value()) break;
    }
    if (!d1.has_value()) d1 = finish(trained.model, one_by_one);

    StreamState chunked;
    std::optional<Decision> d2;
    std::size_t pos = 0;
    while (pos < series.size() && !d2.has_value()) {
      const std::size_t chunk =
          std::min<std::size_t>(1 + rng.below(17), series.size() - pos);
      d2 = push(trained.model, chunked,
                std::span<const double>(series.values.data() + pos, chunk));
      pos += chunk;
    }
    if (!d2.has_value()) d2 = finish(trained.model, chunked);

    CHECK(offline == *d1);
    CHECK(offline == *d2);
  }
}

TEST_CASE("raising v never speeds up a decision") {
  SynthSpec spec;
  spec.n_train = 24;
  spec.n_test = 16;
  spec.len_min = spec.len_max = 60;
  const auto synth = make_burst_dataset(spec, 9);
  TeaserConfig config;
  config.w = 6;
  config.slave_kind = SlaveKind::kBop;
  const auto trained = train(synth.train, config, 9);

  for (std::size_t v = 1; v <= 4; ++v) {
    TeaserModel lo = trained.model;
    TeaserModel hi = trained.model;
    lo.v = v;
    hi.v = v + 1;
    for (const auto& series : synth.test.series) {
      CHECK(classify_series(lo, series).s_used <=
            classify_series(hi, series).s_used);
    }
  }
}

TEST_CASE("training traces are structurally sound and justify the report") {
  SynthSpec spec;
  spec.n_train = 20;
  spec.n_test = 2;
  spec.len_min = 40;
  spec.len_max = 60;  // ragged on purpose
  const auto synth = make_burst_dataset(spec, 21);
  TeaserConfig config;
  config.w = 7;  // does not divide the lengths
  config.slave_kind = SlaveKind::kBop;
  const auto trained = train(synth.train, config, 21);

  REQUIRE(trained.report.traces.size() == synth.train.size());
  std::size_t correct = 0;
  double earliness_sum = 0.0;
  for (std::size_t j = 0; j < synth.train.size(); ++j) {
    const auto& trace = trained.report.traces[j];
    CHECK(trace.length == synth.train.series[j].size());
    std::size_t prev = 0;
    for (const auto& ev : trace.evals) {
      CHECK(ev.s > prev);
      CHECK(ev.s <= trace.length);
      prev = ev.s;
      CHECK((ev.s % 7 == 0 || ev.s == trace.length));
    }
    const Decision d = replay_trace(trace, trained.model.v);
    CHECK(d.s_used <= trace.length);
    if (d.label == trace.truth) ++correct;
    earliness_sum +=
        static_cast<double>(d.s_used) / static_cast<double>(trace.length);
  }
  // replaying the traces at the selected v reproduces the reported metrics
  const double acc =
      static_cast<double>(correct) / static_cast<double>(synth.train.size());
  const double earl = earliness_sum / static_cast<double>(synth.train.size());
  CHECK(acc == doctest::Approx(trained.report.train_accuracy));
  CHECK(earl == doctest::Approx(trained.report.train_earliness));
  CHECK(harmonic_mean(acc, earl) == doctest::Approx(trained.report.train_hm));
}

TEST_CASE("auto interval length yields 20 levels") {
  SynthSpec spec;
  spec.n_train = 20;
  spec.n_test = 2;
  spec.len_min = spec.len_max = 100;
  const auto synth = make_burst_dataset(spec, 2);
  TeaserConfig config;
  config.slave_kind = SlaveKind::kBop;  // w = 0 -> auto
  const auto trained = train(synth.train, config, 2);
  CHECK(trained.model.schedule.w == 5);
  CHECK(trained.model.levels.size() == 20);
}

TEST_CASE("selected v maximizes the recorded harmonic means") {
  SynthSpec spec;
  spec.n_train = 20;
  spec.n_test = 2;
  spec.len_min = spec.len_max = 60;
  const auto synth = make_burst_dataset(spec, 13);
  TeaserConfig config;
  config.w = 10;
  config.slave_kind = SlaveKind::kBop;
  const auto trained = train(synth.train, config, 13);

  const auto& report = trained.report;
  REQUIRE(report.hm_by_v.size() == report.v_grid.size());
  std::size_t best = 0;
  for (std::size_t i = 1; i < report.hm_by_v.size(); ++i) {
    if (report.hm_by_v[i] > report.hm_by_v[best]) best = i;
  }
  CHECK(trained.model.v == report.v_grid[best]);
  CHECK(report.train_hm == doctest::Approx(report.hm_by_v[best]));
}

TEST_CASE("training instance of an easy class decides before the end") {
  std::vector<TimeSeries> series;
  std::vector<std::string> labels;
  Rng rng(33);
  for (int i = 0; i < 8; ++i) {
    TimeSeries up;
    TimeSeries down;
    for (std::size_t t = 0; t < 30; ++t) {
      up.values.push_back(static_cast<double>(t) + 0.2 * rng.gaussian());
      down.values.push_back(30.0 - static_cast<double>(t) + 0.2 * rng.gaussian());
    }
    series.push_back(up);
    labels.push_back("up");
    series.push_back(down);
    labels.push_back("down");
  }
  const auto data = LabeledDataset::make(series, labels);
  TeaserConfig config;
  config.w = 5;
  config.slave_kind = SlaveKind::kDtw;
  const auto trained = train(data, config, 4);

  const Decision d = classify_series(trained.model, data.series[0]);
  CHECK_FALSE(d.forced);
  CHECK(d.s_used <= data.series[0].size());
  CHECK(trained.model.class_labels[d.label] == "up");
}

TEST_CASE("levels without enough usable series reuse the previous pair") {
  std::vector<TimeSeries> series;
  std::vector<std::string> labels;
  Rng rng(8);
  for (int i = 0; i < 3; ++i) {
    TimeSeries long_series;
    for (std::size_t t = 0; t < 20; ++t) {
      long_series.values.push_back(std::sin(0.4 * static_cast<double>(t)) +
                                   0.1 * rng.gaussian());
    }
    series.push_back(long_series);
    labels.push_back("a");
    TimeSeries short_series;
    for (std::size_t t = 0; t < 10; ++t) {
      short_series.values.push_back(rng.uniform(-1, 1));
    }
    series.push_back(short_series);
    labels.push_back("b");
  }
  const auto data = LabeledDataset::make(series, labels);
  TeaserConfig config;
  config.w = 5;
  config.slave_kind = SlaveKind::kDtw;
  const auto trained = train(data, config, 1);

  REQUIRE(trained.model.levels.size() == 4);
  CHECK(trained.report.levels[0].trained);
  CHECK(trained.report.levels[1].trained);
  CHECK(trained.report.levels[2].reused);
  CHECK(trained.report.levels[3].reused);
  CHECK(trained.model.effective_level(2) == trained.model.effective_level(1));

  // the reused tail still classifies full-length series
  const Decision d = classify_series(trained.model, data.series[0]);
  CHECK(d.s_used <= 20);
}

TEST_CASE("train validates the dataset and configuration") {
  const auto one_class = LabeledDataset::make(
      {TimeSeries{{1, 2, 3}}, TimeSeries{{2, 3, 4}}}, {"x", "x"});
  CHECK_THROWS_AS(train(one_class, TeaserConfig{}, 0), DatasetError);

  const auto lonely = LabeledDataset::make(
      {TimeSeries{{1, 2, 3}}, TimeSeries{{2, 3, 4}}, TimeSeries{{9, 8, 7}}},
      {"x", "x", "y"});
  CHECK_THROWS_AS(train(lonely, TeaserConfig{}, 0), DatasetError);

  const auto ok = LabeledDataset::make(
      {TimeSeries{{1, 2, 3}}, TimeSeries{{2, 3, 4}}, TimeSeries{{9, 8, 7}},
       TimeSeries{{8, 7, 6}}},
      {"x", "x", "y", "y"});
  TeaserConfig bad_nu;
  bad_nu.nu = 0.0;
  CHECK_THROWS_AS(train(ok, bad_nu, 0), std::invalid_argument);
  TeaserConfig bad_v;
  bad_v.v_grid = {};
  CHECK_THROWS_AS(train(ok, bad_v, 0), std::invalid_argument);
}

}  // TEST_SUITE
