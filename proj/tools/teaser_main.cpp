#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "teaser/dataset_io.hpp"
#include "teaser/metrics.hpp"
#include "teaser/model_io.hpp"
#include "teaser/pipeline.hpp"
#include "teaser/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitTraining = 3;

struct CommonOptions {
  std::string w = "auto";
  std::string slave = "dtw";
  double nu = 0.05;
  std::string gamma_grid = "1,2,5,10,20,50,100";
  std::string v_grid = "1,2,3,4,5";
  std::uint64_t seed = 0;
};

void add_common_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--w", opts.w, "interval length in data points, or 'auto' (= ceil(n_max/20))")
      ->envname("TEASER_W");
  cmd->add_option("--slave", opts.slave, "slave classifier: dtw | bop")
      ->check(CLI::IsMember({"dtw", "bop"}))
      ->envname("TEASER_SLAVE");
  cmd->add_option("--nu", opts.nu, "one-class SVM nu (fraction of dismissible samples)")
      ->envname("TEASER_NU");
  cmd->add_option("--gamma-grid", opts.gamma_grid, "comma-separated RBF gamma grid")
      ->envname("TEASER_GAMMA_GRID");
  cmd->add_option("--v-grid", opts.v_grid, "comma-separated agreement thresholds to search")
      ->envname("TEASER_V_GRID");
  cmd->add_option("--seed", opts.seed, "seed for all randomized steps")
      ->envname("TEASER_SEED");
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw CLI::ValidationError("empty numeric list: " + text);
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_double_list(text)) {
    if (v < 1) throw CLI::ValidationError("list entries must be >= 1: " + text);
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

teaser::TeaserConfig make_config(const CommonOptions& opts) {
  teaser::TeaserConfig config;
  if (opts.w == "auto") {
    config.w = 0;
  } else {
    const long long w = std::stoll(opts.w);
    if (w < 1) throw CLI::ValidationError("--w must be >= 1 or 'auto'");
    config.w = static_cast<std::size_t>(w);
  }
  config.slave_kind = teaser::slave_kind_from_string(opts.slave);
  config.nu = opts.nu;
  config.gamma_grid = parse_double_list(opts.gamma_grid);
  config.v_grid = parse_size_list(opts.v_grid);
  return config;
}

void print_train_report(const teaser::TrainingReport& report,
                        const teaser::TeaserModel& model) {
  std::printf("levels: %zu (w = %zu)\n", model.levels.size(), model.schedule.w);
  std::printf("selected v: %zu\n", model.v);
  std::printf("%-6s %-6s %-9s %-8s %-7s %-7s %s\n", "level", "s", "status",
              "cv_acc", "gamma", "N'", "master");
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const auto& info = report.levels[i];
    const char* status = info.trained ? "trained" : (info.reused ? "reused" : "none");
    if (info.trained) {
      std::printf("%-6zu %-6zu %-9s %-8.3f %-7g %-7zu %s\n", i + 1,
                  info.snapshot_length, status, info.slave_cv_accuracy, info.gamma,
                  info.n_correct,
                  info.master_accept_all ? "accept-all" : "sphere");
      if (!info.master_converged) {
        std::fprintf(stderr, "warning: master at level %zu hit the iteration cap\n",
                     i + 1);
      }
    } else {
      std::printf("%-6zu %-6zu %-9s\n", i + 1, info.snapshot_length, status);
    }
  }
  std::printf("train accuracy: %.4f earliness: %.4f hm: %.4f\n",
              report.train_accuracy, report.train_earliness, report.train_hm);
}

int cmd_train(const std::string& train_file, const std::string& out,
              const CommonOptions& opts) {
  const teaser::LabeledDataset data = teaser::load_ucr(train_file);
  const teaser::TeaserConfig config = make_config(opts);
  const teaser::TrainResult result = teaser::train(data, config, opts.seed);
  teaser::save_model(result.model, out);
  print_train_report(result.report, result.model);
  std::printf("model written to %s\n", out.c_str());
  return kExitOk;
}

int cmd_evaluate(const std::string& model_file, const std::string& test_file,
                 const std::string& out_csv, const std::string& out_json) {
  const teaser::TeaserModel model = teaser::load_model(model_file);
  const teaser::LabeledDataset test = teaser::load_ucr(test_file);
  const teaser::EvalReport report = teaser::evaluate(model, test);
  if (report.n_unknown_label > 0) {
    std::fprintf(stderr,
                 "warning: %zu test series carry labels unknown to the model "
                 "(counted as misclassified)\n",
                 report.n_unknown_label);
  }
  if (report.n_overlong > 0) {
    std::fprintf(stderr,
                 "warning: %zu test series are longer than the model's schedule; "
                 "points past level %zu are ignored\n",
                 report.n_overlong, model.levels.size());
  }
  if (!out_csv.empty()) teaser::write_report_csv(report, out_csv);
  if (!out_json.empty()) teaser::write_summary_json(report, out_json);
  std::printf("%s\n", teaser::summary_json(report).c_str());
  return kExitOk;
}

int cmd_stream(const std::string& model_file, const std::string& input) {
  const teaser::TeaserModel model = teaser::load_model(model_file);
  std::ifstream file;
  std::istream* in = &std::cin;
  if (input != "-") {
    file.open(input);
    if (!file) throw teaser::ParseError("cannot open stream input: " + input);
    in = &file;
  }

  std::map<std::string, teaser::StreamState> states;
  std::map<std::string, bool> done;
  auto emit = [&](const std::string& id, const teaser::Decision& d) {
    std::printf("%s,%s,%zu,%s\n", id.c_str(),
                model.class_labels[d.label].c_str(), d.s_used,
                d.forced ? "true" : "false");
    std::fflush(stdout);
    done[id] = true;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(*in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 >= line.size()) {
      std::fprintf(stderr, "warning: line %zu malformed, skipped: %s\n", line_no,
                   line.c_str());
      continue;
    }
    const std::string id = line.substr(0, comma);
    const std::string payload = line.substr(comma + 1);
    if (done.count(id) != 0) {
      std::fprintf(stderr, "warning: line %zu: series %s already decided, ignored\n",
                   line_no, id.c_str());
      continue;
    }
    if (payload == "end") {
      auto it = states.find(id);
      if (it == states.end()) {
        std::fprintf(stderr, "warning: line %zu: end marker for unknown series %s\n",
                     line_no, id.c_str());
        continue;
      }
      emit(id, teaser::finish(model, it->second));
      continue;
    }
    double value = 0.0;
    try {
      std::size_t consumed = 0;
      value = std::stod(payload, &consumed);
      if (consumed != payload.size()) throw std::invalid_argument(payload);
    } catch (const std::exception&) {
      std::fprintf(stderr, "warning: line %zu malformed, skipped: %s\n", line_no,
                   line.c_str());
      continue;
    }
    auto& state = states[id];
    const auto decision = teaser::push(model, state, {&value, 1});
    if (decision.has_value()) emit(id, *decision);
  }
  // input exhausted: declare the remaining streams ended
  for (auto& [id, state] : states) {
    if (done.count(id) == 0 && !state.buffer.empty()) {
      emit(id, teaser::finish(model, state));
    }
  }
  return kExitOk;
}

int cmd_synth(const teaser::SynthSpec& spec, std::uint64_t seed,
              const std::string& out_dir) {
  const teaser::SynthResult result = teaser::make_burst_dataset(spec, seed);
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  teaser::save_ucr(result.train, (dir / "train.csv").string());
  teaser::save_ucr(result.test, (dir / "test.csv").string());
  teaser::write_offsets_csv(result.records, (dir / "offsets.csv").string());
  std::printf("wrote %zu train / %zu test series (burst length %zu) to %s\n",
              result.train.size(), result.test.size(), result.burst_length,
              out_dir.c_str());
  return kExitOk;
}

int cmd_sweep(const std::string& train_file, const std::string& test_file,
              const std::string& w_list, const std::string& out_csv,
              const CommonOptions& opts) {
  const teaser::LabeledDataset train = teaser::load_ucr(train_file);
  const teaser::LabeledDataset test = teaser::load_ucr(test_file);
  const teaser::TeaserConfig config = make_config(opts);
  const std::vector<std::size_t> w_values = parse_size_list(w_list);
  const auto reports = teaser::sweep_w(train, test, config, w_values, opts.seed);

  std::printf("%-8s %-10s %-10s %-10s %s\n", "w", "accuracy", "earliness", "hm",
              "forced");
  std::ofstream csv;
  if (!out_csv.empty()) {
    csv.open(out_csv);
    if (!csv) throw std::runtime_error("cannot open for writing: " + out_csv);
    csv << "w,accuracy,earliness,hm,forced_fraction\n";
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const double forced = static_cast<double>(r.n_forced) /
                          static_cast<double>(r.n_test);
    std::printf("%-8zu %-10.4f %-10.4f %-10.4f %.4f\n", w_values[i], r.accuracy,
                r.earliness, r.hm, forced);
    if (csv.is_open()) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g\n", w_values[i],
                    r.accuracy, r.earliness, r.hm, forced);
      csv << buf;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"teaser: two-tier early time-series classification"};
  app.require_subcommand(1);

  CommonOptions opts;

  auto* train_cmd = app.add_subcommand("train", "train a model from a UCR-style file");
  std::string train_file;
  std::string model_out = "teaser-model.json";
  train_cmd->add_option("--train", train_file, "training dataset")->required();
  train_cmd->add_option("--out", model_out, "model output path")->envname("TEASER_OUT");
  add_common_options(train_cmd, opts);

  auto* eval_cmd = app.add_subcommand("evaluate", "evaluate a model on a test file");
  std::string model_file;
  std::string test_file;
  std::string out_csv;
  std::string out_json;
  eval_cmd->add_option("--model", model_file, "model file")->required();
  eval_cmd->add_option("--test", test_file, "test dataset")->required();
  eval_cmd->add_option("--out-csv", out_csv, "per-series report CSV");
  eval_cmd->add_option("--out-json", out_json, "summary JSON");

  auto* stream_cmd = app.add_subcommand(
      "stream", "classify live 'id,value' lines ('id,end' closes a series)");
  std::string stream_model;
  std::string stream_input = "-";
  stream_cmd->add_option("--model", stream_model, "model file")->required();
  stream_cmd->add_option("--input", stream_input, "input file, '-' for stdin");

  auto* synth_cmd = app.add_subcommand("synth", "generate a planted-burst dataset");
  teaser::SynthSpec spec;
  std::uint64_t synth_seed = 0;
  std::string out_dir = "synth-data";
  std::size_t fixed_length = 0;
  synth_cmd->add_option("--classes", spec.num_classes, "number of classes");
  synth_cmd->add_option("--train", spec.n_train, "train series count");
  synth_cmd->add_option("--test", spec.n_test, "test series count");
  synth_cmd->add_option("--length", fixed_length, "fixed series length");
  synth_cmd->add_option("--length-min", spec.len_min, "minimum series length");
  synth_cmd->add_option("--length-max", spec.len_max, "maximum series length");
  synth_cmd->add_option("--offset-min", spec.offset_min_frac,
                        "earliest burst offset as a fraction of the length");
  synth_cmd->add_option("--offset-max", spec.offset_max_frac,
                        "latest burst offset as a fraction of the length");
  synth_cmd->add_option("--burst-len", spec.burst_length, "burst length, 0 = auto");
  synth_cmd->add_option("--noise", spec.noise, "baseline noise level");
  synth_cmd->add_option("--amplitude", spec.amplitude, "burst amplitude");
  synth_cmd->add_option("--seed", synth_seed, "generator seed")->envname("TEASER_SEED");
  synth_cmd->add_option("--out-dir", out_dir, "output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "train/evaluate across interval lengths");
  std::string sweep_train;
  std::string sweep_test;
  std::string sweep_w_list;
  std::string sweep_csv;
  sweep_cmd->add_option("--train", sweep_train, "training dataset")->required();
  sweep_cmd->add_option("--test", sweep_test, "test dataset")->required();
  sweep_cmd->add_option("--w-list", sweep_w_list, "comma-separated interval lengths")
      ->required();
  sweep_cmd->add_option("--out-csv", sweep_csv, "summary CSV path");
  add_common_options(sweep_cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(train_file, model_out, opts);
    if (eval_cmd->parsed())
      return cmd_evaluate(model_file, test_file, out_csv, out_json);
    if (stream_cmd->parsed()) return cmd_stream(stream_model, stream_input);
    if (synth_cmd->parsed()) {
      if (fixed_length > 0) {
        spec.len_min = fixed_length;
        spec.len_max = fixed_length;
      }
      return cmd_synth(spec, synth_seed, out_dir);
    }
    if (sweep_cmd->parsed())
      return cmd_sweep(sweep_train, sweep_test, sweep_w_list, sweep_csv, opts);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const teaser::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const teaser::DatasetError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitTraining;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitTraining;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}
