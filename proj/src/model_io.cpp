#include "teaser/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace teaser {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json dtw_to_json(const DtwSlaveModel& m) {
  json j;
  j["band"] = m.band;
  j["softness"] = m.softness;
  j["cv_accuracy"] = m.cv_accuracy;
  j["labels"] = m.labels;
  j["exemplars"] = m.exemplars;
  return j;
}

DtwSlaveModel dtw_from_json(const json& j, std::size_t num_classes) {
  DtwSlaveModel m;
  m.band = j.at("band").get<double>();
  m.softness = j.at("softness").get<double>();
  m.cv_accuracy = j.at("cv_accuracy").get<double>();
  m.labels = j.at("labels").get<std::vector<std::size_t>>();
  m.exemplars = j.at("exemplars").get<std::vector<std::vector<double>>>();
  m.num_classes = num_classes;
  return m;
}

json bop_to_json(const BopSlaveModel& m) {
  json j;
  j["window_length"] = m.window_length;
  j["word_length"] = m.word_length;
  j["cv_accuracy"] = m.cv_accuracy;
  j["labels"] = m.labels;
  json edges = json::array();
  for (const auto& e : m.bin_edges) edges.push_back({e[0], e[1], e[2]});
  j["bin_edges"] = std::move(edges);
  json hists = json::array();
  for (const auto& h : m.histograms) {
    json hist = json::array();
    for (const auto& [word, count] : h) hist.push_back({word, count});
    hists.push_back(std::move(hist));
  }
  j["histograms"] = std::move(hists);
  return j;
}

BopSlaveModel bop_from_json(const json& j, std::size_t num_classes) {
  BopSlaveModel m;
  m.window_length = j.at("window_length").get<std::size_t>();
  m.word_length = j.at("word_length").get<std::size_t>();
  m.cv_accuracy = j.at("cv_accuracy").get<double>();
  m.labels = j.at("labels").get<std::vector<std::size_t>>();
  for (const auto& e : j.at("bin_edges")) {
    m.bin_edges.push_back({e.at(0).get<double>(), e.at(1).get<double>(),
                           e.at(2).get<double>()});
  }
  for (const auto& hist : j.at("histograms")) {
    WordHistogram h;
    for (const auto& entry : hist) {
      h.emplace_back(entry.at(0).get<std::uint32_t>(), entry.at(1).get<double>());
    }
    m.histograms.push_back(std::move(h));
  }
  m.num_classes = num_classes;
  return m;
}

json master_to_json(const MasterModel& m) {
  json j;
  j["accept_all"] = m.accept_all;
  j["converged"] = m.converged;
  j["gamma"] = m.gamma;
  j["nu"] = m.nu;
  j["rho"] = m.rho;
  j["objective"] = m.objective;
  j["alphas"] = m.alphas;
  j["support_features"] = m.support_features;
  return j;
}

MasterModel master_from_json(const json& j) {
  MasterModel m;
  m.accept_all = j.at("accept_all").get<bool>();
  m.converged = j.at("converged").get<bool>();
  m.gamma = j.at("gamma").get<double>();
  m.nu = j.at("nu").get<double>();
  m.rho = j.at("rho").get<double>();
  m.objective = j.at("objective").get<double>();
  m.alphas = j.at("alphas").get<std::vector<double>>();
  m.support_features =
      j.at("support_features").get<std::vector<std::vector<double>>>();
  return m;
}

}  // namespace

std::string model_to_json(const TeaserModel& model) {
  json j;
  j["format"] = "teaser-model";
  j["version"] = kFormatVersion;
  j["classes"] = model.class_labels;
  j["slave_kind"] = to_string(model.slave_kind);
  j["nu"] = model.nu;
  j["v"] = model.v;
  j["w"] = model.schedule.w;
  j["lengths"] = model.schedule.lengths;
  json levels = json::array();
  for (std::size_t i = 0; i < model.levels.size(); ++i) {
    const TeaserLevel& level = model.levels[i];
    json lj;
    if (level.owner == kNoIndex) {
      lj["owner"] = nullptr;
    } else {
      lj["owner"] = level.owner;
    }
    if (level.owner == i) {
      lj["snapshot_length"] = level.snapshot_length;
      lj["gamma"] = level.gamma;
      if (level.dtw.has_value()) lj["dtw"] = dtw_to_json(*level.dtw);
      if (level.bop.has_value()) lj["bop"] = bop_to_json(*level.bop);
      lj["master"] = master_to_json(level.master);
    }
    levels.push_back(std::move(lj));
  }
  j["levels"] = std::move(levels);
  return j.dump(2);
}

TeaserModel model_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("format").get<std::string>() != "teaser-model")
    throw std::runtime_error("not a teaser model file");
  if (j.at("version").get<int>() != kFormatVersion)
    throw std::runtime_error("unsupported model format version");

  TeaserModel model;
  model.class_labels = j.at("classes").get<std::vector<std::string>>();
  model.slave_kind = slave_kind_from_string(j.at("slave_kind").get<std::string>());
  model.nu = j.at("nu").get<double>();
  model.v = j.at("v").get<std::size_t>();
  model.schedule.w = j.at("w").get<std::size_t>();
  model.schedule.lengths = j.at("lengths").get<std::vector<std::size_t>>();

  const std::size_t k = model.class_labels.size();
  for (const auto& lj : j.at("levels")) {
    TeaserLevel level;
    if (lj.at("owner").is_null()) {
      level.owner = kNoIndex;
    } else {
      level.owner = lj.at("owner").get<std::size_t>();
    }
    if (level.owner == model.levels.size()) {
      level.snapshot_length = lj.at("snapshot_length").get<std::size_t>();
      level.gamma = lj.at("gamma").get<double>();
      if (lj.contains("dtw")) level.dtw = dtw_from_json(lj.at("dtw"), k);
      if (lj.contains("bop")) level.bop = bop_from_json(lj.at("bop"), k);
      level.master = master_from_json(lj.at("master"));
    }
    model.levels.push_back(std::move(level));
  }
  return model;
}

void save_model(const TeaserModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << model_to_json(model) << '\n';
}

TeaserModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace teaser
