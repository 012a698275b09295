#include "teaser/dataset_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace teaser {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  // Commas and tabs become spaces, then split on runs of whitespace; this
  // covers all three delimiter conventions and mixed files.
  std::string cleaned = line;
  for (char& ch : cleaned) {
    if (ch == ',' || ch == '\t' || ch == '\r') ch = ' ';
  }
  std::vector<std::string> tokens;
  std::istringstream in(cleaned);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

double parse_value(const std::string& token, std::size_t line_no) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &consumed);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": non-numeric value '" + token + "'");
  }
  if (consumed != token.size() || !std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": non-numeric value '" + token + "'");
  }
  return value;
}

}  // namespace

LabeledDataset load_ucr(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file: " + path);

  std::vector<TimeSeries> series;
  std::vector<std::string> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 2) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected a label and at least one value");
    }
    TimeSeries t;
    t.values.reserve(tokens.size() - 1);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      t.values.push_back(parse_value(tokens[i], line_no));
    }
    labels.push_back(tokens[0]);
    series.push_back(std::move(t));
  }
  if (series.empty()) throw ParseError("dataset file has no series: " + path);
  return LabeledDataset::make(std::move(series), std::move(labels));
}

void save_ucr(const LabeledDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  char buf[64];
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << data.labels[i];
    for (double v : data.series[i].values) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace teaser
