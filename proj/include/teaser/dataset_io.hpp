#pragma once

#include <stdexcept>
#include <string>

#include "teaser/core.hpp"

namespace teaser {

// File-level failure with the offending line number in the message.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// UCR-style delimited text: one series per line, label first, then the
// values. Comma, tab and plain whitespace delimiters are all accepted, rows
// may have different lengths. Blank lines are skipped.
LabeledDataset load_ucr(const std::string& path);

// Comma-separated writer for the same layout.
void save_ucr(const LabeledDataset& data, const std::string& path);

}  // namespace teaser
