#pragma once

#include <string>

#include "teaser/pipeline.hpp"

namespace teaser {

// Versioned single-file JSON model format. Doubles round-trip exactly, so a
// reloaded model reproduces the original's decisions bit for bit.
void save_model(const TeaserModel& model, const std::string& path);
TeaserModel load_model(const std::string& path);

std::string model_to_json(const TeaserModel& model);
TeaserModel model_from_json(const std::string& text);

}  // namespace teaser
