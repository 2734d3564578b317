#pragma once

#include <string>

#include "grbfnn/training.hpp"

namespace grbfnn {

// Self-describing JSON model document: dimensions, center mode, task,
// parameters (row-major), standardization statistics, target transform,
// and the training configuration used. Doubles round-trip losslessly.
struct StoredModel {
  GrbfnnModel model;
  TrainConfig config;
  double train_metric = 0.0;
};

void save_model(const std::string& path, const GrbfnnModel& model,
                const TrainConfig& config, double train_metric);

StoredModel load_model(const std::string& path);

std::string model_to_json_string(const GrbfnnModel& model,
                                 const TrainConfig& config, double train_metric);
StoredModel model_from_json_string(const std::string& text);

}  // namespace grbfnn
