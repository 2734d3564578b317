#include "grbfnn/serialize.hpp"

#include <json.hpp>
#include <stdexcept>

#include "grbfnn/io.hpp"

namespace grbfnn {

namespace {

using nlohmann::json;

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json matrix_to_json_rowmajor(const Matrix& m) {
  json arr = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
  return arr;
}

Vector vector_from_json(const json& arr, Index expected, const char* what) {
  if (!arr.is_array() || static_cast<Index>(arr.size()) != expected)
    throw std::runtime_error(std::string("model file: bad length for ") + what);
  Vector v(expected);
  for (Index i = 0; i < expected; ++i) v(i) = arr[i].get<double>();
  return v;
}

Matrix matrix_from_json_rowmajor(const json& arr, Index rows, Index cols,
                                 const char* what) {
  if (!arr.is_array() || static_cast<Index>(arr.size()) != rows * cols)
    throw std::runtime_error(std::string("model file: bad length for ") + what);
  Matrix m(rows, cols);
  Index k = 0;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = arr[k++].get<double>();
  return m;
}

}  // namespace

std::string model_to_json_string(const GrbfnnModel& model,
                                 const TrainConfig& config,
                                 double train_metric) {
  json doc;
  doc["format"] = "grbfnn-model";
  doc["format_version"] = 1;
  doc["dim"] = model.dim();
  doc["n_centers"] = model.n_centers();
  doc["n_outputs"] = model.n_outputs();
  doc["center_mode"] = to_string(model.center_mode);
  doc["task"] = to_string(model.task);
  doc["u"] = vector_to_json(model.factor.u);
  doc["weights"] = matrix_to_json_rowmajor(model.weights);
  doc["centers"] = matrix_to_json_rowmajor(model.centers);
  doc["x_mean"] = vector_to_json(model.input_stats.mean);
  doc["x_scale"] = vector_to_json(model.input_stats.scale);
  doc["target_transform"] = {{"active", model.target_scale.active},
                             {"y_min", model.target_scale.y_min},
                             {"y_max", model.target_scale.y_max}};
  doc["feature_names"] = model.feature_names;
  doc["train_config"] = {{"n_centers", config.n_centers},
                         {"center_mode", to_string(config.center_mode)},
                         {"lambda_w", config.reg.lambda_w},
                         {"lambda_u", config.reg.lambda_u},
                         {"lambda_c", config.reg.lambda_c},
                         {"learning_rate", config.learning_rate},
                         {"max_epochs", config.max_epochs},
                         {"tolerance", config.tolerance},
                         {"seed", config.seed},
                         {"adam_beta1", config.adam_beta1},
                         {"adam_beta2", config.adam_beta2},
                         {"adam_eps", config.adam_eps}};
  doc["train_metric"] = train_metric;
  return doc.dump(2) + "\n";
}

StoredModel model_from_json_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("model file: invalid JSON: ") + e.what());
  }
  if (doc.value("format", "") != std::string("grbfnn-model"))
    throw std::runtime_error("model file: missing grbfnn-model format tag");

  StoredModel out;
  const Index d = doc.at("dim").get<Index>();
  const Index m = doc.at("n_centers").get<Index>();
  const Index o = doc.at("n_outputs").get<Index>();
  GrbfnnModel& model = out.model;
  model.center_mode = center_mode_from_string(doc.at("center_mode").get<std::string>());
  model.task = task_from_string(doc.at("task").get<std::string>());
  model.factor = PrecisionFactor(d, vector_from_json(doc.at("u"), vech_size(d), "u"));
  model.weights = matrix_from_json_rowmajor(doc.at("weights"), m, o, "weights");
  model.centers = matrix_from_json_rowmajor(doc.at("centers"), m, d, "centers");
  model.input_stats.mean = vector_from_json(doc.at("x_mean"), d, "x_mean");
  model.input_stats.scale = vector_from_json(doc.at("x_scale"), d, "x_scale");
  const auto& tt = doc.at("target_transform");
  model.target_scale.active = tt.at("active").get<bool>();
  model.target_scale.y_min = tt.at("y_min").get<double>();
  model.target_scale.y_max = tt.at("y_max").get<double>();
  model.feature_names = doc.value("feature_names", std::vector<std::string>{});

  const auto& tc = doc.at("train_config");
  out.config.n_centers = tc.at("n_centers").get<Index>();
  out.config.center_mode =
      center_mode_from_string(tc.at("center_mode").get<std::string>());
  out.config.reg.lambda_w = tc.at("lambda_w").get<double>();
  out.config.reg.lambda_u = tc.at("lambda_u").get<double>();
  out.config.reg.lambda_c = tc.at("lambda_c").get<double>();
  out.config.learning_rate = tc.at("learning_rate").get<double>();
  out.config.max_epochs = tc.at("max_epochs").get<int>();
  out.config.tolerance = tc.at("tolerance").get<double>();
  out.config.seed = tc.at("seed").get<std::uint64_t>();
  out.config.adam_beta1 = tc.at("adam_beta1").get<double>();
  out.config.adam_beta2 = tc.at("adam_beta2").get<double>();
  out.config.adam_eps = tc.at("adam_eps").get<double>();
  out.train_metric = doc.value("train_metric", 0.0);
  return out;
}

void save_model(const std::string& path, const GrbfnnModel& model,
                const TrainConfig& config, double train_metric) {
  write_file_atomic(path, model_to_json_string(model, config, train_metric));
}

StoredModel load_model(const std::string& path) {
  return model_from_json_string(read_file(path));
}

}  // namespace grbfnn
