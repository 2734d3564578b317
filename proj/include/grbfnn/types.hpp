#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace grbfnn {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

template <typename T>
using Ref = Eigen::Ref<const T>;

enum class TaskKind { regression, binary, multiclass };

inline const char* to_string(TaskKind t) {
  switch (t) {
    case TaskKind::regression: return "regression";
    case TaskKind::binary: return "binary";
    case TaskKind::multiclass: return "multiclass";
  }
  return "?";
}

inline TaskKind task_from_string(const std::string& s) {
  if (s == "regression") return TaskKind::regression;
  if (s == "binary") return TaskKind::binary;
  if (s == "multiclass") return TaskKind::multiclass;
  throw std::invalid_argument("unknown task kind: " + s);
}

inline bool is_classification(TaskKind t) { return t != TaskKind::regression; }

// Centers either fixed by k-means clustering or trained with the rest of
// the parameters.
enum class CenterMode { kmeans, learn };

inline const char* to_string(CenterMode m) {
  return m == CenterMode::kmeans ? "kmeans" : "learn";
}

inline CenterMode center_mode_from_string(const std::string& s) {
  if (s == "kmeans") return CenterMode::kmeans;
  if (s == "learn") return CenterMode::learn;
  throw std::invalid_argument("unknown center mode: " + s);
}

}  // namespace grbfnn
