#pragma once

#include <string>
#include <vector>

#include "grbfnn/types.hpp"

namespace grbfnn {

struct Dataset {
  Matrix X;
  Vector y;  // real targets, or class labels 0..C-1 stored as doubles
  TaskKind task = TaskKind::regression;
  std::vector<std::string> feature_names;
  // Ground-truth relevance for synthetic problems; empty when unknown.
  std::vector<bool> relevant_mask;
  Index n_classes = 0;

  Index n() const { return X.rows(); }
  Index dim() const { return X.cols(); }

  Dataset subset(const std::vector<Index>& rows) const;
  void validate() const;
};

}  // namespace grbfnn
