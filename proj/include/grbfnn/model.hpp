#pragma once

#include <string>
#include <vector>

#include "grbfnn/kernel.hpp"

namespace grbfnn {

struct Regularizers {
  double lambda_w = 0.0;
  double lambda_u = 0.0;
  double lambda_c = 0.0;  // only enters in CenterMode::learn
};

// Per-feature affine transform (zero mean, unit variance) fitted on
// training data and reapplied at prediction time.
struct Standardizer {
  Vector mean;
  Vector scale;

  static Standardizer fit(const Ref<Matrix>& X);
  static Standardizer identity(Index d);
  Matrix apply(const Ref<Matrix>& X) const;
  Index dim() const { return mean.size(); }
};

// Min-max transform of regression targets onto [0, 1]; inactive for
// classification tasks.
struct TargetScaler {
  bool active = false;
  double y_min = 0.0;
  double y_max = 1.0;

  static TargetScaler fit(const Ref<Vector>& y);
  double span() const;
  Vector normalize(const Ref<Vector>& y) const;
  Vector denormalize(const Ref<Vector>& y) const;
};

struct GrbfnnModel {
  Matrix weights;           // M x O
  PrecisionFactor factor;   // defines P = U^T U
  Matrix centers;           // M x D, in standardized input coordinates
  CenterMode center_mode = CenterMode::kmeans;
  TaskKind task = TaskKind::regression;
  Standardizer input_stats;
  TargetScaler target_scale;
  std::vector<std::string> feature_names;

  Index dim() const { return factor.dim; }
  Index n_centers() const { return centers.rows(); }
  Index n_outputs() const { return weights.cols(); }
  bool is_trained() const { return weights.size() > 0; }

  // Free parameters of the optimization problem: M*O weights plus the
  // D(D+1)/2 factor entries, plus M*D center coordinates in learn mode.
  Index n_free_parameters() const;
};

// Model response Phi(X, C) * w. Standardizes X with the stored statistics.
Matrix forward(const GrbfnnModel& m, const Ref<Matrix>& X);

// Same, for inputs already living in the standardized coordinates.
Matrix forward_standardized(const GrbfnnModel& m, const Ref<Matrix>& Xs);

// 1/2 sum_n ||y_n - f(x_n)||^2.
double loss_E(const GrbfnnModel& m, const Ref<Matrix>& X, const Ref<Matrix>& Y);

// 1/2 lambda_u ||u||^2 + 1/2 lambda_w ||w||^2 (+ 1/2 lambda_c ||c||^2).
double penalty_G(const GrbfnnModel& m, const Regularizers& reg);

double loss_R(const GrbfnnModel& m, const Ref<Matrix>& X, const Ref<Matrix>& Y,
              const Regularizers& reg);

// Analytic gradients of loss_R. Signs follow the true descent gradient,
// verified against central finite differences.
Matrix grad_w(const GrbfnnModel& m, const Ref<Matrix>& X, const Ref<Matrix>& Y,
              const Regularizers& reg);
Vector grad_u(const GrbfnnModel& m, const Ref<Matrix>& X, const Ref<Matrix>& Y,
              const Regularizers& reg);
// Throws std::logic_error unless center_mode == learn.
Matrix grad_c(const GrbfnnModel& m, const Ref<Matrix>& X, const Ref<Matrix>& Y,
              const Regularizers& reg);

// Blockwise discrepancy measure used by gradient_check:
// ||a - b||_inf / max(||b||_inf, floor).
double relative_block_error(const Ref<Vector>& a, const Ref<Vector>& b);

struct GradientReport {
  double err_w = 0.0;
  double err_u = 0.0;
  double err_c = 0.0;
  bool has_centers = false;
  double max_error() const;
};

// Central finite differences of loss_R against the analytic gradients,
// one relative error per parameter block.
GradientReport gradient_check(const GrbfnnModel& m, const Ref<Matrix>& X,
                              const Ref<Matrix>& Y, const Regularizers& reg,
                              double step);

// Flat parameter layout [w; u; c?] shared by the optimizer and the
// finite-difference probes.
Vector pack_parameters(const GrbfnnModel& m);
void unpack_parameters(const Ref<Vector>& p, GrbfnnModel& m);

// Task-aware predictions: class labels for classification, targets in
// original units for regression.
Vector predict_labels(const GrbfnnModel& m, const Ref<Matrix>& X);
Vector predict_values(const GrbfnnModel& m, const Ref<Matrix>& X);

namespace detail {

// One-pass evaluation of the objective and (optionally) all gradient
// blocks on standardized data; the kernel matrix is shared across blocks.
struct Objective {
  double loss_E = 0.0;
  double penalty = 0.0;
  double loss_R = 0.0;
  Matrix grad_w;
  Vector grad_u;
  Matrix grad_c;  // empty unless centers are learned
};

Objective evaluate_objective(const Ref<Matrix>& Xs, const Ref<Matrix>& Y,
                             const Matrix& W, const PrecisionFactor& f,
                             const Matrix& C, bool learn_centers,
                             const Regularizers& reg, bool want_grads);

}  // namespace detail

}  // namespace grbfnn
