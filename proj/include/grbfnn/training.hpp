#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "grbfnn/dataset.hpp"
#include "grbfnn/model.hpp"

namespace grbfnn {

struct TrainConfig {
  Index n_centers = 32;
  CenterMode center_mode = CenterMode::kmeans;
  Regularizers reg;
  double learning_rate = 1e-3;
  int max_epochs = 10000;
  // Early stop when |R_t - R_{t-1}| <= tolerance * max(1, R_{t-1}).
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  void validate() const;
};

struct TrainTrace {
  std::vector<double> loss_R;
  std::vector<double> loss_E;
  std::vector<double> grad_norm_w;
  std::vector<double> grad_norm_u;
  std::vector<double> grad_norm_c;  // zero in kmeans mode
  int epochs = 0;
  double wall_seconds = 0.0;

  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
};

struct KmeansResult {
  Matrix centers;
  std::vector<Index> assignment;
  std::vector<double> wcss;  // within-cluster sum of squares per Lloyd pass
};

// Lloyd's algorithm with k-means++ seeding; empty clusters are re-seeded
// to the point farthest from its assigned center. Deterministic per seed.
KmeansResult kmeans_detailed(const Ref<Matrix>& X, Index k, std::uint64_t seed,
                             int max_iter = 100);
Matrix kmeans(const Ref<Matrix>& X, Index k, std::uint64_t seed);

struct AdamState {
  Vector m;
  Vector v;
  static AdamState zeros(Index n);
};

// One Adam update with bias correction; t is the 1-based step index.
void adam_step(Vector& params, const Ref<Vector>& grads, AdamState& state,
               int t, const TrainConfig& cfg);

// Starting point: k-means centers (both modes), U = s*I with s the inverse
// median pairwise distance of a subsample, weights zero.
GrbfnnModel init_model(const Ref<Matrix>& X, const Ref<Matrix>& Y,
                       const TrainConfig& cfg);

// Full-batch Adam on (w, u) or (w, u, c); returns the parameters of the
// lowest-R epoch. X and Y are taken as-is (see fit() for the dataset-level
// entry point that standardizes inputs and encodes targets).
std::pair<GrbfnnModel, TrainTrace> train(const Ref<Matrix>& X,
                                         const Ref<Matrix>& Y,
                                         const TrainConfig& cfg);

// Exact interpolation weights with centers at the data points and a fixed
// isotropic factor (scale <= 0 selects the median-distance heuristic).
// Throws when the kernel system is singular or ill-conditioned.
Matrix fit_interpolation(const Ref<Matrix>& X, const Ref<Matrix>& Y,
                         double scale = 0.0);

// Dataset-level pipeline: standardizes inputs on the given data, min-max
// normalizes regression targets / one-hot encodes classes, trains, and
// stores the transforms on the returned model.
struct FitResult {
  GrbfnnModel model;
  TrainTrace trace;
};

FitResult fit(const Dataset& ds, const TrainConfig& cfg);

// Targets in training encoding: normalized column for regression, {0,1}
// column for binary, one-hot for multiclass.
Matrix encode_targets(const Dataset& ds, const TargetScaler& scaler);

// Task metric of the model on a dataset: RMSE on the normalized target
// scale for regression, accuracy for classification.
double evaluate(const GrbfnnModel& m, const Dataset& ds);

}  // namespace grbfnn
