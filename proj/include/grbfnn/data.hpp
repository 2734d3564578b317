#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grbfnn/dataset.hpp"
#include "grbfnn/training.hpp"

namespace grbfnn {

// Rectangular numeric CSV with a header row; the named column becomes the
// target, every other column a feature. Non-numeric or non-finite cells
// are rejected with row/column diagnostics.
Dataset load_csv(const std::string& path, const std::string& target_column,
                 TaskKind task);
void save_csv(const Dataset& ds, const std::string& path,
              const std::string& target_column = "y");

// Synthetic benchmark problems, D = 10 each.
//
// p1: binary; positive class has features 1-4 standard normal conditioned
//     on the shell 9 <= sum x_j^2 <= 16, negative class fully standard
//     normal. Features 1-4 relevant.
Dataset gen_p1(Index n, std::uint64_t seed);
// p2: 4-way classification from the corners of {-1,1}^3 grouped by
//     (v1*v3, v2*v3), each class an antipodal Gaussian mixture with
//     covariance 0.5*I; 7 standard normal noise features. Features 1-3
//     relevant.
Dataset gen_p2(Index n, std::uint64_t seed);
// p3: regression, features uniform on [0,1],
//     y = 10 sin(pi x1 x2) + 20 (x3 - 0.5)^2 + 10 x4 + 5 x5 + eps.
//     Features 1-5 relevant.
Dataset gen_p3(Index n, std::uint64_t seed, double noise = 1.0);

enum class ToyKind { two_gaussians, moons, sine_ridge };

ToyKind toy_from_string(const std::string& s);

struct ToyParams {
  double a = 0.5;      // sine_ridge: y = sin(a x1 + b x2)
  double b = 0.5;
  double noise = 0.1;  // moons jitter
};

Dataset gen_toys(ToyKind kind, Index n, const ToyParams& params,
                 std::uint64_t seed);

struct CvPlan {
  int n_folds = 5;
  std::vector<std::uint64_t> seeds = {0};
  bool stratify = true;  // applied to classification tasks only
};

struct FoldSplit {
  std::vector<Index> train;
  std::vector<Index> test;
};

// Exact partition of 0..n-1 into folds; stratified when labels are given
// (per-class counts per fold within +-1). Deterministic per seed.
std::vector<FoldSplit> kfold_split(Index n, int n_folds, std::uint64_t seed,
                                   const Vector* stratify_labels = nullptr);

double metric_rmse(const Ref<Vector>& y_true, const Ref<Vector>& y_pred);
double metric_accuracy(const Ref<Vector>& y_true, const Ref<Vector>& y_pred);
// Task dispatch: RMSE for regression, accuracy otherwise.
double metrics(TaskKind task, const Ref<Vector>& y_true,
               const Ref<Vector>& y_pred);
inline bool higher_is_better(TaskKind task) { return is_classification(task); }

struct SearchGrid {
  std::vector<double> lambda_w = {0.0};
  std::vector<double> lambda_u = {0.0};
  std::vector<double> lambda_c = {0.0};
  std::vector<Index> n_centers = {32};
  std::vector<double> learning_rate = {1e-3};
  std::vector<CenterMode> modes = {CenterMode::kmeans};
  TrainConfig base;  // epochs, tolerance, betas

  std::size_t size() const;
};

struct GridConfig {
  double lambda_w = 0.0, lambda_u = 0.0, lambda_c = 0.0;
  Index n_centers = 0;
  double learning_rate = 0.0;
  CenterMode mode = CenterMode::kmeans;
  // positions in the originating grid, for the regularizer table
  Index iw = 0, iu = 0;

  TrainConfig to_train_config(const TrainConfig& base, std::uint64_t seed) const;
};

struct CvRecord {
  Index config = 0;
  std::uint64_t seed = 0;
  int fold = 0;
  double train_metric = 0.0;
  double test_metric = 0.0;
};

struct ConfigSummary {
  GridConfig config;
  double mean_train = 0.0, std_train = 0.0;
  double mean_test = 0.0, std_test = 0.0;
  int n_runs = 0;
};

struct GridSearchResult {
  std::vector<GridConfig> configs;
  std::vector<CvRecord> records;     // one per (config, seed, fold)
  std::vector<ConfigSummary> summaries;
  Index best = 0;                    // index into configs/summaries
  TaskKind task = TaskKind::regression;

  // |lambda_w| x |lambda_u| table of the best mean test metric over the
  // remaining grid dimensions.
  Matrix heatmap(const SearchGrid& grid) const;

  std::string records_csv() const;
};

// Runs the CV plan for every grid configuration. Tasks (config, seed,
// fold) may run on up to n_threads workers (0 = GRBFNN_THREADS env var or
// hardware concurrency); results are ordered deterministically regardless.
GridSearchResult grid_search(const Dataset& ds, const SearchGrid& grid,
                             const CvPlan& plan, int n_threads = 0);

}  // namespace grbfnn
