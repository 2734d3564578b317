#include "grbfnn/data.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "grbfnn/io.hpp"

namespace grbfnn {

Dataset Dataset::subset(const std::vector<Index>& rows) const {
  Dataset out;
  out.X.resize(rows.size(), X.cols());
  out.y.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(i) = X.row(rows[i]);
    out.y(i) = y(rows[i]);
  }
  out.task = task;
  out.feature_names = feature_names;
  out.relevant_mask = relevant_mask;
  out.n_classes = n_classes;
  return out;
}

void Dataset::validate() const {
  if (X.rows() != y.size())
    throw std::invalid_argument("Dataset: X rows and target length differ");
  if (X.rows() < 1) throw std::invalid_argument("Dataset: empty");
  if (!feature_names.empty() &&
      static_cast<Index>(feature_names.size()) != X.cols())
    throw std::invalid_argument("Dataset: feature name count mismatch");
  if (!relevant_mask.empty() &&
      static_cast<Index>(relevant_mask.size()) != X.cols())
    throw std::invalid_argument("Dataset: relevant mask length mismatch");
  if (is_classification(task)) {
    if (n_classes < 2) throw std::invalid_argument("Dataset: n_classes < 2");
    for (Index i = 0; i < y.size(); ++i) {
      const double v = y(i);
      if (v != std::floor(v) || v < 0.0 || v >= double(n_classes))
        throw std::invalid_argument("Dataset: class label out of range at row " +
                                    std::to_string(i));
    }
  }
}

namespace {

std::vector<std::string> default_names(Index d) {
  std::vector<std::string> names(d);
  for (Index j = 0; j < d; ++j) names[j] = "x" + std::to_string(j + 1);
  return names;
}

}  // namespace

Dataset gen_p1(Index n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_p1: n must be >= 2");
  const Index d = 10;
  const Index n_pos = n / 2;
  const Index n_neg = n - n_pos;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Dataset ds;
  ds.X.resize(n, d);
  ds.y.resize(n);
  for (Index i = 0; i < n_neg; ++i) {
    for (Index j = 0; j < d; ++j) ds.X(i, j) = normal(rng);
    ds.y(i) = 0.0;
  }
  for (Index i = n_neg; i < n; ++i) {
    // features 1-4 standard normal conditioned on the shell 9 <= r^2 <= 16
    double r2;
    double v[4];
    do {
      r2 = 0.0;
      for (int j = 0; j < 4; ++j) {
        v[j] = normal(rng);
        r2 += v[j] * v[j];
      }
    } while (r2 < 9.0 || r2 > 16.0);
    for (int j = 0; j < 4; ++j) ds.X(i, j) = v[j];
    for (Index j = 4; j < d; ++j) ds.X(i, j) = normal(rng);
    ds.y(i) = 1.0;
  }
  ds.task = TaskKind::binary;
  ds.n_classes = 2;
  ds.feature_names = default_names(d);
  ds.relevant_mask.assign(d, false);
  for (int j = 0; j < 4; ++j) ds.relevant_mask[j] = true;
  return ds;
}

Dataset gen_p2(Index n, std::uint64_t seed) {
  if (n < 4) throw std::invalid_argument("gen_p2: n must be >= 4");
  const Index d = 10;
  // class representatives; the corners (v1,v2,v3) of {-1,1}^3 grouped by
  // (v1*v3, v2*v3) pair each representative with its negation
  const double reps[4][3] = {
      {1, 1, 1},    // key (+1, +1)
      {1, -1, 1},   // key (+1, -1)
      {-1, 1, 1},   // key (-1, +1)
      {-1, -1, 1},  // key (-1, -1)
  };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  const double sigma = std::sqrt(0.5);

  std::array<Index, 4> counts;
  counts.fill(n / 4);
  for (Index r = 0; r < n % 4; ++r) counts[r]++;

  Dataset ds;
  ds.X.resize(n, d);
  ds.y.resize(n);
  Index row = 0;
  for (int cls = 0; cls < 4; ++cls) {
    for (Index i = 0; i < counts[cls]; ++i, ++row) {
      const double sign = coin(rng) ? 1.0 : -1.0;
      for (int j = 0; j < 3; ++j)
        ds.X(row, j) = sign * reps[cls][j] + sigma * normal(rng);
      for (Index j = 3; j < d; ++j) ds.X(row, j) = normal(rng);
      ds.y(row) = cls;
    }
  }
  ds.task = TaskKind::multiclass;
  ds.n_classes = 4;
  ds.feature_names = default_names(d);
  ds.relevant_mask.assign(d, false);
  for (int j = 0; j < 3; ++j) ds.relevant_mask[j] = true;
  return ds;
}

Dataset gen_p3(Index n, std::uint64_t seed, double noise) {
  if (n < 2) throw std::invalid_argument("gen_p3: n must be >= 2");
  const Index d = 10;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  Dataset ds;
  ds.X.resize(n, d);
  ds.y.resize(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) ds.X(i, j) = uniform(rng);
    const double x1 = ds.X(i, 0), x2 = ds.X(i, 1), x3 = ds.X(i, 2);
    const double x4 = ds.X(i, 3), x5 = ds.X(i, 4);
    double y = 10.0 * std::sin(M_PI * x1 * x2) + 20.0 * (x3 - 0.5) * (x3 - 0.5) +
               10.0 * x4 + 5.0 * x5;
    if (noise > 0.0) y += noise * normal(rng);
    ds.y(i) = y;
  }
  ds.task = TaskKind::regression;
  ds.feature_names = default_names(d);
  ds.relevant_mask.assign(d, false);
  for (int j = 0; j < 5; ++j) ds.relevant_mask[j] = true;
  return ds;
}

ToyKind toy_from_string(const std::string& s) {
  if (s == "two_gaussians") return ToyKind::two_gaussians;
  if (s == "moons") return ToyKind::moons;
  if (s == "sine_ridge") return ToyKind::sine_ridge;
  throw std::invalid_argument("unknown toy problem: " + s);
}

Dataset gen_toys(ToyKind kind, Index n, const ToyParams& params,
                 std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_toys: n must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset ds;

  switch (kind) {
    case ToyKind::two_gaussians: {
      // class means (1,1) and (2.8,2.8), shared covariance
      // [[0.81, 0.72], [0.72, 0.66]] sampled through its Cholesky factor
      const double l11 = 0.9, l21 = 0.8, l22 = std::sqrt(0.02);
      const Index n1 = n / 2;
      const Index n0 = n - n1;
      ds.X.resize(n, 2);
      ds.y.resize(n);
      for (Index i = 0; i < n; ++i) {
        const bool second = i >= n0;
        const double mu = second ? 2.8 : 1.0;
        const double g1 = normal(rng), g2 = normal(rng);
        ds.X(i, 0) = mu + l11 * g1;
        ds.X(i, 1) = mu + l21 * g1 + l22 * g2;
        ds.y(i) = second ? 1.0 : 0.0;
      }
      ds.task = TaskKind::binary;
      ds.n_classes = 2;
      break;
    }
    case ToyKind::moons: {
      const Index n1 = n / 2;
      const Index n0 = n - n1;
      ds.X.resize(n, 2);
      ds.y.resize(n);
      for (Index i = 0; i < n0; ++i) {
        const double t = n0 > 1 ? M_PI * double(i) / double(n0 - 1) : 0.0;
        ds.X(i, 0) = std::cos(t) + params.noise * normal(rng);
        ds.X(i, 1) = std::sin(t) + params.noise * normal(rng);
        ds.y(i) = 0.0;
      }
      for (Index i = 0; i < n1; ++i) {
        const double t = n1 > 1 ? M_PI * double(i) / double(n1 - 1) : 0.0;
        ds.X(n0 + i, 0) = 1.0 - std::cos(t) + params.noise * normal(rng);
        ds.X(n0 + i, 1) = 0.5 - std::sin(t) + params.noise * normal(rng);
        ds.y(n0 + i) = 1.0;
      }
      ds.task = TaskKind::binary;
      ds.n_classes = 2;
      break;
    }
    case ToyKind::sine_ridge: {
      std::uniform_real_distribution<double> uniform(-5.0, 5.0);
      ds.X.resize(n, 2);
      ds.y.resize(n);
      for (Index i = 0; i < n; ++i) {
        ds.X(i, 0) = uniform(rng);
        ds.X(i, 1) = uniform(rng);
        ds.y(i) = std::sin(params.a * ds.X(i, 0) + params.b * ds.X(i, 1));
      }
      ds.task = TaskKind::regression;
      break;
    }
  }
  ds.feature_names = default_names(2);
  return ds;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  for (auto& f : fields) {
    const auto a = f.find_first_not_of(" \t");
    const auto b = f.find_last_not_of(" \t");
    f = a == std::string::npos ? "" : f.substr(a, b - a + 1);
  }
  return fields;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& target_column,
                 TaskKind task) {
  const std::string content = read_file(path);
  if (content.find_first_not_of(" \t\r\n") == std::string::npos)
    throw std::runtime_error(path + ": empty file");

  std::vector<std::string> lines;
  {
    std::istringstream ss(content);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    while (!lines.empty() && split_csv_line(lines.back()).size() == 1 &&
           split_csv_line(lines.back())[0].empty())
      lines.pop_back();
  }

  const auto header = split_csv_line(lines[0]);
  {
    bool all_numeric = true;
    double tmp;
    for (const auto& cell : header)
      if (!parse_double(cell, tmp)) all_numeric = false;
    if (all_numeric)
      throw std::runtime_error(path +
                               ": line 1: expected a header row, found numeric values");
  }
  const Index n_cols = static_cast<Index>(header.size());
  Index target_idx = -1;
  for (Index j = 0; j < n_cols; ++j)
    if (header[j] == target_column) target_idx = j;
  if (target_idx < 0)
    throw std::runtime_error(path + ": line 1: target column '" + target_column +
                             "' not found");
  if (n_cols < 2)
    throw std::runtime_error(path + ": need at least one feature column");
  if (lines.size() < 2) throw std::runtime_error(path + ": no data rows");

  const Index n = static_cast<Index>(lines.size()) - 1;
  Dataset ds;
  ds.task = task;
  ds.X.resize(n, n_cols - 1);
  ds.y.resize(n);
  for (Index j = 0; j < n_cols; ++j)
    if (j != target_idx) ds.feature_names.push_back(header[j]);

  for (Index i = 0; i < n; ++i) {
    const int line_no = static_cast<int>(i) + 2;
    const auto fields = split_csv_line(lines[i + 1]);
    if (static_cast<Index>(fields.size()) != n_cols)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": expected " + std::to_string(n_cols) +
                               " fields, got " + std::to_string(fields.size()));
    Index col = 0;
    for (Index j = 0; j < n_cols; ++j) {
      double v;
      if (!parse_double(fields[j], v))
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ", column '" + header[j] +
                                 "': not numeric: '" + fields[j] + "'");
      if (!std::isfinite(v))
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ", column '" + header[j] +
                                 "': non-finite value '" + fields[j] + "'");
      if (j == target_idx)
        ds.y(i) = v;
      else
        ds.X(i, col++) = v;
    }
  }

  if (is_classification(task)) {
    double max_label = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double v = ds.y(i);
      if (v != std::floor(v) || v < 0.0)
        throw std::runtime_error(path + ": row " + std::to_string(i + 1) +
                                 ": class label must be a nonnegative integer");
      max_label = std::max(max_label, v);
    }
    if (task == TaskKind::binary) {
      if (max_label > 1.0)
        throw std::runtime_error(path + ": binary task requires labels in {0, 1}");
      ds.n_classes = 2;
    } else {
      ds.n_classes = static_cast<Index>(max_label) + 1;
      if (ds.n_classes < 2)
        throw std::runtime_error(path + ": multiclass task needs >= 2 classes");
    }
  }
  ds.validate();
  return ds;
}

void save_csv(const Dataset& ds, const std::string& path,
              const std::string& target_column) {
  std::ostringstream out;
  const auto names = ds.feature_names.empty() ? default_names(ds.dim())
                                              : ds.feature_names;
  for (const auto& name : names) out << name << ',';
  out << target_column << '\n';
  for (Index i = 0; i < ds.n(); ++i) {
    for (Index j = 0; j < ds.dim(); ++j) out << format_double(ds.X(i, j)) << ',';
    out << format_double(ds.y(i)) << '\n';
  }
  write_file_atomic(path, out.str());
}

std::vector<FoldSplit> kfold_split(Index n, int n_folds, std::uint64_t seed,
                                   const Vector* stratify_labels) {
  if (n_folds < 2) throw std::invalid_argument("kfold_split: n_folds must be >= 2");
  if (n < n_folds)
    throw std::invalid_argument("kfold_split: fewer samples than folds");

  std::vector<std::vector<Index>> fold_members(n_folds);
  std::mt19937_64 rng(seed);

  if (stratify_labels == nullptr) {
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Index pos = 0;
    for (int f = 0; f < n_folds; ++f) {
      const Index size = n / n_folds + (f < static_cast<int>(n % n_folds) ? 1 : 0);
      for (Index i = 0; i < size; ++i) fold_members[f].push_back(perm[pos++]);
    }
  } else {
    if (stratify_labels->size() != n)
      throw std::invalid_argument("kfold_split: label length mismatch");
    std::map<long long, std::vector<Index>> groups;
    for (Index i = 0; i < n; ++i)
      groups[std::llround((*stratify_labels)(i))].push_back(i);
    Index assigned = 0;
    for (auto& [label, members] : groups) {
      if (static_cast<int>(members.size()) < n_folds)
        throw std::invalid_argument(
            "kfold_split: class " + std::to_string(label) +
            " has fewer members than folds; cannot stratify");
      std::shuffle(members.begin(), members.end(), rng);
      for (std::size_t i = 0; i < members.size(); ++i)
        fold_members[(assigned + i) % n_folds].push_back(members[i]);
      assigned += static_cast<Index>(members.size());
    }
  }

  std::vector<FoldSplit> splits(n_folds);
  for (int f = 0; f < n_folds; ++f) {
    auto& test = fold_members[f];
    std::sort(test.begin(), test.end());
    std::vector<char> in_test(n, 0);
    for (Index i : test) in_test[i] = 1;
    splits[f].test = test;
    splits[f].train.reserve(n - test.size());
    for (Index i = 0; i < n; ++i)
      if (!in_test[i]) splits[f].train.push_back(i);
  }
  return splits;
}

double metric_rmse(const Ref<Vector>& y_true, const Ref<Vector>& y_pred) {
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("metric_rmse: length mismatch");
  if (y_true.size() == 0) throw std::invalid_argument("metric_rmse: empty input");
  return std::sqrt((y_true - y_pred).squaredNorm() / double(y_true.size()));
}

double metric_accuracy(const Ref<Vector>& y_true, const Ref<Vector>& y_pred) {
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("metric_accuracy: length mismatch");
  if (y_true.size() == 0)
    throw std::invalid_argument("metric_accuracy: empty input");
  double correct = 0.0;
  for (Index i = 0; i < y_true.size(); ++i)
    if (y_true(i) == y_pred(i)) correct += 1.0;
  return correct / double(y_true.size());
}

double metrics(TaskKind task, const Ref<Vector>& y_true,
               const Ref<Vector>& y_pred) {
  return task == TaskKind::regression ? metric_rmse(y_true, y_pred)
                                      : metric_accuracy(y_true, y_pred);
}

std::size_t SearchGrid::size() const {
  return modes.size() * n_centers.size() * learning_rate.size() *
         lambda_w.size() * lambda_u.size() * lambda_c.size();
}

TrainConfig GridConfig::to_train_config(const TrainConfig& base,
                                        std::uint64_t seed) const {
  TrainConfig cfg = base;
  cfg.n_centers = n_centers;
  cfg.center_mode = mode;
  cfg.reg.lambda_w = lambda_w;
  cfg.reg.lambda_u = lambda_u;
  cfg.reg.lambda_c = lambda_c;
  cfg.learning_rate = learning_rate;
  cfg.seed = seed;
  return cfg;
}

Matrix GridSearchResult::heatmap(const SearchGrid& grid) const {
  const bool maximize = higher_is_better(task);
  const double worst = maximize ? -std::numeric_limits<double>::infinity()
                                : std::numeric_limits<double>::infinity();
  Matrix H = Matrix::Constant(grid.lambda_w.size(), grid.lambda_u.size(), worst);
  for (const auto& s : summaries) {
    double& cell = H(s.config.iw, s.config.iu);
    cell = maximize ? std::max(cell, s.mean_test) : std::min(cell, s.mean_test);
  }
  return H;
}

std::string GridSearchResult::records_csv() const {
  std::ostringstream out;
  out << "lambda_w,lambda_u,lambda_c,M,lr,mode,seed,fold,train_metric,test_metric\n";
  for (const auto& r : records) {
    const auto& c = configs[r.config];
    out << format_double(c.lambda_w) << ',' << format_double(c.lambda_u) << ','
        << format_double(c.lambda_c) << ',' << c.n_centers << ','
        << format_double(c.learning_rate) << ',' << to_string(c.mode) << ','
        << r.seed << ',' << r.fold << ',' << format_double(r.train_metric)
        << ',' << format_double(r.test_metric) << '\n';
  }
  return out.str();
}

namespace {

int resolve_thread_count(int requested, std::size_t n_tasks) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("GRBFNN_THREADS")) n = std::atoi(env);
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
  }
  return std::max(1, std::min<int>(n, static_cast<int>(n_tasks)));
}

}  // namespace

GridSearchResult grid_search(const Dataset& ds, const SearchGrid& grid,
                             const CvPlan& plan, int n_threads) {
  ds.validate();
  if (grid.size() == 0) throw std::invalid_argument("grid_search: empty grid");
  if (plan.seeds.empty()) throw std::invalid_argument("grid_search: no seeds");

  GridSearchResult result;
  result.task = ds.task;
  for (std::size_t im = 0; im < grid.modes.size(); ++im)
    for (std::size_t ic = 0; ic < grid.n_centers.size(); ++ic)
      for (std::size_t il = 0; il < grid.learning_rate.size(); ++il)
        for (std::size_t iw = 0; iw < grid.lambda_w.size(); ++iw)
          for (std::size_t iu = 0; iu < grid.lambda_u.size(); ++iu)
            for (std::size_t icc = 0; icc < grid.lambda_c.size(); ++icc) {
              GridConfig c;
              c.mode = grid.modes[im];
              c.n_centers = grid.n_centers[ic];
              c.learning_rate = grid.learning_rate[il];
              c.lambda_w = grid.lambda_w[iw];
              c.lambda_u = grid.lambda_u[iu];
              c.lambda_c = grid.lambda_c[icc];
              c.iw = static_cast<Index>(iw);
              c.iu = static_cast<Index>(iu);
              result.configs.push_back(c);
            }

  // fold splits are shared across configs for a given seed
  const bool stratified = plan.stratify && is_classification(ds.task);
  std::vector<std::vector<FoldSplit>> splits;
  splits.reserve(plan.seeds.size());
  for (auto seed : plan.seeds)
    splits.push_back(kfold_split(ds.n(), plan.n_folds, seed,
                                 stratified ? &ds.y : nullptr));

  struct Task {
    Index config;
    std::size_t seed_idx;
    int fold;
  };
  std::vector<Task> tasks;
  for (Index c = 0; c < static_cast<Index>(result.configs.size()); ++c)
    for (std::size_t s = 0; s < plan.seeds.size(); ++s)
      for (int f = 0; f < plan.n_folds; ++f) tasks.push_back({c, s, f});

  result.records.resize(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task& task = tasks[t];
      try {
        const auto& split = splits[task.seed_idx][task.fold];
        const Dataset train_ds = ds.subset(split.train);
        const Dataset test_ds = ds.subset(split.test);
        const auto& gc = result.configs[task.config];
        const TrainConfig cfg =
            gc.to_train_config(grid.base, plan.seeds[task.seed_idx]);
        const FitResult fr = fit(train_ds, cfg);
        CvRecord rec;
        rec.config = task.config;
        rec.seed = plan.seeds[task.seed_idx];
        rec.fold = task.fold;
        rec.train_metric = evaluate(fr.model, train_ds);
        rec.test_metric = evaluate(fr.model, test_ds);
        result.records[t] = rec;
      } catch (const std::exception& e) {
        const auto& gc = result.configs[task.config];
        errors[t] = std::make_exception_ptr(std::runtime_error(
            "grid_search: config " + std::to_string(task.config) +
            " (lambda_w=" + format_double(gc.lambda_w) +
            ", lambda_u=" + format_double(gc.lambda_u) +
            ", lambda_c=" + format_double(gc.lambda_c) +
            ", M=" + std::to_string(gc.n_centers) +
            ", lr=" + format_double(gc.learning_rate) +
            ", mode=" + to_string(gc.mode) +
            "), seed " + std::to_string(plan.seeds[task.seed_idx]) +
            ", fold " + std::to_string(task.fold) + ": " + e.what()));
      }
    }
  };

  const int nt = resolve_thread_count(n_threads, tasks.size());
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  // per-config aggregation in config order
  const int runs_per_config =
      static_cast<int>(plan.seeds.size()) * plan.n_folds;
  result.summaries.resize(result.configs.size());
  for (std::size_t c = 0; c < result.configs.size(); ++c) {
    double sum_tr = 0, sum_te = 0, sq_tr = 0, sq_te = 0;
    for (const auto& r : result.records) {
      if (r.config != static_cast<Index>(c)) continue;
      sum_tr += r.train_metric;
      sum_te += r.test_metric;
      sq_tr += r.train_metric * r.train_metric;
      sq_te += r.test_metric * r.test_metric;
    }
    ConfigSummary s;
    s.config = result.configs[c];
    s.n_runs = runs_per_config;
    s.mean_train = sum_tr / runs_per_config;
    s.mean_test = sum_te / runs_per_config;
    if (runs_per_config > 1) {
      s.std_train = std::sqrt(std::max(
          0.0, (sq_tr - runs_per_config * s.mean_train * s.mean_train) /
                   (runs_per_config - 1)));
      s.std_test = std::sqrt(std::max(
          0.0, (sq_te - runs_per_config * s.mean_test * s.mean_test) /
                   (runs_per_config - 1)));
    }
    result.summaries[c] = s;
  }

  const bool maximize = higher_is_better(ds.task);
  result.best = 0;
  for (std::size_t c = 1; c < result.summaries.size(); ++c) {
    const double cur = result.summaries[c].mean_test;
    const double best = result.summaries[result.best].mean_test;
    if (maximize ? cur > best : cur < best) result.best = static_cast<Index>(c);
  }
  return result;
}

}  // namespace grbfnn
