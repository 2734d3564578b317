#include "grbfnn/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "grbfnn/io.hpp"

namespace grbfnn {

void TrainConfig::validate() const {
  if (n_centers < 1) throw std::invalid_argument("n_centers must be >= 1");
  if (learning_rate <= 0.0) throw std::invalid_argument("learning_rate must be > 0");
  if (max_epochs < 1) throw std::invalid_argument("max_epochs must be a positive integer");
  if (tolerance < 0.0) throw std::invalid_argument("tolerance must be >= 0");
  if (adam_beta1 < 0.0 || adam_beta1 >= 1.0 || adam_beta2 < 0.0 || adam_beta2 >= 1.0)
    throw std::invalid_argument("adam betas must lie in [0, 1)");
  if (adam_eps <= 0.0) throw std::invalid_argument("adam_eps must be > 0");
  if (reg.lambda_w < 0.0 || reg.lambda_u < 0.0 || reg.lambda_c < 0.0)
    throw std::invalid_argument("regularizers must be >= 0");
}

void TrainTrace::write_csv(std::ostream& out) const {
  out << "epoch,loss_R,loss_E,grad_norm_w,grad_norm_u,grad_norm_c\n";
  for (std::size_t i = 0; i < loss_R.size(); ++i) {
    out << (i + 1) << ',' << format_double(loss_R[i]) << ','
        << format_double(loss_E[i]) << ',' << format_double(grad_norm_w[i])
        << ',' << format_double(grad_norm_u[i]) << ','
        << format_double(grad_norm_c[i]) << '\n';
  }
}

std::string TrainTrace::to_csv() const {
  std::ostringstream ss;
  write_csv(ss);
  return ss.str();
}

namespace {

Index nearest_center(const Ref<Matrix>& X, const Matrix& centers, Index row) {
  Index best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < centers.rows(); ++c) {
    const double d = (X.row(row) - centers.row(c)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

KmeansResult kmeans_detailed(const Ref<Matrix>& X, Index k, std::uint64_t seed,
                             int max_iter) {
  const Index n = X.rows();
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (k > n) throw std::invalid_argument("kmeans: k exceeds the number of points");

  std::mt19937_64 rng(seed);
  Matrix centers(k, X.cols());

  // k-means++ seeding
  {
    std::uniform_int_distribution<Index> uni(0, n - 1);
    centers.row(0) = X.row(uni(rng));
    Vector d2(n);
    for (Index i = 0; i < n; ++i)
      d2(i) = (X.row(i) - centers.row(0)).squaredNorm();
    for (Index j = 1; j < k; ++j) {
      const double total = d2.sum();
      Index pick = 0;
      if (total > 0.0) {
        std::uniform_real_distribution<double> ur(0.0, total);
        double r = ur(rng);
        double cum = 0.0;
        for (Index i = 0; i < n; ++i) {
          cum += d2(i);
          if (r <= cum) {
            pick = i;
            break;
          }
          pick = i;
        }
      } else {
        pick = j % n;  // all remaining mass zero (duplicate points)
      }
      centers.row(j) = X.row(pick);
      for (Index i = 0; i < n; ++i)
        d2(i) = std::min(d2(i), (X.row(i) - centers.row(j)).squaredNorm());
    }
  }

  KmeansResult result;
  result.assignment.assign(n, 0);
  std::vector<Index> counts(k, 0);

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = iter == 0;
    double wcss = 0.0;
    for (Index i = 0; i < n; ++i) {
      const Index a = nearest_center(X, centers, i);
      wcss += (X.row(i) - centers.row(a)).squaredNorm();
      if (a != result.assignment[i]) changed = true;
      result.assignment[i] = a;
    }
    result.wcss.push_back(wcss);
    if (!changed && iter > 0) break;

    std::fill(counts.begin(), counts.end(), Index{0});
    Matrix sums = Matrix::Zero(k, X.cols());
    for (Index i = 0; i < n; ++i) {
      sums.row(result.assignment[i]) += X.row(i);
      counts[result.assignment[i]]++;
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.row(c) = sums.row(c) / double(counts[c]);
      } else {
        // re-seed to the point farthest from its assigned center
        Index far = 0;
        double far_d = -1.0;
        for (Index i = 0; i < n; ++i) {
          const double d =
              (X.row(i) - centers.row(result.assignment[i])).squaredNorm();
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centers.row(c) = X.row(far);
        result.assignment[far] = c;
      }
    }
  }

  // final assignment pass so every center is the mean of its cluster
  std::fill(counts.begin(), counts.end(), Index{0});
  Matrix sums = Matrix::Zero(k, X.cols());
  for (Index i = 0; i < n; ++i) {
    const Index a = nearest_center(X, centers, i);
    result.assignment[i] = a;
    sums.row(a) += X.row(i);
    counts[a]++;
  }
  for (Index c = 0; c < k; ++c)
    if (counts[c] > 0) centers.row(c) = sums.row(c) / double(counts[c]);

  result.centers = std::move(centers);
  return result;
}

Matrix kmeans(const Ref<Matrix>& X, Index k, std::uint64_t seed) {
  return kmeans_detailed(X, k, seed).centers;
}

AdamState AdamState::zeros(Index n) {
  AdamState s;
  s.m = Vector::Zero(n);
  s.v = Vector::Zero(n);
  return s;
}

void adam_step(Vector& params, const Ref<Vector>& grads, AdamState& state,
               int t, const TrainConfig& cfg) {
  if (params.size() != grads.size() || state.m.size() != params.size() ||
      state.v.size() != params.size())
    throw std::invalid_argument("adam_step: shape mismatch");
  if (t < 1) throw std::invalid_argument("adam_step: t must be >= 1");
  const double b1 = cfg.adam_beta1;
  const double b2 = cfg.adam_beta2;
  state.m = b1 * state.m + (1.0 - b1) * grads;
  state.v = b2 * state.v.array() + (1.0 - b2) * grads.array().square();
  const double c1 = 1.0 - std::pow(b1, t);
  const double c2 = 1.0 - std::pow(b2, t);
  params.array() -= cfg.learning_rate * (state.m.array() / c1) /
                    ((state.v.array() / c2).sqrt() + cfg.adam_eps);
}

namespace {

double median_pairwise_distance(const Ref<Matrix>& X, std::uint64_t seed) {
  const Index n = X.rows();
  const Index cap = std::min<Index>(n, 256);
  std::vector<Index> rows(n);
  std::iota(rows.begin(), rows.end(), Index{0});
  if (cap < n) {
    std::mt19937_64 rng(seed);
    std::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(cap);
  }
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(cap) * (cap - 1) / 2);
  for (Index a = 0; a < cap; ++a)
    for (Index b = a + 1; b < cap; ++b)
      dists.push_back((X.row(rows[a]) - X.row(rows[b])).norm());
  if (dists.empty()) return 0.0;
  const std::size_t mid = (dists.size() - 1) / 2;
  std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
  return dists[mid];
}

constexpr std::uint64_t kSubsampleSalt = 0x9e3779b97f4a7c15ULL;

}  // namespace

GrbfnnModel init_model(const Ref<Matrix>& X, const Ref<Matrix>& Y,
                       const TrainConfig& cfg) {
  cfg.validate();
  const Index n = X.rows();
  const Index d = X.cols();
  if (Y.rows() != n) throw std::invalid_argument("init_model: X/Y row mismatch");
  if (n < cfg.n_centers)
    throw std::invalid_argument("init_model: fewer samples than centers");

  GrbfnnModel m;
  m.center_mode = cfg.center_mode;
  m.centers = kmeans(X, cfg.n_centers, cfg.seed);
  const double med = median_pairwise_distance(X, cfg.seed ^ kSubsampleSalt);
  const double s = med > 1e-12 ? 1.0 / med : 1.0;
  m.factor = PrecisionFactor::isotropic(d, s);
  m.weights = Matrix::Zero(cfg.n_centers, Y.cols());
  m.input_stats = Standardizer::identity(d);
  return m;
}

std::pair<GrbfnnModel, TrainTrace> train(const Ref<Matrix>& X,
                                         const Ref<Matrix>& Y,
                                         const TrainConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const Index n = X.rows();
  if (n < 2) throw std::invalid_argument("train: need at least 2 samples");

  bool any_distinct = false;
  for (Index i = 1; i < n && !any_distinct; ++i)
    if ((X.row(i) - X.row(0)).cwiseAbs().maxCoeff() > 0.0) any_distinct = true;
  if (!any_distinct)
    throw std::runtime_error("train: degenerate data, all rows identical");

  GrbfnnModel model = init_model(X, Y, cfg);
  const bool learn = cfg.center_mode == CenterMode::learn;

  Vector params = pack_parameters(model);
  AdamState state = AdamState::zeros(params.size());
  TrainTrace trace;
  trace.loss_R.reserve(cfg.max_epochs);

  double best_R = std::numeric_limits<double>::infinity();
  Vector best_params = params;
  double prev_R = std::numeric_limits<double>::quiet_NaN();

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    unpack_parameters(params, model);
    const auto obj = detail::evaluate_objective(
        X, Y, model.weights, model.factor, model.centers, learn, cfg.reg, true);
    const double R = obj.loss_R;
    if (!std::isfinite(R))
      throw std::runtime_error("train: non-finite loss at epoch " +
                               std::to_string(epoch));

    trace.loss_R.push_back(R);
    trace.loss_E.push_back(obj.loss_E);
    trace.grad_norm_w.push_back(obj.grad_w.norm());
    trace.grad_norm_u.push_back(obj.grad_u.norm());
    trace.grad_norm_c.push_back(learn ? obj.grad_c.norm() : 0.0);

    if (R < best_R) {
      best_R = R;
      best_params = params;
    }
    if (epoch > 1 && std::abs(R - prev_R) <= cfg.tolerance * std::max(1.0, prev_R))
      break;
    prev_R = R;

    Vector g(params.size());
    const Index nw = model.weights.size();
    const Index nu = model.factor.u.size();
    g.head(nw) = Eigen::Map<const Vector>(obj.grad_w.data(), nw);
    g.segment(nw, nu) = obj.grad_u;
    if (learn)
      g.tail(model.centers.size()) =
          Eigen::Map<const Vector>(obj.grad_c.data(), obj.grad_c.size());
    adam_step(params, g, state, epoch, cfg);
  }

  unpack_parameters(best_params, model);
  trace.epochs = static_cast<int>(trace.loss_R.size());
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(model), std::move(trace)};
}

Matrix fit_interpolation(const Ref<Matrix>& X, const Ref<Matrix>& Y,
                         double scale) {
  const Index n = X.rows();
  if (n < 1) throw std::invalid_argument("fit_interpolation: empty data");
  if (Y.rows() != n)
    throw std::invalid_argument("fit_interpolation: X/Y row mismatch");
  double s = scale;
  if (s <= 0.0) {
    const double med = median_pairwise_distance(X, 0);
    s = med > 1e-12 ? 1.0 / med : 1.0;
  }
  const PrecisionFactor f = PrecisionFactor::isotropic(X.cols(), s);
  const Matrix Phi = kernel_matrix(X, X, f);

  Eigen::PartialPivLU<Matrix> lu(Phi);
  const double rc = lu.rcond();
  if (!(rc > 1e-14))
    throw std::runtime_error(
        "fit_interpolation: kernel system singular or ill-conditioned "
        "(rcond ~ " + format_double(rc) + ")");
  Matrix W = lu.solve(Y);
  const double ynorm = std::max(Y.norm(), 1e-300);
  for (int refine = 0; refine < 3; ++refine) {
    const Matrix R = Y - Phi * W;
    if (R.norm() <= 1e-8 * ynorm) break;
    W += lu.solve(R);
  }
  if ((Y - Phi * W).norm() > 1e-8 * ynorm)
    throw std::runtime_error(
        "fit_interpolation: residual above tolerance, system too "
        "ill-conditioned (rcond ~ " + format_double(rc) + ")");
  return W;
}

Matrix encode_targets(const Dataset& ds, const TargetScaler& scaler) {
  const Index n = ds.n();
  if (ds.task == TaskKind::regression) {
    Matrix Y(n, 1);
    Y.col(0) = scaler.normalize(ds.y);
    return Y;
  }
  if (ds.task == TaskKind::binary) {
    Matrix Y(n, 1);
    Y.col(0) = ds.y;
    return Y;
  }
  const Index c = ds.n_classes;
  Matrix Y = Matrix::Zero(n, c);
  for (Index i = 0; i < n; ++i) {
    const Index label = static_cast<Index>(ds.y(i));
    if (label < 0 || label >= c)
      throw std::invalid_argument("encode_targets: label out of range");
    Y(i, label) = 1.0;
  }
  return Y;
}

FitResult fit(const Dataset& ds, const TrainConfig& cfg) {
  ds.validate();
  Standardizer stats = Standardizer::fit(ds.X);
  const Matrix Xs = stats.apply(ds.X);
  TargetScaler scaler;
  if (ds.task == TaskKind::regression) scaler = TargetScaler::fit(ds.y);
  const Matrix Y = encode_targets(ds, scaler);

  auto [model, trace] = train(Xs, Y, cfg);
  model.task = ds.task;
  model.input_stats = std::move(stats);
  model.target_scale = scaler;
  model.feature_names = ds.feature_names;
  return {std::move(model), std::move(trace)};
}

double evaluate(const GrbfnnModel& m, const Dataset& ds) {
  if (ds.dim() != m.dim())
    throw std::invalid_argument("evaluate: feature count mismatch");
  if (ds.task == TaskKind::regression) {
    const Matrix f = forward(m, ds.X);
    const Vector y_norm = m.target_scale.normalize(ds.y);
    return std::sqrt((y_norm - f.col(0)).squaredNorm() / double(ds.n()));
  }
  const Vector labels = predict_labels(m, ds.X);
  double correct = 0.0;
  for (Index i = 0; i < ds.n(); ++i)
    if (labels(i) == ds.y(i)) correct += 1.0;
  return correct / double(ds.n());
}

}  // namespace grbfnn
