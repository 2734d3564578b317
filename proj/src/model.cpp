#include "grbfnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grbfnn {

Standardizer Standardizer::fit(const Ref<Matrix>& X) {
  if (X.rows() < 1) throw std::invalid_argument("Standardizer: empty data");
  Standardizer s;
  s.mean = X.colwise().mean();
  Matrix centered = X.rowwise() - s.mean.transpose();
  s.scale = (centered.array().square().colwise().mean()).sqrt();
  for (Index j = 0; j < s.scale.size(); ++j)
    if (s.scale(j) < 1e-12) s.scale(j) = 1.0;
  return s;
}

Standardizer Standardizer::identity(Index d) {
  Standardizer s;
  s.mean = Vector::Zero(d);
  s.scale = Vector::Ones(d);
  return s;
}

Matrix Standardizer::apply(const Ref<Matrix>& X) const {
  if (X.cols() != mean.size())
    throw std::invalid_argument("Standardizer: feature count mismatch");
  return (X.rowwise() - mean.transpose()).array().rowwise() /
         scale.transpose().array();
}

TargetScaler TargetScaler::fit(const Ref<Vector>& y) {
  if (y.size() < 1) throw std::invalid_argument("TargetScaler: empty targets");
  TargetScaler t;
  t.active = true;
  t.y_min = y.minCoeff();
  t.y_max = y.maxCoeff();
  return t;
}

double TargetScaler::span() const {
  const double s = y_max - y_min;
  return s > 1e-12 ? s : 1.0;
}

Vector TargetScaler::normalize(const Ref<Vector>& y) const {
  if (!active) return y;
  return (y.array() - y_min) / span();
}

Vector TargetScaler::denormalize(const Ref<Vector>& y) const {
  if (!active) return y;
  return y.array() * span() + y_min;
}

Index GrbfnnModel::n_free_parameters() const {
  Index count = weights.size() + factor.u.size();
  if (center_mode == CenterMode::learn) count += centers.size();
  return count;
}

namespace detail {

namespace {

// Packs the upper triangle of G (the unconstrained gradient w.r.t. U) in
// vech order; entries below the diagonal correspond to structurally zero
// parameters and are dropped.
Vector pack_upper(const Matrix& G) {
  const Index d = G.rows();
  Vector out(vech_size(d));
  Index k = 0;
  for (Index i = 0; i < d; ++i)
    for (Index j = i; j < d; ++j) out(k++) = G(i, j);
  return out;
}

}  // namespace

Objective evaluate_objective(const Ref<Matrix>& Xs, const Ref<Matrix>& Y,
                             const Matrix& W, const PrecisionFactor& f,
                             const Matrix& C, bool learn_centers,
                             const Regularizers& reg, bool want_grads) {
  const Index d = f.dim;
  if (Xs.cols() != d || C.cols() != d)
    throw std::invalid_argument("evaluate_objective: feature count mismatch");
  if (Y.rows() != Xs.rows() || Y.cols() != W.cols() || W.rows() != C.rows())
    throw std::invalid_argument("evaluate_objective: shape mismatch");

  const Matrix U = f.factor();
  Matrix Xt, Ct;
  Xt.noalias() = Xs * U.transpose();
  Ct.noalias() = C * U.transpose();
  const Vector sqx = Xt.rowwise().squaredNorm();
  const Vector sqc = Ct.rowwise().squaredNorm();
  Matrix d2;
  d2.noalias() = -2.0 * (Xt * Ct.transpose());
  d2.colwise() += sqx;
  d2.rowwise() += sqc.transpose();
  const Matrix Phi = (-0.5 * d2.cwiseMax(0.0)).array().exp();

  Matrix Res = Y;
  Res.noalias() -= Phi * W;

  Objective obj;
  obj.loss_E = 0.5 * Res.squaredNorm();
  obj.penalty = 0.5 * reg.lambda_u * f.u.squaredNorm() +
                0.5 * reg.lambda_w * W.squaredNorm();
  if (learn_centers) obj.penalty += 0.5 * reg.lambda_c * C.squaredNorm();
  obj.loss_R = obj.loss_E + obj.penalty;

  if (!want_grads) return obj;

  obj.grad_w.noalias() = -(Phi.transpose() * Res);
  obj.grad_w += reg.lambda_w * W;

  // A_nm = (Res W^T)_nm Phi_nm; the factor-gradient is U S with
  // S = sum_nm A_nm (x_n - c_m)(x_n - c_m)^T assembled from Gram products.
  Matrix A = Res * W.transpose();
  A.array() *= Phi.array();
  const Vector ra = A.rowwise().sum();
  const Vector ca = A.colwise().sum();
  Matrix T1;
  T1.noalias() = Xs.transpose() * (A * C);
  Matrix S;
  S.noalias() = Xs.transpose() * ra.asDiagonal() * Xs;
  S -= T1;
  S -= T1.transpose();
  S.noalias() += C.transpose() * ca.asDiagonal() * C;
  Matrix GU;
  GU.noalias() = U * S;
  obj.grad_u = pack_upper(GU);
  obj.grad_u += reg.lambda_u * f.u;

  if (learn_centers) {
    Matrix P;
    P.noalias() = U.transpose() * U;
    Matrix B;
    B.noalias() = A.transpose() * Xs;
    B -= ca.asDiagonal() * C;
    obj.grad_c.noalias() = -(B * P);
    obj.grad_c += reg.lambda_c * C;
  }
  return obj;
}

}  // namespace detail

Matrix forward_standardized(const GrbfnnModel& m, const Ref<Matrix>& Xs) {
  if (Xs.cols() != m.dim())
    throw std::invalid_argument("forward: feature count mismatch");
  return kernel_matrix(Xs, m.centers, m.factor) * m.weights;
}

Matrix forward(const GrbfnnModel& m, const Ref<Matrix>& X) {
  return forward_standardized(m, m.input_stats.apply(X));
}

double loss_E(const GrbfnnModel& m, const Ref<Matrix>& X, const Ref<Matrix>& Y) {
  if (Y.rows() != X.rows() || Y.cols() != m.n_outputs())
    throw std::invalid_argument("loss_E: shape mismatch");
  return 0.5 * (Y - forward(m, X)).squaredNorm();
}

double penalty_G(const GrbfnnModel& m, const Regularizers& reg) {
  double g = 0.5 * reg.lambda_u * m.factor.u.squaredNorm() +
             0.5 * reg.lambda_w * m.weights.squaredNorm();
  if (m.center_mode == CenterMode::learn)
    g += 0.5 * reg.lambda_c * m.centers.squaredNorm();
  return g;
}

double loss_R(const GrbfnnModel& m, const Ref<Matrix>& X, const Ref<Matrix>& Y,
              const Regularizers& reg) {
  return loss_E(m, X, Y) + penalty_G(m, reg);
}

Matrix grad_w(const GrbfnnModel& m, const Ref<Matrix>& X, const Ref<Matrix>& Y,
              const Regularizers& reg) {
  const Matrix Xs = m.input_stats.apply(X);
  return detail::evaluate_objective(Xs, Y, m.weights, m.factor, m.centers,
                                    m.center_mode == CenterMode::learn, reg,
                                    true)
      .grad_w;
}

Vector grad_u(const GrbfnnModel& m, const Ref<Matrix>& X, const Ref<Matrix>& Y,
              const Regularizers& reg) {
  const Matrix Xs = m.input_stats.apply(X);
  return detail::evaluate_objective(Xs, Y, m.weights, m.factor, m.centers,
                                    m.center_mode == CenterMode::learn, reg,
                                    true)
      .grad_u;
}

Matrix grad_c(const GrbfnnModel& m, const Ref<Matrix>& X, const Ref<Matrix>& Y,
              const Regularizers& reg) {
  if (m.center_mode != CenterMode::learn)
    throw std::logic_error("grad_c: centers are not learnable in kmeans mode");
  const Matrix Xs = m.input_stats.apply(X);
  return detail::evaluate_objective(Xs, Y, m.weights, m.factor, m.centers, true,
                                    reg, true)
      .grad_c;
}

Vector pack_parameters(const GrbfnnModel& m) {
  const Index nw = m.weights.size();
  const Index nu = m.factor.u.size();
  const Index nc = m.center_mode == CenterMode::learn ? m.centers.size() : 0;
  Vector p(nw + nu + nc);
  p.head(nw) = Eigen::Map<const Vector>(m.weights.data(), nw);
  p.segment(nw, nu) = m.factor.u;
  if (nc > 0) p.tail(nc) = Eigen::Map<const Vector>(m.centers.data(), nc);
  return p;
}

void unpack_parameters(const Ref<Vector>& p, GrbfnnModel& m) {
  const Index nw = m.weights.size();
  const Index nu = m.factor.u.size();
  const Index nc = m.center_mode == CenterMode::learn ? m.centers.size() : 0;
  if (p.size() != nw + nu + nc)
    throw std::invalid_argument("unpack_parameters: size mismatch");
  Eigen::Map<Vector>(m.weights.data(), nw) = p.head(nw);
  m.factor.u = p.segment(nw, nu);
  if (nc > 0) Eigen::Map<Vector>(m.centers.data(), nc) = p.tail(nc);
}

double relative_block_error(const Ref<Vector>& a, const Ref<Vector>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("relative_block_error: size mismatch");
  if (a.size() == 0) return 0.0;
  const double denom = std::max(b.cwiseAbs().maxCoeff(), 1e-12);
  return (a - b).cwiseAbs().maxCoeff() / denom;
}

double GradientReport::max_error() const {
  double e = std::max(err_w, err_u);
  if (has_centers) e = std::max(e, err_c);
  return e;
}

GradientReport gradient_check(const GrbfnnModel& m, const Ref<Matrix>& X,
                              const Ref<Matrix>& Y, const Regularizers& reg,
                              double step) {
  if (step <= 0.0) throw std::invalid_argument("gradient_check: step must be > 0");
  const bool learn = m.center_mode == CenterMode::learn;
  GrbfnnModel probe = m;
  const Vector p0 = pack_parameters(probe);
  Vector fd(p0.size());
  for (Index i = 0; i < p0.size(); ++i) {
    Vector p = p0;
    p(i) = p0(i) + step;
    unpack_parameters(p, probe);
    const double rp = loss_R(probe, X, Y, reg);
    p(i) = p0(i) - step;
    unpack_parameters(p, probe);
    const double rm = loss_R(probe, X, Y, reg);
    fd(i) = (rp - rm) / (2.0 * step);
  }
  unpack_parameters(p0, probe);

  const Matrix Xs = m.input_stats.apply(X);
  const auto obj = detail::evaluate_objective(Xs, Y, m.weights, m.factor,
                                              m.centers, learn, reg, true);
  Vector gw = Eigen::Map<const Vector>(obj.grad_w.data(), obj.grad_w.size());

  GradientReport report;
  report.has_centers = learn;
  const Index nw = m.weights.size();
  const Index nu = m.factor.u.size();
  report.err_w = relative_block_error(gw, fd.head(nw));
  report.err_u = relative_block_error(obj.grad_u, fd.segment(nw, nu));
  if (learn) {
    Vector gc = Eigen::Map<const Vector>(obj.grad_c.data(), obj.grad_c.size());
    report.err_c = relative_block_error(gc, fd.tail(m.centers.size()));
  }
  return report;
}

Vector predict_values(const GrbfnnModel& m, const Ref<Matrix>& X) {
  if (m.task != TaskKind::regression)
    throw std::logic_error("predict_values: model is not a regression model");
  const Matrix f = forward(m, X);
  return m.target_scale.denormalize(f.col(0));
}

Vector predict_labels(const GrbfnnModel& m, const Ref<Matrix>& X) {
  if (m.task == TaskKind::regression)
    throw std::logic_error("predict_labels: model is a regression model");
  const Matrix f = forward(m, X);
  Vector labels(f.rows());
  if (m.task == TaskKind::binary) {
    for (Index i = 0; i < f.rows(); ++i) labels(i) = f(i, 0) >= 0.5 ? 1.0 : 0.0;
  } else {
    for (Index i = 0; i < f.rows(); ++i) {
      Index best = 0;
      f.row(i).maxCoeff(&best);
      labels(i) = static_cast<double>(best);
    }
  }
  return labels;
}

}  // namespace grbfnn
