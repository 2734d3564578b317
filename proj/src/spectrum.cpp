#include "grbfnn/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace grbfnn {

namespace {

double offdiag_norm(const Matrix& A) {
  double sum = 0.0;
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      if (i != j) sum += A(i, j) * A(i, j);
  return std::sqrt(sum);
}

void fix_column_signs(Matrix& V) {
  for (Index k = 0; k < V.cols(); ++k) {
    for (Index i = 0; i < V.rows(); ++i) {
      if (std::abs(V(i, k)) > 1e-9) {
        if (V(i, k) < 0.0) V.col(k) = -V.col(k);
        break;
      }
    }
  }
}

}  // namespace

PrecisionSpectrum eig_symmetric(const Matrix& P) {
  if (P.rows() != P.cols())
    throw std::invalid_argument("eig_symmetric: matrix must be square");
  const Index d = P.rows();
  const double max_abs = d > 0 ? P.cwiseAbs().maxCoeff() : 0.0;
  const double asym = (P - P.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(1.0, max_abs))
    throw std::invalid_argument("eig_symmetric: matrix is not symmetric");

  Matrix A = 0.5 * (P + P.transpose());
  Matrix V = Matrix::Identity(d, d);
  const double threshold = 1e-12 * P.norm();

  bool converged = offdiag_norm(A) <= threshold;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (Index p = 0; p < d - 1; ++p) {
      for (Index q = p + 1; q < d; ++q) {
        if (A(p, q) == 0.0) continue;
        Eigen::JacobiRotation<double> rot;
        rot.makeJacobi(A(p, p), A(p, q), A(q, q));
        A.applyOnTheLeft(p, q, rot.transpose());
        A.applyOnTheRight(p, q, rot);
        V.applyOnTheRight(p, q, rot);
      }
    }
    converged = offdiag_norm(A) <= threshold;
  }
  if (!converged)
    throw std::runtime_error("eig_symmetric: no convergence in 100 sweeps");

  std::vector<Index> order(d);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return A(a, a) > A(b, b); });

  PrecisionSpectrum s;
  s.eigenvalues.resize(d);
  s.eigenvectors.resize(d, d);
  const double clamp_tol = 1e-10 * std::max(1.0, max_abs);
  for (Index k = 0; k < d; ++k) {
    double gamma = A(order[k], order[k]);
    if (gamma < 0.0) {
      if (gamma < -clamp_tol)
        throw std::domain_error(
            "eig_symmetric: eigenvalue " + std::to_string(gamma) +
            " below zero; matrix is not positive semidefinite");
      gamma = 0.0;
    }
    s.eigenvalues(k) = gamma;
    s.eigenvectors.col(k) = V.col(order[k]);
  }
  fix_column_signs(s.eigenvectors);

  const double total = s.eigenvalues.sum();
  s.decay = total > 0.0 ? Vector(s.eigenvalues / total) : Vector(Vector::Zero(d));
  return s;
}

FeatureImportance feature_importance(const PrecisionSpectrum& s) {
  const Index d = s.dim();
  FeatureImportance fi;
  const Matrix absV = s.eigenvectors.cwiseAbs();
  fi.per_component = absV * s.eigenvalues.asDiagonal();
  Vector raw = fi.per_component.rowwise().sum();
  const double top = d > 0 ? raw.maxCoeff() : 0.0;
  if (top > 0.0) {
    fi.scores = raw / top;
    fi.per_component /= top;
  } else {
    fi.scores = Vector::Zero(d);
    fi.per_component = Matrix::Zero(d, d);
  }
  return fi;
}

Matrix active_projection(const Ref<Matrix>& Xs, const PrecisionSpectrum& s,
                         Index k) {
  if (k < 1 || k > s.dim())
    throw std::out_of_range("active_projection: k out of range");
  if (Xs.cols() != s.dim())
    throw std::invalid_argument("active_projection: feature count mismatch");
  return Xs * s.eigenvectors.leftCols(k);
}

Index active_dimension(const PrecisionSpectrum& s, double threshold) {
  if (threshold <= 0.0 || threshold > 1.0)
    throw std::invalid_argument("active_dimension: threshold must be in (0, 1]");
  const double total = s.eigenvalues.sum();
  if (total <= 0.0)
    throw std::domain_error("active_dimension: spectrum is all zero");
  double cum = 0.0;
  for (Index k = 0; k < s.dim(); ++k) {
    cum += s.eigenvalues(k);
    if (cum / total >= threshold) return k + 1;
  }
  return s.dim();
}

Matrix subspace_surface(const GrbfnnModel& m, const PrecisionSpectrum& s,
                        const SurfaceBounds& bounds, Index resolution) {
  if (!m.is_trained())
    throw std::logic_error("subspace_surface: model is not trained");
  if (s.dim() < 2)
    throw std::invalid_argument("subspace_surface: requires dimension >= 2");
  if (s.dim() != m.dim())
    throw std::invalid_argument("subspace_surface: spectrum/model mismatch");
  if (resolution < 2)
    throw std::invalid_argument("subspace_surface: resolution must be >= 2");

  const Vector v1 = s.eigenvectors.col(0);
  const Vector v2 = s.eigenvectors.col(1);
  const Index n = resolution * resolution;
  Matrix grid(n, 2);
  Matrix Xhat(n, m.dim());
  const double step1 = (bounds.z1_max - bounds.z1_min) / double(resolution - 1);
  const double step2 = (bounds.z2_max - bounds.z2_min) / double(resolution - 1);
  Index r = 0;
  for (Index i = 0; i < resolution; ++i) {
    const double z1 = bounds.z1_min + step1 * double(i);
    for (Index j = 0; j < resolution; ++j, ++r) {
      const double z2 = bounds.z2_min + step2 * double(j);
      grid(r, 0) = z1;
      grid(r, 1) = z2;
      Xhat.row(r) = z1 * v1.transpose() + z2 * v2.transpose();
    }
  }
  const Matrix f = forward_standardized(m, Xhat);
  Matrix out(n, 2 + f.cols());
  out.leftCols(2) = grid;
  out.rightCols(f.cols()) = f;
  return out;
}

}  // namespace grbfnn
