#include "grbfnn/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace grbfnn {

Vector vech(const Matrix& U) {
  if (U.rows() != U.cols())
    throw std::invalid_argument("vech: matrix must be square");
  const Index d = U.rows();
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < i; ++j)
      if (U(i, j) != 0.0)
        throw std::invalid_argument("vech: matrix must be upper triangular");
  Vector u(vech_size(d));
  Index k = 0;
  for (Index i = 0; i < d; ++i)
    for (Index j = i; j < d; ++j) u(k++) = U(i, j);
  return u;
}

Matrix unvech(const Vector& u) {
  const Index len = u.size();
  const Index d =
      static_cast<Index>((std::sqrt(8.0 * static_cast<double>(len) + 1.0) - 1.0) / 2.0 + 0.5);
  if (vech_size(d) != len)
    throw std::invalid_argument("unvech: length is not a triangular number");
  Matrix U = Matrix::Zero(d, d);
  Index k = 0;
  for (Index i = 0; i < d; ++i)
    for (Index j = i; j < d; ++j) U(i, j) = u(k++);
  return U;
}

PrecisionFactor::PrecisionFactor(Index d, Vector packed) : dim(d), u(std::move(packed)) {
  if (dim < 1) throw std::invalid_argument("PrecisionFactor: dim must be positive");
  if (u.size() != vech_size(dim))
    throw std::invalid_argument("PrecisionFactor: packed length does not match dim");
}

PrecisionFactor PrecisionFactor::from_factor(const Matrix& U) {
  return PrecisionFactor(U.rows(), vech(U));
}

PrecisionFactor PrecisionFactor::isotropic(Index d, double scale) {
  Matrix U = scale * Matrix::Identity(d, d);
  return from_factor(U);
}

Matrix precision_matrix(const PrecisionFactor& f) {
  const Matrix U = f.factor();
  Matrix P = U.transpose() * U;
  for (Index i = 0; i < P.rows(); ++i)
    for (Index j = i + 1; j < P.cols(); ++j) P(j, i) = P(i, j);
  return P;
}

double mahalanobis_sq(const Ref<Vector>& x, const Ref<Vector>& c,
                      const PrecisionFactor& f) {
  if (x.size() != f.dim || c.size() != f.dim)
    throw std::invalid_argument("mahalanobis_sq: dimension mismatch");
  const Matrix U = f.factor();
  return (U * (x - c)).squaredNorm();
}

double gaussian_kernel(const Ref<Vector>& x, const Ref<Vector>& c,
                       const PrecisionFactor& f) {
  return std::exp(-0.5 * mahalanobis_sq(x, c, f));
}

Matrix kernel_matrix(const Ref<Matrix>& X, const Ref<Matrix>& C,
                     const PrecisionFactor& f) {
  if (X.cols() != f.dim || C.cols() != f.dim)
    throw std::invalid_argument("kernel_matrix: dimension mismatch");
  const Matrix U = f.factor();
  // ||U(x - c)||^2 expanded through the Gram matrix of the mapped rows;
  // cancellation can leave tiny negatives, clamped so entries stay <= 1.
  const Matrix Xt = X * U.transpose();
  const Matrix Ct = C * U.transpose();
  const Vector sqx = Xt.rowwise().squaredNorm();
  const Vector sqc = Ct.rowwise().squaredNorm();
  Matrix d2 = -2.0 * (Xt * Ct.transpose());
  d2.colwise() += sqx;
  d2.rowwise() += sqc.transpose();
  return (-0.5 * d2.cwiseMax(0.0)).array().exp();
}

double latent_factorized_kernel(const Ref<Vector>& z, const Ref<Vector>& z_c,
                                const Ref<Vector>& gamma) {
  if (z.size() != z_c.size() || z.size() != gamma.size())
    throw std::invalid_argument("latent_factorized_kernel: dimension mismatch");
  if ((gamma.array() < 0.0).any())
    throw std::invalid_argument("latent_factorized_kernel: negative eigenvalue");
  double value = 1.0;
  for (Index d = 0; d < z.size(); ++d) {
    const double delta = z(d) - z_c(d);
    value *= std::exp(-0.5 * gamma(d) * delta * delta);
  }
  return value;
}

}  // namespace grbfnn
