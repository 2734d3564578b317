#pragma once

#include "grbfnn/types.hpp"

namespace grbfnn {

// Number of entries in the packed upper triangle of a d x d matrix.
constexpr Index vech_size(Index d) { return d * (d + 1) / 2; }

// Half-vectorization: packs the upper triangle of U row by row, diagonal
// entry first within each row. Throws if U is not square or has nonzero
// entries below the diagonal.
Vector vech(const Matrix& U);

// Inverse of vech. The dimension is recovered from the vector length,
// which must be a triangular number.
Matrix unvech(const Vector& u);

// Upper-triangular factor U of the precision matrix P = U^T U, stored in
// half-vectorized form. P is symmetric positive semidefinite for every u;
// it is positive definite iff all diagonal entries of U are nonzero.
struct PrecisionFactor {
  Index dim = 0;
  Vector u;

  PrecisionFactor() = default;
  PrecisionFactor(Index d, Vector packed);

  static PrecisionFactor from_factor(const Matrix& U);
  static PrecisionFactor isotropic(Index d, double scale);

  // Materializes the upper-triangular factor.
  Matrix factor() const { return unvech(u); }
};

// P = U^T U, mirrored so that P(i,j) and P(j,i) are bitwise equal.
Matrix precision_matrix(const PrecisionFactor& f);

// Squared Mahalanobis distance (x-c)^T P (x-c), evaluated as ||U (x-c)||^2.
double mahalanobis_sq(const Ref<Vector>& x, const Ref<Vector>& c,
                      const PrecisionFactor& f);

// exp(-1/2 (x-c)^T P (x-c)); equals 1 iff x == c (for positive definite P).
double gaussian_kernel(const Ref<Vector>& x, const Ref<Vector>& c,
                       const PrecisionFactor& f);

// N x M matrix with entries gaussian_kernel(x_n, c_m, f). Entries lie in
// (0, 1]; row n / column m pairs data point n with center m.
Matrix kernel_matrix(const Ref<Matrix>& X, const Ref<Matrix>& C,
                     const PrecisionFactor& f);

// Kernel evaluated in the eigenbasis of P: the product over axes of
// exp(-1/2 gamma_d (z_d - z_{c,d})^2). Equals gaussian_kernel applied to
// the rotated coordinates z = V^T x. Throws on negative gamma entries.
double latent_factorized_kernel(const Ref<Vector>& z, const Ref<Vector>& z_c,
                                const Ref<Vector>& gamma);

}  // namespace grbfnn
