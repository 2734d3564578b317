#pragma once

#include "grbfnn/model.hpp"

namespace grbfnn {

// Eigendecomposition of the precision matrix, sorted by descending
// eigenvalue. Column k of `eigenvectors` pairs with `eigenvalues(k)`;
// each column has its first nonzero component positive. `decay` holds
// gamma_k / sum(gamma).
struct PrecisionSpectrum {
  Vector eigenvalues;
  Matrix eigenvectors;
  Vector decay;

  Index dim() const { return eigenvalues.size(); }
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius mass falls
// below 1e-12 * ||P||_F. Throws on asymmetric input, on eigenvalues below
// the PSD rounding tolerance, or if 100 sweeps do not converge.
PrecisionSpectrum eig_symmetric(const Matrix& P);

// Eigenvalue-weighted sum of absolute eigenvector components, divided by
// its maximum so the top feature scores exactly 1. per_component(d, k)
// holds the k-th addend of feature d on the same normalized scale.
struct FeatureImportance {
  Vector scores;
  Matrix per_component;
};

FeatureImportance feature_importance(const PrecisionSpectrum& s);

// Projects standardized inputs onto the k leading eigenvectors: X V[:,1..k].
Matrix active_projection(const Ref<Matrix>& Xs, const PrecisionSpectrum& s,
                         Index k);

// Smallest k whose cumulative eigenvalue fraction reaches the threshold.
Index active_dimension(const PrecisionSpectrum& s, double threshold);

struct SurfaceBounds {
  double z1_min, z1_max;
  double z2_min, z2_max;
};

// Model response over a grid in the plane of the two leading eigenvectors;
// grid points are mapped back to the input space with the remaining latent
// coordinates set to zero. Returns resolution^2 rows of (z1, z2, f...).
Matrix subspace_surface(const GrbfnnModel& m, const PrecisionSpectrum& s,
                        const SurfaceBounds& bounds, Index resolution);

}  // namespace grbfnn
