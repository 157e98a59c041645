#pragma once

#include "rpca/matrix.hpp"

#include <cstddef>
#include <vector>

namespace rpca {

/// Relative cutoff below which a singular value counts as zero.
inline constexpr double kRankCutoff = 1e-10;

/// Thin singular value decomposition A = left * diag(values) * rightᵀ.
///
/// Singular values are non-increasing and non-negative. Each left singular
/// vector is signed so that its first non-negligible entry is positive, and
/// the matching right vector is flipped with it.
struct SvdFactors {
  Matrix left;                  // n1 x k
  std::vector<double> values;   // k = min(n1, n2)
  Matrix right;                 // n2 x k
};

/// Computes the full thin SVD with LAPACK. Throws ConvergenceFailure if the
/// kernel does not converge; never truncates silently.
SvdFactors svd(const Matrix& a);

/// Number of singular values >= kRankCutoff * sigma_1 (0 for a zero matrix).
std::size_t numerical_rank(const std::vector<double>& singular_values);
std::size_t numerical_rank(const Matrix& a);

/// Orthonormal basis for the column span of `m` via twice-iterated modified
/// Gram-Schmidt. Column order and orientation are preserved, so an already
/// orthonormal input is returned unchanged up to rounding.
///
/// Throws RankDeficient when a column's remaining norm drops below
/// 1e-12 times the largest input column norm.
Matrix orthonormalize(const Matrix& m);

/// Elementwise soft threshold: sgn(a) * max(|a| - tau, 0).
Matrix shrink(const Matrix& a, double tau);

/// Singular value thresholding: M * shrink(Sigma, tau) * Yᵀ. tau == 0 returns
/// the input unchanged.
Matrix svt(const Matrix& a, double tau);

struct Norms {
  double fro = 0.0;
  double l1 = 0.0;
  double nuclear = 0.0;
  double spectral = 0.0;
};

Norms norms(const Matrix& a);
double frobenius_norm(const Matrix& a);
double spectral_norm(const Matrix& a);
double nuclear_norm(const Matrix& a);

}  // namespace rpca
