#pragma once

#include "rpca/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace rpca::ksvd {

struct SparseCode {
  std::vector<std::size_t> support;  // atom indices in selection order
  std::vector<double> values;        // coefficient per support entry

  std::vector<double> dense(std::size_t atoms) const;
};

/// Orthogonal matching pursuit against unit-norm atoms (columns of D).
/// Stops after t atoms, when the residual norm falls below 1e-10, or when no
/// remaining atom correlates with the residual. Coefficients are the least
/// squares fit on the selected support.
SparseCode omp(const Matrix& D, std::span<const double> x, std::size_t t);

struct Dictionary {
  Matrix D;  // n x c, unit-norm atoms
  Matrix B;  // c x m codes, at most t non-zeros per column
  std::size_t t = 0;
  std::vector<double> history;  // ||M - D B||_F after each iteration
};

/// K-SVD: alternate OMP coding of every column of M with sequential rank-1
/// SVD updates of each atom over the columns that use it. Unused atoms are
/// replaced by the worst residual column. A column keeps its previous code
/// when OMP would reconstruct it worse, so the error never increases.
///
/// Throws DegenerateInput when M is zero.
Dictionary ksvd_learn(const Matrix& M, std::size_t atoms, std::size_t t, std::size_t iterations,
                      std::uint64_t seed);

/// Feature pair for the solver: orthonormalized dictionaries of M and Mᵀ.
std::pair<Matrix, Matrix> learn_features(const Matrix& M, std::size_t atoms, std::size_t t,
                                         std::size_t iterations, std::uint64_t seed);

}  // namespace rpca::ksvd
