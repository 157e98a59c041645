#include "rpca/ksvd.hpp"

#include "rpca/error.hpp"
#include "rpca/numerics.hpp"
#include "rpca/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace rpca::ksvd {

std::vector<double> SparseCode::dense(std::size_t atoms) const {
  std::vector<double> out(atoms, 0.0);
  for (std::size_t i = 0; i < support.size(); ++i) out[support[i]] = values[i];
  return out;
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kResidualStop = 1e-10;

SparseCode omp_impl(const MatrixXd& D, const Eigen::Ref<const VectorXd>& x, std::size_t t) {
  const Index n = D.rows(), c = D.cols();
  const Index limit = Index(std::min<std::size_t>(t, std::size_t(std::min(n, c))));
  SparseCode code;
  MatrixXd Q(n, limit);
  MatrixXd R = MatrixXd::Zero(limit, limit);
  VectorXd qtx(limit);
  VectorXd r = x;
  std::vector<bool> used(std::size_t(c), false);
  const double x_norm = x.norm();

  Index k = 0;
  while (k < limit && r.norm() >= kResidualStop) {
    const VectorXd corr = D.transpose() * r;
    Index best = -1;
    double best_abs = 0.0;
    for (Index a = 0; a < c; ++a) {
      if (used[std::size_t(a)]) continue;
      if (std::fabs(corr[a]) > best_abs) {
        best_abs = std::fabs(corr[a]);
        best = a;
      }
    }
    if (best < 0 || best_abs <= 1e-14 * std::max(1.0, x_norm)) break;

    // Append the atom to the orthonormal basis of the support (two MGS passes).
    VectorXd q = D.col(best);
    for (int pass = 0; pass < 2; ++pass)
      for (Index j = 0; j < k; ++j) {
        const double h = Q.col(j).dot(q);
        R(j, k) += h;
        q -= h * Q.col(j);
      }
    const double norm = q.norm();
    if (norm <= 1e-12) break;  // atom lies in the span of the support
    R(k, k) = norm;
    Q.col(k) = q / norm;
    used[std::size_t(best)] = true;
    code.support.push_back(std::size_t(best));

    qtx[k] = Q.col(k).dot(x);
    r -= Q.col(k).dot(r) * Q.col(k);
    for (Index j = 0; j <= k; ++j) r -= Q.col(j).dot(r) * Q.col(j);
    ++k;
  }

  if (k > 0) {
    const VectorXd coef =
        R.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(qtx.head(k));
    code.values.assign(coef.data(), coef.data() + k);
  }
  return code;
}

void normalize(Eigen::Ref<VectorXd> v) {
  const double n = v.norm();
  if (n > 0.0) v /= n;
}

}  // namespace

SparseCode omp(const Matrix& D, std::span<const double> x, std::size_t t) {
  if (x.size() != D.rows())
    throw Error(ErrorCode::ShapeMismatch, "signal length " + std::to_string(x.size()) +
                                              " vs dictionary " + D.shape_string());
  const MatrixXd Dm = D.eigen();
  const Eigen::Map<const VectorXd> xv(x.data(), Index(x.size()));
  return omp_impl(Dm, xv, t);
}

Dictionary ksvd_learn(const Matrix& M, std::size_t atoms, std::size_t t, std::size_t iterations,
                      std::uint64_t seed) {
  if (atoms < 1) throw Error(ErrorCode::InvalidArgument, "need at least one atom");
  if (t < 1 || t > atoms) throw Error(ErrorCode::InvalidArgument, "sparsity must lie in [1, atoms]");
  if (iterations < 1) throw Error(ErrorCode::InvalidArgument, "need at least one iteration");
  if (M.empty() || frobenius_norm(M) == 0.0)
    throw Error(ErrorCode::DegenerateInput, "training matrix is zero");

  const MatrixXd X = M.eigen();
  const Index n = X.rows(), m = X.cols(), c = Index(atoms);
  Rng rng(seed);

  // Initial atoms: distinct non-zero training columns in random order, then
  // Gaussian directions if there are too few.
  MatrixXd D(n, c);
  Index filled = 0;
  for (std::size_t col : rng.permutation(std::size_t(m))) {
    if (filled == c) break;
    if (X.col(Index(col)).norm() == 0.0) continue;
    D.col(filled) = X.col(Index(col));
    normalize(D.col(filled++));
  }
  for (; filled < c; ++filled) {
    for (Index i = 0; i < n; ++i) D(i, filled) = rng.normal();
    normalize(D.col(filled));
  }

  MatrixXd B = MatrixXd::Zero(c, m);
  Dictionary dict;
  dict.t = t;
  bool have_codes = false;

  for (std::size_t iter = 0; iter < iterations; ++iter) {
    // Sparse coding.
    for (Index j = 0; j < m; ++j) {
      const SparseCode code = omp_impl(D, X.col(j), t);
      VectorXd b = VectorXd::Zero(c);
      for (std::size_t s = 0; s < code.support.size(); ++s) b[Index(code.support[s])] = code.values[s];
      if (have_codes) {
        const double fresh = (X.col(j) - D * b).squaredNorm();
        const double old = (X.col(j) - D * B.col(j)).squaredNorm();
        if (old <= fresh) continue;
      }
      B.col(j) = b;
    }
    have_codes = true;

    // Atom updates on the restricted residual.
    MatrixXd residual = X - D * B;
    for (Index k = 0; k < c; ++k) {
      std::vector<Index> omega;
      for (Index j = 0; j < m; ++j)
        if (B(k, j) != 0.0) omega.push_back(j);
      if (omega.empty()) continue;
      MatrixXd Ek(n, Index(omega.size()));
      for (std::size_t s = 0; s < omega.size(); ++s)
        Ek.col(Index(s)) = residual.col(omega[s]) + D.col(k) * B(k, omega[s]);
      const SvdFactors f = svd(Matrix::from_eigen(Ek));
      D.col(k) = f.left.eigen().col(0);
      for (std::size_t s = 0; s < omega.size(); ++s) {
        B(k, omega[s]) = f.values[0] * f.right(s, 0);
        residual.col(omega[s]) = Ek.col(Index(s)) - D.col(k) * B(k, omega[s]);
      }
    }

    // Unused atoms carry no coefficients, so replacing them leaves the error
    // unchanged.
    VectorXd col_err = residual.colwise().norm();
    for (Index k = 0; k < c; ++k) {
      if (!B.row(k).isZero(0.0)) continue;
      Index worst = 0;
      const double worst_err = col_err.maxCoeff(&worst);
      if (worst_err > 0.0) {
        D.col(k) = residual.col(worst);
        col_err[worst] = 0.0;
      } else {
        for (Index i = 0; i < n; ++i) D(i, k) = rng.normal();
      }
      normalize(D.col(k));
    }

    dict.history.push_back((X - D * B).norm());
  }

  dict.D = Matrix::from_eigen(D);
  dict.B = Matrix::from_eigen(B);
  return dict;
}

std::pair<Matrix, Matrix> learn_features(const Matrix& M, std::size_t atoms, std::size_t t,
                                         std::size_t iterations, std::uint64_t seed) {
  if (atoms > M.rows() || atoms > M.cols())
    throw Error(ErrorCode::DimensionOverflow, std::to_string(atoms) + " atoms exceed the dimensions of " +
                                                  M.shape_string());
  const Dictionary left = ksvd_learn(M, atoms, t, iterations, derive_seed(seed, 1));
  const Dictionary right = ksvd_learn(M.transpose(), atoms, t, iterations, derive_seed(seed, 2));
  return {orthonormalize(left.D), orthonormalize(right.D)};
}

}  // namespace rpca::ksvd
