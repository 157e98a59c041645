#include "rpca/numerics.hpp"

#include "rpca/error.hpp"
#include "rpca/kernels.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <mutex>

extern "C" void openblas_set_num_threads(int);

namespace rpca {
namespace {

// A multi-threaded BLAS can change summation order between runs.
void pin_blas_threads() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}

void fix_signs(SvdFactors& f) {
  const std::size_t n1 = f.left.rows(), n2 = f.right.rows();
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    double largest = 0.0;
    for (std::size_t i = 0; i < n1; ++i) largest = std::max(largest, std::fabs(f.left(i, k)));
    const double floor = 1e-12 * largest;
    double lead = 0.0;
    for (std::size_t i = 0; i < n1; ++i) {
      if (std::fabs(f.left(i, k)) > floor) {
        lead = f.left(i, k);
        break;
      }
    }
    if (lead < 0.0) {
      for (std::size_t i = 0; i < n1; ++i) f.left(i, k) = -f.left(i, k);
      for (std::size_t j = 0; j < n2; ++j) f.right(j, k) = -f.right(j, k);
    }
  }
}

}  // namespace

SvdFactors svd(const Matrix& a) {
  if (!a.all_finite()) throw Error(ErrorCode::InvalidArgument, "svd input has non-finite entries");
  pin_blas_threads();
  const std::size_t m = a.rows(), n = a.cols(), k = std::min(m, n);
  SvdFactors f{Matrix(m, k), std::vector<double>(k), Matrix(n, k)};
  if (k == 0) return f;

  std::vector<double> u(m * k), vt(k * n);
  std::vector<double> work(a.values().begin(), a.values().end());
  const auto M = lapack_int(m), N = lapack_int(n), K = lapack_int(k);
  lapack_int info = LAPACKE_dgesdd(LAPACK_ROW_MAJOR, 'S', M, N, work.data(), N, f.values.data(),
                                   u.data(), K, vt.data(), N);
  if (info > 0) {
    // Divide and conquer failed; retry with the QR-iteration driver.
    std::vector<double> superb(k);
    work.assign(a.values().begin(), a.values().end());
    info = LAPACKE_dgesvd(LAPACK_ROW_MAJOR, 'S', 'S', M, N, work.data(), N, f.values.data(),
                          u.data(), K, vt.data(), N, superb.data());
  }
  if (info != 0)
    throw Error(ErrorCode::ConvergenceFailure,
                "LAPACK SVD of " + a.shape_string() + " failed, info=" + std::to_string(info));

  std::copy(u.begin(), u.end(), f.left.data());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) f.right(j, i) = vt[i * n + j];
  fix_signs(f);
  return f;
}

std::size_t numerical_rank(const std::vector<double>& sv) {
  if (sv.empty() || sv.front() <= 0.0) return 0;
  const double cutoff = kRankCutoff * sv.front();
  return std::size_t(std::count_if(sv.begin(), sv.end(), [&](double s) { return s >= cutoff; }));
}

std::size_t numerical_rank(const Matrix& a) { return numerical_rank(svd(a).values); }

Matrix orthonormalize(const Matrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  Eigen::MatrixXd q = m.eigen();
  double largest = 0.0;
  for (Eigen::Index c = 0; c < q.cols(); ++c) largest = std::max(largest, q.col(c).norm());
  if (cols > rows) throw Error(ErrorCode::RankDeficient, "more columns than rows in " + m.shape_string());
  if (cols > 0 && largest == 0.0) throw Error(ErrorCode::RankDeficient, "zero matrix");

  for (Eigen::Index c = 0; c < q.cols(); ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index p = 0; p < c; ++p) q.col(c) -= q.col(p).dot(q.col(c)) * q.col(p);
    }
    const double norm = q.col(c).norm();
    if (norm < 1e-12 * largest)
      throw Error(ErrorCode::RankDeficient, "column " + std::to_string(c) + " of " +
                                                m.shape_string() + " is linearly dependent");
    q.col(c) /= norm;
  }
  return Matrix::from_eigen(q);
}

Matrix shrink(const Matrix& a, double tau) {
  if (tau < 0.0) throw Error(ErrorCode::InvalidArgument, "shrink threshold must be >= 0");
  Matrix out(a.rows(), a.cols());
  kernels::active().shrink(a.data(), tau, out.data(), a.size());
  return out;
}

Matrix svt(const Matrix& a, double tau) {
  if (tau < 0.0) throw Error(ErrorCode::InvalidArgument, "svt threshold must be >= 0");
  if (tau == 0.0) return a;
  SvdFactors f = svd(a);
  std::size_t kept = 0;
  while (kept < f.values.size() && f.values[kept] > tau) ++kept;
  Matrix out(a.rows(), a.cols());
  if (kept == 0) return out;
  Eigen::VectorXd s(kept);
  for (std::size_t i = 0; i < kept; ++i) s[Eigen::Index(i)] = f.values[i] - tau;
  const auto k = Eigen::Index(kept);
  out.eigen().noalias() = f.left.eigen().leftCols(k) * s.asDiagonal() *
                          f.right.eigen().leftCols(k).transpose();
  return out;
}

double frobenius_norm(const Matrix& a) {
  return std::sqrt(kernels::active().sum_squares(a.data(), a.size()));
}

double spectral_norm(const Matrix& a) {
  SvdFactors f = svd(a);
  return f.values.empty() ? 0.0 : f.values.front();
}

double nuclear_norm(const Matrix& a) {
  SvdFactors f = svd(a);
  double sum = 0.0;
  for (double s : f.values) sum += s;
  return sum;
}

Norms norms(const Matrix& a) {
  SvdFactors f = svd(a);
  Norms n;
  n.fro = frobenius_norm(a);
  n.l1 = kernels::active().sum_abs(a.data(), a.size());
  for (double s : f.values) n.nuclear += s;
  n.spectral = f.values.empty() ? 0.0 : f.values.front();
  return n;
}

}  // namespace rpca
