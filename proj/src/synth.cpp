#include "rpca/synth.hpp"

#include "rpca/error.hpp"
#include "rpca/numerics.hpp"
#include "rpca/rng.hpp"

#include <Eigen/QR>

#include <cmath>
#include <string>

namespace rpca::synth {
namespace {

// Sub-stream tags for make_instance.
enum Stream : std::uint64_t { kLowRank = 1, kErrors, kFeatures, kSide, kMask };

std::size_t exact_count(double fraction, std::size_t total) {
  return std::size_t(std::llround(fraction * double(total)));
}

// Orthonormal basis of the complement of span(basis), n x (n - k).
Eigen::MatrixXd complement(const Matrix& basis, std::size_t n) {
  const auto k = Eigen::Index(basis.cols());
  if (k == 0) return Eigen::MatrixXd::Identity(Eigen::Index(n), Eigen::Index(n));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd(basis.eigen()));
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(Eigen::Index(n) - k);
}

Matrix interleave(const Matrix& basis, const Eigen::MatrixXd& extra, std::size_t d, Rng& rng) {
  const std::size_t n = basis.rows(), r = basis.cols();
  const std::vector<std::size_t> chosen = rng.sample_without_replacement(std::size_t(extra.cols()), d);
  const std::vector<std::size_t> slots = rng.permutation(r + d);
  Matrix out(n, r + d);
  for (std::size_t j = 0; j < r + d; ++j) {
    const std::size_t src = slots[j];
    for (std::size_t i = 0; i < n; ++i)
      out(i, j) = src < r ? basis(i, src) : extra(Eigen::Index(i), Eigen::Index(chosen[src - r]));
  }
  return out;
}

}  // namespace

std::string_view to_string(SignMode mode) noexcept {
  return mode == SignMode::RandomSign ? "random" : "coherent";
}

SignMode parse_sign_mode(std::string_view name) {
  if (name == "random") return SignMode::RandomSign;
  if (name == "coherent") return SignMode::Coherent;
  throw Error(ErrorCode::InvalidArgument, "sign mode must be 'random' or 'coherent'");
}

LowRankFactors gen_low_rank(std::size_t n1, std::size_t n2, std::size_t r, double variance,
                            std::uint64_t seed) {
  if (r > std::min(n1, n2))
    throw Error(ErrorCode::DimensionOverflow, "rank " + std::to_string(r) + " exceeds min(" +
                                                  std::to_string(n1) + ", " + std::to_string(n2) + ")");
  if (!(variance > 0.0)) throw Error(ErrorCode::InvalidArgument, "factor variance must be positive");
  Rng rng(seed);
  const double sd = std::sqrt(variance);
  LowRankFactors f{Matrix(n1, n2), Matrix(n1, r), Matrix(n2, r)};
  for (double& v : f.J.values()) v = rng.normal(0.0, sd);
  for (double& v : f.K.values()) v = rng.normal(0.0, sd);
  if (r > 0) f.L0 = matmul_nt(f.J, f.K);
  return f;
}

Matrix gen_sparse_errors(std::size_t n1, std::size_t n2, double rho, SignMode mode,
                         const Matrix* L0, std::uint64_t seed) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw Error(ErrorCode::InvalidArgument, "rho must lie in [0, 1]");
  if (mode == SignMode::Coherent) {
    if (L0 == nullptr) throw Error(ErrorCode::MissingL0, "coherent signs need the low-rank matrix");
    if (L0->rows() != n1 || L0->cols() != n2)
      throw Error(ErrorCode::ShapeMismatch, "L0 is " + L0->shape_string());
  }
  Rng rng(seed);
  Matrix E(n1, n2);
  const std::vector<std::size_t> support = rng.sample_without_replacement(n1 * n2, exact_count(rho, n1 * n2));
  for (std::size_t idx : support) {
    if (mode == SignMode::RandomSign) {
      E.data()[idx] = (rng.next_u64() >> 63) != 0 ? 1.0 : -1.0;
    } else {
      const double l = L0->data()[idx];
      E.data()[idx] = l > 0.0 ? 1.0 : (l < 0.0 ? -1.0 : 0.0);
    }
  }
  return E;
}

std::pair<Matrix, Matrix> gen_features(const Matrix& L0, std::size_t d, std::uint64_t seed) {
  const std::size_t n1 = L0.rows(), n2 = L0.cols();
  SvdFactors f = svd(L0);
  const std::size_t r = numerical_rank(f.values);
  if (r + d > std::min(n1, n2))
    throw Error(ErrorCode::DimensionOverflow, "rank " + std::to_string(r) + " + padding " +
                                                  std::to_string(d) + " exceeds min dimension " +
                                                  std::to_string(std::min(n1, n2)));
  Matrix M = Matrix::from_eigen(f.left.eigen().leftCols(Eigen::Index(r)));
  Matrix Y = Matrix::from_eigen(f.right.eigen().leftCols(Eigen::Index(r)));
  Rng rng(seed);
  Matrix U = interleave(M, complement(M, n1), d, rng);
  Matrix V = interleave(Y, complement(Y, n2), d, rng);
  return {std::move(U), std::move(V)};
}

Matrix gen_side_info(const Matrix& L0, std::size_t r, std::uint64_t seed,
                     std::optional<double> variance_override) {
  double variance = 0.0;
  if (variance_override) {
    variance = *variance_override;
    if (!(variance >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise variance must be >= 0");
  } else {
    if (r < 1) throw Error(ErrorCode::InvalidArgument, "side-information noise needs rank >= 1");
    variance = kSideNoisePerRank * double(r);
  }
  Matrix S = L0;
  if (variance == 0.0) return S;
  Rng rng(seed);
  const double sd = std::sqrt(variance);
  for (double& v : S.values()) v += rng.normal(0.0, sd);
  return S;
}

Matrix gen_mask(std::size_t n1, std::size_t n2, double missing_fraction, std::uint64_t seed) {
  if (!(missing_fraction >= 0.0 && missing_fraction <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "missing fraction must lie in [0, 1]");
  Rng rng(seed);
  Matrix W(n1, n2, 1.0);
  for (std::size_t idx : rng.sample_without_replacement(n1 * n2, exact_count(missing_fraction, n1 * n2)))
    W.data()[idx] = 0.0;
  return W;
}

SyntheticInstance make_instance(const InstanceSpec& spec) {
  SyntheticInstance inst;
  inst.r = spec.rank;
  inst.rho = spec.rho;
  inst.seed = spec.seed;
  LowRankFactors lr = gen_low_rank(spec.n1, spec.n2, spec.rank, spec.factor_variance,
                                   derive_seed(spec.seed, kLowRank));
  inst.L0 = std::move(lr.L0);
  inst.E0 = gen_sparse_errors(spec.n1, spec.n2, spec.rho, spec.sign, &inst.L0,
                              derive_seed(spec.seed, kErrors));
  inst.X = inst.L0 + inst.E0;
  inst.W = gen_mask(spec.n1, spec.n2, spec.missing, derive_seed(spec.seed, kMask));
  switch (spec.side.kind) {
    case SideNoise::Kind::RankScaled:
      inst.S = gen_side_info(inst.L0, spec.rank, derive_seed(spec.seed, kSide));
      break;
    case SideNoise::Kind::None:
      inst.S = inst.L0;
      break;
    case SideNoise::Kind::Variance:
      inst.S = gen_side_info(inst.L0, spec.rank, derive_seed(spec.seed, kSide), spec.side.variance);
      break;
  }
  if (spec.with_features) {
    auto [U, V] = gen_features(inst.L0, spec.features, derive_seed(spec.seed, kFeatures));
    inst.U = std::move(U);
    inst.V = std::move(V);
  }
  return inst;
}

}  // namespace rpca::synth
