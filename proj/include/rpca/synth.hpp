#pragma once

#include "rpca/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

namespace rpca::synth {

/// Entry variance of the Gaussian factors J, K in L0 = J Kᵀ.
inline constexpr double kFactorVariance = 5e-3;
/// Side-information noise variance per unit of rank: N(0, 2.5 r 1e-9).
inline constexpr double kSideNoisePerRank = 2.5e-9;
inline constexpr std::size_t kDefaultFeaturePadding = 10;

struct LowRankFactors {
  Matrix L0;  // n1 x n2
  Matrix J;   // n1 x r
  Matrix K;   // n2 x r
};

/// L0 = J Kᵀ with i.i.d. N(0, variance) factor entries.
LowRankFactors gen_low_rank(std::size_t n1, std::size_t n2, std::size_t r, double variance,
                            std::uint64_t seed);

enum class SignMode { RandomSign, Coherent };
std::string_view to_string(SignMode mode) noexcept;
SignMode parse_sign_mode(std::string_view name);

/// Exactly round(rho n1 n2) non-zeros at uniformly random positions, valued
/// +-1 (RandomSign) or sgn(L0) (Coherent, requires L0).
Matrix gen_sparse_errors(std::size_t n1, std::size_t n2, double rho, SignMode mode,
                         const Matrix* L0, std::uint64_t seed);

/// Features whose spans contain the column and row spaces of L0: the
/// singular vectors of L0 randomly interleaved with d orthonormal vectors
/// from the complement. Throws DimensionOverflow when rank(L0) + d exceeds
/// min(n1, n2).
std::pair<Matrix, Matrix> gen_features(const Matrix& L0, std::size_t d, std::uint64_t seed);

/// S = L0 + N(0, 2.5 r 1e-9) per entry, or N(0, variance_override).
Matrix gen_side_info(const Matrix& L0, std::size_t r, std::uint64_t seed,
                     std::optional<double> variance_override = std::nullopt);

/// Binary mask with round(missing_fraction n1 n2) zeros.
Matrix gen_mask(std::size_t n1, std::size_t n2, double missing_fraction, std::uint64_t seed);

/// How the side information of an instance is built.
struct SideNoise {
  enum class Kind { RankScaled, None, Variance } kind = Kind::RankScaled;
  double variance = 0.0;
};

struct InstanceSpec {
  std::size_t n1 = 200;
  std::size_t n2 = 200;
  std::size_t rank = 10;
  double rho = 0.05;
  SignMode sign = SignMode::RandomSign;
  double missing = 0.0;
  SideNoise side{};
  std::size_t features = kDefaultFeaturePadding;
  bool with_features = true;  // false leaves U and V empty
  double factor_variance = kFactorVariance;
  std::uint64_t seed = 0;
};

struct SyntheticInstance {
  Matrix L0, E0, X, W, S, U, V;
  std::size_t r = 0;
  double rho = 0.0;
  std::uint64_t seed = 0;
};

/// Builds every component from independent sub-streams of spec.seed.
SyntheticInstance make_instance(const InstanceSpec& spec);

}  // namespace rpca::synth
