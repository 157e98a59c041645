#pragma once

#include "rpca/matrix.hpp"
#include "rpca/solver.hpp"
#include "rpca/synth.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rpca::bench {

/// ||L - L0||_F / ||L0||_F. Throws ZeroReference when L0 is zero.
double rel_error(const Matrix& L, const Matrix& L0);

/// 10 log10(peak^2 / MSE) in dB; +infinity when the inputs are identical.
double psnr(const Matrix& a, const Matrix& b, double peak);

struct SsimParams {
  std::size_t window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

/// Mean SSIM over all Gaussian-weighted window positions that fit inside the
/// image (no padding). Throws TooSmall if a dimension is below the window.
double ssim(const Matrix& a, const Matrix& b, const SsimParams& params = {});

/// Average per-frame SSIM of two column stacks whose columns are
/// height x width images scanned row by row.
double mean_frame_ssim(const Matrix& a, const Matrix& b, std::size_t height, std::size_t width,
                       const SsimParams& params = {});

struct PhaseConfig {
  std::vector<std::size_t> ranks;
  std::vector<double> densities;
  std::size_t trials_per_cell = 3;
  synth::SignMode sign_mode = synth::SignMode::RandomSign;
  double observed_fraction = 1.0;
  std::vector<Model> methods;
  double success_threshold = 1e-3;
  std::uint64_t base_seed = 0;
  std::size_t n1 = 200;
  std::size_t n2 = 200;
  std::size_t feature_padding = synth::kDefaultFeaturePadding;
  double alpha = 0.2;
  SolverConfig solver{};
  /// Worker threads; 0 means hardware concurrency.
  std::size_t workers = 0;

  void validate() const;
  /// Ranks 10..60 step 10, densities 0.05..0.30 step 0.05.
  static PhaseConfig desk_default();
};

struct PhaseCell {
  std::vector<double> errors;  // one per trial; +inf marks a failed solve
  bool success = false;
};

/// cells[rank_index][density_index] for one method.
using MethodGrid = std::vector<std::vector<PhaseCell>>;

struct PhaseGrid {
  PhaseConfig config;
  std::map<Model, MethodGrid> grids;
  /// Final KKT residuals of every converged solve, for auditing termination.
  struct Termination {
    Model method;
    std::size_t rank_index, density_index, trial;
    bool converged;
    double r_primal, r_side;
  };
  std::vector<Termination> terminations;

  std::size_t success_count(Model m) const;
  /// True when every successful cell of `a` is also successful in `b`.
  bool success_subset(Model a, Model b) const;

  /// method,rank,density,trial,rel_error,success (success per trial).
  std::string to_csv() const;
  /// Configuration echo plus a success matrix per method.
  std::string to_json() const;
};

/// Seed of the instance shared by all methods at (rank, density, trial).
std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t rank, double density,
                        std::size_t trial);

/// Method-appropriate problem for a synthetic instance: features for
/// PCPF / PCPSFM / LRR (U only), side information for PCPSM / PCPSFM.
Problem problem_for(Model method, const synth::SyntheticInstance& inst, double alpha);

PhaseGrid run_phase(const PhaseConfig& config);

}  // namespace rpca::bench
