#pragma once

#include "rpca/matrix.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace rpca {

enum class Model { PCP, PCPM, PCPF, PCPSM, PCPSFM, LRR };

std::string_view to_string(Model model) noexcept;
/// Parses "pcp", "PCPSFM", ...; throws InvalidArgument on unknown names.
Model parse_model(std::string_view name);

/// One observation instance of
///   min ||H||_* + alpha ||H - UᵀSV||_* + lambda ||W o E||_1
///   s.t. X = U H Vᵀ + E.
/// Absent features mean identity: U = I (d1 = n1) or V = I (d2 = n2), and the
/// products are skipped rather than formed.
struct Problem {
  Matrix X;
  Matrix W;
  std::optional<Matrix> S;
  std::optional<Matrix> U;  // orthonormal columns
  std::optional<Matrix> V;  // orthonormal columns
  double alpha = 0.0;
  double lambda = 1.0;
  Model model = Model::PCP;

  std::size_t n1() const noexcept { return X.rows(); }
  std::size_t n2() const noexcept { return X.cols(); }
  std::size_t d1() const noexcept { return U ? U->cols() : X.rows(); }
  std::size_t d2() const noexcept { return V ? V->cols() : X.cols(); }

  /// U * h * Vᵀ with identity semantics.
  Matrix lift(const Matrix& h) const;
  /// Uᵀ * a * V with identity semantics.
  Matrix project(const Matrix& a) const;
};

/// Validates shapes, orthonormalizes U and V and derives the model.
///
/// With alpha == 0 side information has no effect on the objective; S is kept
/// (the algebra still runs through it) but the model is classified as if S
/// were absent. A non-zero alpha without S is rejected.
Problem make_problem(Matrix X, Matrix W, std::optional<Matrix> S, std::optional<Matrix> U,
                     std::optional<Matrix> V, double alpha, double lambda);

/// 1 / sqrt(max(n1, n2)).
double default_lambda(std::size_t n1, std::size_t n2);

struct SolverConfig {
  double beta = 1.1;        // continuation ratio, > 1
  double epsilon = 1e-7;    // KKT feasibility tolerance
  double mu_max = 1e7;      // penalty cap
  std::size_t max_iter = 1000;
  double mu0_scale = 1.0;   // mu_0 = mu0_scale / ||X||_2

  void validate() const;
};

/// Live ADMM variables.
struct SolverState {
  Matrix H;  // d1 x d2
  Matrix B;  // d1 x d2
  Matrix E;  // n1 x n2
  Matrix Z;  // n1 x n2 multiplier
  Matrix N;  // d1 x d2 multiplier
  double mu = 0.0;
  std::size_t iter = 0;
  double r_primal = 0.0;
  double r_side = 0.0;

  /// Zero variables shaped for `problem`, mu = mu0.
  static SolverState initial(const Problem& problem, double mu0);
};

/// Closed-form block updates. Each reads the current state and returns the
/// new value of its block without modifying the state.
Matrix update_E(const SolverState& state, const Problem& problem);
Matrix update_H(const SolverState& state, const Problem& problem);
Matrix update_B(const SolverState& state, const Problem& problem);
/// Returns (Z, N) after the dual ascent step.
std::pair<Matrix, Matrix> update_multipliers(const SolverState& state, const Problem& problem);

struct ResidualRecord {
  std::size_t iter = 0;
  double r_primal = 0.0;
  double r_side = 0.0;
  double mu = 0.0;  // penalty used during this iteration
};

struct SolveReport {
  Matrix L;
  Matrix E;
  Matrix H;
  bool converged = false;
  std::size_t iterations = 0;
  std::vector<ResidualRecord> residual_history;
  Model model = Model::PCP;
  double mu0 = 0.0;

  double final_r_primal() const { return residual_history.empty() ? 0.0 : residual_history.back().r_primal; }
  double final_r_side() const { return residual_history.empty() ? 0.0 : residual_history.back().r_side; }
};

/// Called once per iteration after the multiplier step, before mu grows.
using IterationObserver = std::function<void(const SolverState&)>;

/// Multi-block ADMM with continuation: E, H, B, multipliers, then
/// mu <- min(beta * mu, mu_max), until max(r_primal, r_side) < epsilon or
/// max_iter is reached. Non-convergence is reported, not thrown.
SolveReport solve(const Problem& problem, const SolverConfig& config = {},
                  const IterationObserver& observer = {});

/// The same iteration specialised to alpha == 0 with the B and N blocks
/// eliminated: B equals the previous H and N stays zero, so the H step averages
/// with the previous iterate directly. Covers PCP, PCPM, PCPF and LRR.
/// Throws InvalidArgument if alpha != 0.
SolveReport solve_reduced(const Problem& problem, const SolverConfig& config = {},
                          const IterationObserver& observer = {});

}  // namespace rpca
