#include "rpca/solver.hpp"

#include "rpca/error.hpp"
#include "rpca/kernels.hpp"
#include "rpca/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace rpca {

std::string_view to_string(Model model) noexcept {
  switch (model) {
    case Model::PCP: return "PCP";
    case Model::PCPM: return "PCPM";
    case Model::PCPF: return "PCPF";
    case Model::PCPSM: return "PCPSM";
    case Model::PCPSFM: return "PCPSFM";
    case Model::LRR: return "LRR";
  }
  return "?";
}

Model parse_model(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = char(std::toupper(static_cast<unsigned char>(c)));
  for (Model m : {Model::PCP, Model::PCPM, Model::PCPF, Model::PCPSM, Model::PCPSFM, Model::LRR})
    if (upper == to_string(m)) return m;
  throw Error(ErrorCode::InvalidArgument, "unknown model '" + std::string(name) + "'");
}

Matrix Problem::lift(const Matrix& h) const {
  if (U && V) return matmul_nt(matmul(*U, h), *V);
  if (U) return matmul(*U, h);
  if (V) return matmul_nt(h, *V);
  return h;
}

Matrix Problem::project(const Matrix& a) const {
  if (U && V) return matmul(matmul_tn(*U, a), *V);
  if (U) return matmul_tn(*U, a);
  if (V) return matmul(a, *V);
  return a;
}

Problem make_problem(Matrix X, Matrix W, std::optional<Matrix> S, std::optional<Matrix> U,
                     std::optional<Matrix> V, double alpha, double lambda) {
  if (X.empty()) throw Error(ErrorCode::ShapeMismatch, "observation matrix is empty");
  if (!X.all_finite()) throw Error(ErrorCode::InvalidArgument, "observation has non-finite entries");
  require_same_shape(X, W, "mask vs observation");
  for (double w : W.values())
    if (w != 0.0 && w != 1.0) throw Error(ErrorCode::MaskNotBinary, "mask entries must be 0 or 1");
  if (S) require_same_shape(X, *S, "side information vs observation");
  if (U && U->rows() != X.rows())
    throw Error(ErrorCode::ShapeMismatch,
                "U has " + std::to_string(U->rows()) + " rows, observation " + X.shape_string());
  if (V && V->rows() != X.cols())
    throw Error(ErrorCode::ShapeMismatch,
                "V has " + std::to_string(V->rows()) + " rows, observation " + X.shape_string());
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw Error(ErrorCode::InvalidArgument, "alpha must be non-negative");
  if (!S && alpha != 0.0)
    throw Error(ErrorCode::InvalidArgument, "alpha must be 0 without side information");

  Problem p;
  p.X = std::move(X);
  p.W = std::move(W);
  p.S = std::move(S);
  if (U) p.U = orthonormalize(*U);
  if (V) p.V = orthonormalize(*V);
  p.alpha = alpha;
  p.lambda = lambda;

  const bool side = p.S.has_value() && alpha > 0.0;
  const bool features = p.U.has_value() || p.V.has_value();
  const bool masked = std::any_of(p.W.values().begin(), p.W.values().end(),
                                  [](double w) { return w == 0.0; });
  if (side && features) p.model = Model::PCPSFM;
  else if (side) p.model = Model::PCPSM;
  else if (p.U && !p.V) p.model = Model::LRR;
  else if (features) p.model = Model::PCPF;
  else p.model = masked ? Model::PCPM : Model::PCP;
  return p;
}

double default_lambda(std::size_t n1, std::size_t n2) {
  return 1.0 / std::sqrt(double(std::max(n1, n2)));
}

void SolverConfig::validate() const {
  if (!(beta > 1.0)) throw Error(ErrorCode::InvalidArgument, "beta must exceed 1");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (!(mu_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu_max must be positive");
  if (!(mu0_scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "mu0_scale must be positive");
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be at least 1");
}

SolverState SolverState::initial(const Problem& p, double mu0) {
  SolverState s;
  s.H = Matrix(p.d1(), p.d2());
  s.B = Matrix(p.d1(), p.d2());
  s.E = Matrix(p.n1(), p.n2());
  s.Z = Matrix(p.n1(), p.n2());
  s.N = Matrix(p.d1(), p.d2());
  s.mu = mu0;
  return s;
}

namespace {

const kernels::KernelTable& K() { return kernels::active(); }

// UᵀSV, or zero when there is no side information.
Matrix side_projection(const Problem& p) {
  return p.S ? p.project(*p.S) : Matrix(p.d1(), p.d2());
}

Matrix compute_E(const Problem& p, const Matrix& L, const Matrix& Z, double mu) {
  Matrix out(p.n1(), p.n2());
  K().sub_add_scaled(p.X.data(), L.data(), Z.data(), 1.0 / mu, out.data(), out.size());
  K().masked_shrink(out.data(), p.W.data(), p.lambda / mu, out.data(), out.size());
  return out;
}

// H = Uᵀ svt(0.5 (X - E + Z/mu + lift(G)), 1/(2 mu)) V
Matrix compute_H(const Problem& p, const Matrix& E, const Matrix& Z, const Matrix& G, double mu) {
  Matrix P(p.n1(), p.n2());
  K().sub_add_scaled(p.X.data(), E.data(), Z.data(), 1.0 / mu, P.data(), P.size());
  const Matrix lifted = p.lift(G);
  K().average(P.data(), lifted.data(), P.data(), P.size());
  return p.project(svt(P, 0.5 / mu));
}

// G = B + D - N/mu, the feature-space argument of the H step.
Matrix h_argument(const Matrix& B, const Matrix& D, const Matrix& N, double mu) {
  Matrix G(B.rows(), B.cols());
  Matrix negD = -1.0 * D;
  K().sub_add_scaled(B.data(), negD.data(), N.data(), -1.0 / mu, G.data(), G.size());
  return G;
}

Matrix compute_B(const Problem& p, const Matrix& H, const Matrix& D, const Matrix& N, double mu) {
  Matrix Q(H.rows(), H.cols());
  K().sub_add_scaled(H.data(), D.data(), N.data(), 1.0 / mu, Q.data(), Q.size());
  return svt(Q, p.alpha / mu);
}

double initial_mu(const Problem& p, const SolverConfig& config) {
  const double spectral = spectral_norm(p.X);
  if (!(spectral > 0.0)) throw Error(ErrorCode::InvalidArgument, "observation matrix is zero");
  const double mu0 = config.mu0_scale / spectral;
  if (config.mu_max < mu0)
    throw Error(ErrorCode::InvalidArgument, "mu_max is below the initial penalty " + std::to_string(mu0));
  return mu0;
}

}  // namespace

Matrix update_E(const SolverState& s, const Problem& p) {
  return compute_E(p, p.lift(s.H), s.Z, s.mu);
}

Matrix update_H(const SolverState& s, const Problem& p) {
  return compute_H(p, s.E, s.Z, h_argument(s.B, side_projection(p), s.N, s.mu), s.mu);
}

Matrix update_B(const SolverState& s, const Problem& p) {
  return compute_B(p, s.H, side_projection(p), s.N, s.mu);
}

std::pair<Matrix, Matrix> update_multipliers(const SolverState& s, const Problem& p) {
  Matrix Z = s.Z, N = s.N;
  const Matrix L = p.lift(s.H);
  Matrix r(p.n1(), p.n2());
  K().residual3(p.X.data(), s.E.data(), L.data(), r.data(), r.size());
  K().axpy(s.mu, r.data(), Z.data(), Z.size());
  const Matrix D = side_projection(p);
  Matrix rs(p.d1(), p.d2());
  K().residual3(s.H.data(), s.B.data(), D.data(), rs.data(), rs.size());
  K().axpy(s.mu, rs.data(), N.data(), N.size());
  return {std::move(Z), std::move(N)};
}

SolveReport solve(const Problem& p, const SolverConfig& config, const IterationObserver& observer) {
  config.validate();
  SolveReport report;
  report.model = p.model;
  report.mu0 = initial_mu(p, config);

  SolverState s = SolverState::initial(p, report.mu0);
  const Matrix D = side_projection(p);
  const double x_norm = frobenius_norm(p.X);
  Matrix L(p.n1(), p.n2());
  Matrix r(p.n1(), p.n2()), rs(p.d1(), p.d2());

  for (std::size_t it = 1; it <= config.max_iter; ++it) {
    s.iter = it;
    s.E = compute_E(p, L, s.Z, s.mu);
    s.H = compute_H(p, s.E, s.Z, h_argument(s.B, D, s.N, s.mu), s.mu);
    s.B = compute_B(p, s.H, D, s.N, s.mu);

    L = p.lift(s.H);
    const double primal_sq = K().residual3(p.X.data(), s.E.data(), L.data(), r.data(), r.size());
    const double side_sq = K().residual3(s.H.data(), s.B.data(), D.data(), rs.data(), rs.size());
    K().axpy(s.mu, r.data(), s.Z.data(), s.Z.size());
    K().axpy(s.mu, rs.data(), s.N.data(), s.N.size());
    s.r_primal = std::sqrt(primal_sq) / x_norm;
    s.r_side = std::sqrt(side_sq) / x_norm;
    report.residual_history.push_back({it, s.r_primal, s.r_side, s.mu});
    if (observer) observer(s);

    report.iterations = it;
    if (std::max(s.r_primal, s.r_side) < config.epsilon) {
      report.converged = true;
      break;
    }
    s.mu = std::min(config.beta * s.mu, config.mu_max);
  }

  report.L = std::move(L);
  report.E = std::move(s.E);
  report.H = std::move(s.H);
  return report;
}

SolveReport solve_reduced(const Problem& p, const SolverConfig& config,
                          const IterationObserver& observer) {
  if (p.alpha != 0.0)
    throw Error(ErrorCode::InvalidArgument, "reduced path requires alpha == 0");
  config.validate();
  SolveReport report;
  report.model = p.model;
  report.mu0 = initial_mu(p, config);

  SolverState s = SolverState::initial(p, report.mu0);
  const double x_norm = frobenius_norm(p.X);
  Matrix L(p.n1(), p.n2());
  Matrix r(p.n1(), p.n2());

  for (std::size_t it = 1; it <= config.max_iter; ++it) {
    s.iter = it;
    s.E = compute_E(p, L, s.Z, s.mu);
    // The previous H stands in for B + UᵀSV - N/mu.
    s.H = compute_H(p, s.E, s.Z, s.H, s.mu);
    s.B = s.H;

    L = p.lift(s.H);
    const double primal_sq = K().residual3(p.X.data(), s.E.data(), L.data(), r.data(), r.size());
    K().axpy(s.mu, r.data(), s.Z.data(), s.Z.size());
    s.r_primal = std::sqrt(primal_sq) / x_norm;
    s.r_side = 0.0;
    report.residual_history.push_back({it, s.r_primal, s.r_side, s.mu});
    if (observer) observer(s);

    report.iterations = it;
    if (s.r_primal < config.epsilon) {
      report.converged = true;
      break;
    }
    s.mu = std::min(config.beta * s.mu, config.mu_max);
  }

  report.L = std::move(L);
  report.E = std::move(s.E);
  report.H = std::move(s.H);
  return report;
}

}  // namespace rpca
