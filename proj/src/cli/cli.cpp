#include "rpca/cli.hpp"

#include "rpca/bench.hpp"
#include "rpca/error.hpp"
#include "rpca/io.hpp"
#include "rpca/ksvd.hpp"
#include "rpca/numerics.hpp"
#include "rpca/rng.hpp"
#include "rpca/solver.hpp"
#include "rpca/synth.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace rpca::cli {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Sub-stream tags under --seed for the denoise workflow.
enum DenoiseStream : std::uint64_t { kDenoiseMask = 11, kDenoiseKsvd = 12 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::BadMagic:
    case ErrorCode::ParseError:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::ShapeOverflow:
    case ErrorCode::DimensionMismatch:
      return kIo;
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::RankDeficient:
    case ErrorCode::DegenerateInput:
    case ErrorCode::ZeroReference:
    case ErrorCode::TooSmall:
      return kNumeric;
    case ErrorCode::InvalidArgument:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::MaskNotBinary:
    case ErrorCode::MissingL0:
    case ErrorCode::DimensionOverflow:
      return kUsage;
  }
  return kNumeric;
}

json real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create directory " + dir.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

Matrix load(const std::string& path, const char* role) {
  try {
    return io::read_matrix(path);
  } catch (const Error& e) {
    throw Error(e.code(), std::string(role) + " (" + path + "): " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::vector<T> parse_numbers(const std::string& text, const char* flag) {
  std::vector<T> out;
  for (const std::string& item : split_list(text)) {
    try {
      std::size_t used = 0;
      if constexpr (std::is_floating_point_v<T>) out.push_back(T(std::stod(item, &used)));
      else out.push_back(T(std::stoull(item, &used)));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

/// Fraction of entries whose magnitude exceeds 1e-6 of the largest |X|.
double support_fraction(const Matrix& E, const Matrix& X) {
  double scale = 0.0;
  for (double v : X.values()) scale = std::max(scale, std::fabs(v));
  const double tol = 1e-6 * std::max(scale, 1.0);
  std::size_t count = 0;
  for (double v : E.values()) count += std::fabs(v) > tol ? 1 : 0;
  return E.empty() ? 0.0 : double(count) / double(E.size());
}

struct SolverFlags {
  double beta = 1.1;
  double eps = 1e-7;
  double mu_max = 1e7;
  std::size_t max_iter = 1000;
  double mu0_scale = 1.0;

  void add(CLI::App& app) {
    app.add_option("--beta", beta, "Continuation ratio (> 1)")->capture_default_str();
    app.add_option("--eps", eps, "KKT feasibility tolerance")->capture_default_str();
    app.add_option("--mu-max", mu_max, "Penalty cap")->capture_default_str();
    app.add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
    app.add_option("--mu0-scale", mu0_scale, "Initial penalty = scale / ||X||_2")->capture_default_str();
  }
  SolverConfig config() const {
    SolverConfig c{beta, eps, mu_max, max_iter, mu0_scale};
    c.validate();
    return c;
  }
};

json solver_parameters(const Problem& p, const SolverConfig& c, double mu0) {
  return {{"alpha", p.alpha},  {"lambda", p.lambda},   {"beta", c.beta},
          {"epsilon", c.epsilon}, {"mu0", mu0},        {"mu0_scale", c.mu0_scale},
          {"mu_max", c.mu_max},   {"max_iter", c.max_iter}};
}

void fill_solve_fields(json& report, const Problem& p, const SolverConfig& c, const SolveReport& r) {
  report["parameters"].update(solver_parameters(p, c, r.mu0));
  report["model"] = std::string(to_string(r.model));
  report["shape"] = {p.n1(), p.n2()};
  report["feature_dims"] = {p.d1(), p.d2()};
  report["converged"] = r.converged;
  report["iterations"] = r.iterations;
  report["final_residuals"] = {{"r_primal", r.final_r_primal()}, {"r_side", r.final_r_side()}};
  report["rank_L"] = numerical_rank(r.L);
  report["sparsity_E"] = support_fraction(r.E, p.X);
  json history = json::array();
  for (const ResidualRecord& h : r.residual_history)
    history.push_back({h.iter, h.r_primal, h.r_side, h.mu});
  report["residual_history"] = std::move(history);
}

json start_report(const std::vector<std::string>& args) {
  json report;
  report["command"] = args;
  report["parameters"] = json::object();
  return report;
}

void finish_report(json& report, std::chrono::steady_clock::time_point start,
                   const std::optional<fs::path>& path, std::ostream& out) {
  report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string text = report.dump(2) + "\n";
  if (path) write_text(*path, text);
  out << text;
}

// ---------------------------------------------------------------- gen

struct GenOptions {
  std::size_t n1 = 200, n2 = 200, rank = 10, features = synth::kDefaultFeaturePadding;
  double density = 0.05, missing = 0.0;
  std::string sign = "random", side_noise = "rank-scaled", out = "gen_out";
  std::uint64_t seed = 0;
};

int cmd_gen(const GenOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (o.n1 < 1 || o.n2 < 1) throw UsageError("--n1 and --n2 must be at least 1");
  if (o.rank > std::min(o.n1, o.n2))
    throw UsageError("--rank " + std::to_string(o.rank) + " violates rank <= min(n1, n2) = " +
                     std::to_string(std::min(o.n1, o.n2)));
  if (o.rank + o.features > std::min(o.n1, o.n2))
    throw UsageError("--rank + --features = " + std::to_string(o.rank + o.features) +
                     " violates rank + features <= min(n1, n2) = " + std::to_string(std::min(o.n1, o.n2)));
  if (!(o.density >= 0.0 && o.density <= 1.0)) throw UsageError("--density must lie in [0, 1]");
  if (!(o.missing >= 0.0 && o.missing <= 1.0)) throw UsageError("--missing must lie in [0, 1]");

  synth::InstanceSpec spec;
  spec.n1 = o.n1;
  spec.n2 = o.n2;
  spec.rank = o.rank;
  spec.rho = o.density;
  spec.sign = synth::parse_sign_mode(o.sign);
  spec.missing = o.missing;
  spec.features = o.features;
  spec.seed = o.seed;
  if (o.side_noise == "rank-scaled") {
    if (o.rank < 1) throw UsageError("--side-noise rank-scaled needs --rank >= 1");
    spec.side.kind = synth::SideNoise::Kind::RankScaled;
  } else if (o.side_noise == "none") {
    spec.side.kind = synth::SideNoise::Kind::None;
  } else {
    spec.side.kind = synth::SideNoise::Kind::Variance;
    spec.side.variance = parse_numbers<double>(o.side_noise, "--side-noise").at(0);
    if (!(spec.side.variance >= 0.0)) throw UsageError("--side-noise variance must be >= 0");
  }

  const synth::SyntheticInstance inst = synth::make_instance(spec);
  const fs::path dir(o.out);
  ensure_dir(dir);
  const std::pair<const char*, const Matrix*> files[] = {
      {"L0", &inst.L0}, {"E0", &inst.E0}, {"X", &inst.X}, {"W", &inst.W},
      {"S", &inst.S},   {"U", &inst.U},   {"V", &inst.V}};
  json manifest = start_report(args);
  manifest["parameters"] = {{"n1", o.n1},
                            {"n2", o.n2},
                            {"rank", o.rank},
                            {"density", o.density},
                            {"sign", o.sign},
                            {"missing", o.missing},
                            {"side_noise", o.side_noise},
                            {"features", o.features},
                            {"factor_variance", spec.factor_variance},
                            {"seed", o.seed}};
  json outputs;
  for (const auto& [name, m] : files) {
    const fs::path path = dir / (std::string(name) + ".bmat");
    io::write_matrix(path, *m);
    outputs[name] = path.string();
  }
  manifest["outputs"] = outputs;
  manifest["nonzeros_E0"] =
      std::count_if(inst.E0.values().begin(), inst.E0.values().end(), [](double v) { return v != 0.0; });
  const std::string text = manifest.dump(2) + "\n";
  write_text(dir / "manifest.json", text);
  (void)start;
  out << text;
  return kOk;
}

// ---------------------------------------------------------------- solve

struct SolveOptions {
  std::string x, mask, side, u, v, truth, out = "solve_out", report;
  std::optional<double> alpha;
  std::string lambda = "auto";
  SolverFlags solver;
};

double resolve_lambda(const std::string& text, std::size_t n1, std::size_t n2) {
  if (text == "auto") return default_lambda(n1, n2);
  return parse_numbers<double>(text, "--lambda").at(0);
}

int cmd_solve(const SolveOptions& o, const std::vector<std::string>& args, std::ostream& out,
              std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Matrix X = load(o.x, "--x");
  Matrix W = o.mask.empty() ? Matrix(X.rows(), X.cols(), 1.0) : load(o.mask, "--mask");
  std::optional<Matrix> S, U, V;
  if (!o.side.empty()) S = load(o.side, "--side");
  if (!o.u.empty()) U = load(o.u, "--u");
  if (!o.v.empty()) V = load(o.v, "--v");
  if (!W.same_shape(X))
    throw Error(ErrorCode::ShapeMismatch, "--mask " + o.mask + " is " + W.shape_string() + " but --x " +
                                              o.x + " is " + X.shape_string());
  if (S && !S->same_shape(X))
    throw Error(ErrorCode::ShapeMismatch, "--side " + o.side + " is " + S->shape_string() + " but --x " +
                                              o.x + " is " + X.shape_string());

  double alpha = o.alpha.value_or(S ? 0.2 : 0.0);
  if (!S && alpha != 0.0) throw UsageError("--alpha needs --side");
  if (S && alpha == 0.0)
    err << "warning: --alpha 0 disables the side information; solving without it\n";

  const double lambda = resolve_lambda(o.lambda, X.rows(), X.cols());
  const SolverConfig config = o.solver.config();
  const Problem problem = make_problem(std::move(X), std::move(W), std::move(S), std::move(U),
                                       std::move(V), alpha, lambda);
  const SolveReport result = solve(problem, config);

  const fs::path dir(o.out);
  ensure_dir(dir);
  io::write_matrix(dir / "L.bmat", result.L);
  io::write_matrix(dir / "E.bmat", result.E);

  json report = start_report(args);
  fill_solve_fields(report, problem, config, result);
  json metrics = json::object();
  if (!o.truth.empty()) metrics["rel_error"] = real(bench::rel_error(result.L, load(o.truth, "--truth")));
  report["metrics"] = metrics;
  report["outputs"] = {{"L", (dir / "L.bmat").string()}, {"E", (dir / "E.bmat").string()}};
  const fs::path report_path = o.report.empty() ? dir / "report.json" : fs::path(o.report);
  report["outputs"]["report"] = report_path.string();
  finish_report(report, start, report_path, out);
  return result.converged ? kOk : kNotConverged;
}

// ---------------------------------------------------------------- phase

struct PhaseOptions {
  std::string ranks = "10,20,30,40,50,60";
  std::string densities = "0.05,0.1,0.15,0.2,0.25,0.3";
  std::string methods = "pcp,pcpsm,pcpf,pcpsfm";
  std::size_t trials = 3, n = 200, features = synth::kDefaultFeaturePadding, workers = 0;
  std::string sign = "random", out = "phase_out";
  double observed = 1.0, alpha = 0.2, threshold = 1e-3;
  std::uint64_t seed = 0;
  SolverFlags solver;
};

int cmd_phase(const PhaseOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  bench::PhaseConfig c;
  c.ranks = parse_numbers<std::size_t>(o.ranks, "--ranks");
  c.densities = parse_numbers<double>(o.densities, "--densities");
  for (const std::string& m : split_list(o.methods)) c.methods.push_back(parse_model(m));
  std::vector<Model> unique = c.methods;
  std::sort(unique.begin(), unique.end());
  if (std::adjacent_find(unique.begin(), unique.end()) != unique.end())
    throw UsageError("--methods lists a method twice");
  c.trials_per_cell = o.trials;
  c.sign_mode = synth::parse_sign_mode(o.sign);
  c.observed_fraction = o.observed;
  c.success_threshold = o.threshold;
  c.base_seed = o.seed;
  c.n1 = c.n2 = o.n;
  c.feature_padding = o.features;
  c.alpha = o.alpha;
  c.solver = o.solver.config();
  c.workers = o.workers;
  c.validate();

  const bench::PhaseGrid grid = bench::run_phase(c);
  const fs::path dir(o.out);
  ensure_dir(dir);
  write_text(dir / "phase.csv", grid.to_csv());
  write_text(dir / "phase.json", grid.to_json());

  json report = start_report(args);
  report["parameters"] = json::parse(grid.to_json());
  report["parameters"].erase("methods");
  json counts;
  for (Model m : c.methods) counts[std::string(to_string(m))] = grid.success_count(m);
  report["success_counts"] = counts;
  report["outputs"] = {{"csv", (dir / "phase.csv").string()}, {"json", (dir / "phase.json").string()}};
  finish_report(report, start, dir / "report.json", out);
  return kOk;
}

// ---------------------------------------------------------------- denoise

struct DenoiseOptions {
  std::string images, truth, side = "mean", features = "none", out = "denoise_out";
  double missing = 0.05, alpha = 0.5;
  std::string lambda = "auto";
  std::size_t atoms = 40, sparsity = 40, ksvd_iters = 10;
  std::uint64_t seed = 0;
  SolverFlags solver;
};

/// Per-pixel mean over the observed frames, repeated in every column.
Matrix tiled_mean(const Matrix& X, const Matrix& W) {
  Matrix S(X.rows(), X.cols());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double sum = 0.0, count = 0.0;
    for (std::size_t j = 0; j < X.cols(); ++j) {
      sum += W(i, j) * X(i, j);
      count += W(i, j);
    }
    const double mean = count > 0.0 ? sum / count : 0.0;
    for (std::size_t j = 0; j < X.cols(); ++j) S(i, j) = mean;
  }
  return S;
}

int cmd_denoise(const DenoiseOptions& o, const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<fs::path> paths = io::expand_glob(o.images);
  if (paths.empty()) throw Error(ErrorCode::IoError, "--images '" + o.images + "' matched no files");
  io::ImageColumnStack stack = io::stack_images(paths);
  const Matrix& X = stack.matrix;
  if (!(o.missing >= 0.0 && o.missing < 1.0)) throw UsageError("--missing must lie in [0, 1)");
  Matrix W = synth::gen_mask(X.rows(), X.cols(), o.missing, derive_seed(o.seed, kDenoiseMask));

  std::optional<Matrix> S;
  if (o.side == "mean") {
    S = tiled_mean(X, W);
  } else if (o.side != "none") {
    if (io::format_for(o.side) == io::MatrixFormat::BMAT && fs::path(o.side).extension() == ".pgm") {
      const io::GrayImage img = io::read_pgm(o.side);
      if (img.width * img.height != X.rows())
        throw Error(ErrorCode::ShapeMismatch, "--side image " + o.side + " is " + std::to_string(img.width) +
                                                  "x" + std::to_string(img.height) + " but frames are " +
                                                  std::to_string(stack.width) + "x" + std::to_string(stack.height));
      S = Matrix(X.rows(), X.cols());
      for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j) (*S)(i, j) = img.pixels.data()[i];
    } else {
      S = load(o.side, "--side");
      if (!S->same_shape(X))
        throw Error(ErrorCode::ShapeMismatch, "--side " + o.side + " is " + S->shape_string() +
                                                  " but the observation matrix is " + X.shape_string());
    }
  }

  std::optional<Matrix> U, V;
  if (o.features == "ksvd") {
    // Unobserved pixels are filled with the per-pixel mean before learning.
    const Matrix mean = tiled_mean(X, W);
    Matrix filled = X;
    for (std::size_t k = 0; k < filled.size(); ++k)
      if (W.data()[k] == 0.0) filled.data()[k] = mean.data()[k];
    auto [u, v] = ksvd::learn_features(filled, o.atoms, o.sparsity, o.ksvd_iters,
                                       derive_seed(o.seed, kDenoiseKsvd));
    U = std::move(u);
    V = std::move(v);
  } else if (o.features != "none") {
    const std::vector<std::string> files = split_list(o.features);
    if (files.size() != 2) throw UsageError("--features expects ksvd, none, or U_FILE,V_FILE");
    U = load(files[0], "--features U");
    V = load(files[1], "--features V");
  }

  const double alpha = S ? o.alpha : 0.0;
  if (S && alpha == 0.0) err << "warning: --alpha 0 disables the side information\n";
  const double lambda = resolve_lambda(o.lambda, X.rows(), X.cols());
  const SolverConfig config = o.solver.config();
  const Problem problem = make_problem(X, W, S, U, V, alpha, lambda);
  const SolveReport result = solve(problem, config);

  const fs::path dir(o.out);
  ensure_dir(dir);
  io::write_matrix(dir / "L.bmat", result.L);
  io::write_matrix(dir / "E.bmat", result.E);
  io::write_matrix(dir / "W.bmat", W);
  io::ImageColumnStack recovered = stack;
  recovered.matrix = result.L;
  io::unstack_to_images(recovered, dir / "recovered");

  json report = start_report(args);
  report["parameters"] = {{"seed", o.seed},
                          {"missing", o.missing},
                          {"side", o.side},
                          {"features", o.features},
                          {"ksvd_atoms", o.atoms},
                          {"ksvd_sparsity", o.sparsity},
                          {"ksvd_iters", o.ksvd_iters}};
  fill_solve_fields(report, problem, config, result);
  report["frames"] = {{"count", stack.frames}, {"width", stack.width}, {"height", stack.height}};
  json metrics;
  metrics["psnr_vs_input"] = real(bench::psnr(result.L, X, 1.0));
  metrics["ssim_vs_input"] = bench::mean_frame_ssim(result.L, X, stack.height, stack.width);
  if (!o.truth.empty()) {
    const std::vector<fs::path> truth_paths = io::expand_glob(o.truth);
    const io::ImageColumnStack truth = io::stack_images(truth_paths);
    if (!truth.matrix.same_shape(X))
      throw Error(ErrorCode::ShapeMismatch, "--truth stack is " + truth.matrix.shape_string() +
                                                " but the observation matrix is " + X.shape_string());
    metrics["psnr_vs_truth"] = real(bench::psnr(result.L, truth.matrix, 1.0));
    metrics["ssim_vs_truth"] = bench::mean_frame_ssim(result.L, truth.matrix, stack.height, stack.width);
  }
  report["metrics"] = metrics;
  report["outputs"] = {{"L", (dir / "L.bmat").string()},
                       {"E", (dir / "E.bmat").string()},
                       {"W", (dir / "W.bmat").string()},
                       {"images", (dir / "recovered").string()}};
  finish_report(report, start, dir / "report.json", out);
  return result.converged ? kOk : kNotConverged;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust PCA with side information and features"};
  app.name("rpca");
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App* g = app.add_subcommand("gen", "Generate a synthetic instance");
  g->add_option("--n1", gen.n1)->capture_default_str();
  g->add_option("--n2", gen.n2)->capture_default_str();
  g->add_option("--rank", gen.rank)->capture_default_str();
  g->add_option("--density", gen.density, "Fraction of corrupted entries")->capture_default_str();
  g->add_option("--sign", gen.sign, "random | coherent")->capture_default_str();
  g->add_option("--missing", gen.missing, "Fraction of unobserved entries")->capture_default_str();
  g->add_option("--side-noise", gen.side_noise, "rank-scaled | none | VARIANCE")->capture_default_str();
  g->add_option("--features", gen.features, "Padding dimensions d of U and V")->capture_default_str();
  g->add_option("--seed", gen.seed)->capture_default_str();
  g->add_option("--out", gen.out)->capture_default_str();

  SolveOptions sol;
  CLI::App* s = app.add_subcommand("solve", "Solve one decomposition problem");
  s->add_option("--x", sol.x, "Observation matrix")->required();
  s->add_option("--mask", sol.mask, "Binary mask, 1 = observed");
  s->add_option("--side", sol.side, "Side information");
  s->add_option("--u", sol.u, "Column features");
  s->add_option("--v", sol.v, "Row features");
  s->add_option("--truth", sol.truth, "Ground-truth low-rank matrix for rel_error");
  s->add_option("--alpha", sol.alpha, "Side-information weight (default 0.2 with --side)");
  s->add_option("--lambda", sol.lambda, "Sparsity weight or 'auto'")->capture_default_str();
  s->add_option("--out", sol.out)->capture_default_str();
  s->add_option("--report", sol.report, "Report path (default OUT/report.json)");
  sol.solver.add(*s);

  PhaseOptions ph;
  CLI::App* p = app.add_subcommand("phase", "Phase-transition sweep over rank and density");
  p->add_option("--ranks", ph.ranks)->capture_default_str();
  p->add_option("--densities", ph.densities)->capture_default_str();
  p->add_option("--methods", ph.methods)->capture_default_str();
  p->add_option("--trials", ph.trials)->capture_default_str();
  p->add_option("--sign", ph.sign)->capture_default_str();
  p->add_option("--observed", ph.observed, "Observed fraction")->capture_default_str();
  p->add_option("--seed", ph.seed)->capture_default_str();
  p->add_option("--n", ph.n, "Matrix size n x n")->capture_default_str();
  p->add_option("--features", ph.features)->capture_default_str();
  p->add_option("--alpha", ph.alpha)->capture_default_str();
  p->add_option("--threshold", ph.threshold)->capture_default_str();
  p->add_option("--workers", ph.workers, "0 = hardware concurrency")->capture_default_str();
  p->add_option("--out", ph.out)->capture_default_str();
  ph.solver.add(*p);

  DenoiseOptions dn;
  CLI::App* d = app.add_subcommand("denoise", "Denoise an image sequence");
  d->add_option("--images", dn.images, "Glob of PGM frames")->required();
  d->add_option("--truth", dn.truth, "Glob of clean PGM frames for metrics");
  d->add_option("--missing", dn.missing)->capture_default_str();
  d->add_option("--side", dn.side, "mean | none | FILE")->capture_default_str();
  d->add_option("--features", dn.features, "ksvd | none | U_FILE,V_FILE")->capture_default_str();
  d->add_option("--ksvd-atoms", dn.atoms)->capture_default_str();
  d->add_option("--ksvd-sparsity", dn.sparsity)->capture_default_str();
  d->add_option("--ksvd-iters", dn.ksvd_iters)->capture_default_str();
  d->add_option("--alpha", dn.alpha)->capture_default_str();
  d->add_option("--lambda", dn.lambda)->capture_default_str();
  d->add_option("--seed", dn.seed)->capture_default_str();
  d->add_option("--out", dn.out)->capture_default_str();
  dn.solver.add(*d);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(gen, args, out);
    if (s->parsed()) return cmd_solve(sol, args, out, err);
    if (p->parsed()) return cmd_phase(ph, args, out);
    if (d->parsed()) return cmd_denoise(dn, args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}

}  // namespace rpca::cli
