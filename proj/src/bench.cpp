#include "rpca/bench.hpp"

#include "rpca/error.hpp"
#include "rpca/kernels.hpp"
#include "rpca/numerics.hpp"
#include "rpca/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace rpca::bench {

double rel_error(const Matrix& L, const Matrix& L0) {
  require_same_shape(L, L0, "rel_error");
  const double ref = frobenius_norm(L0);
  if (ref == 0.0) throw Error(ErrorCode::ZeroReference, "reference matrix has zero norm");
  return frobenius_norm(L - L0) / ref;
}

double psnr(const Matrix& a, const Matrix& b, double peak) {
  require_same_shape(a, b, "psnr");
  if (!(peak > 0.0)) throw Error(ErrorCode::InvalidArgument, "peak must be positive");
  if (a.empty()) throw Error(ErrorCode::TooSmall, "psnr of empty matrices");
  const double mse = frobenius_norm(a - b) / std::sqrt(double(a.size()));
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / (mse * mse));
}

namespace {

std::vector<double> gaussian_window(std::size_t size, double sigma) {
  std::vector<double> w(size * size);
  const double c = (double(size) - 1.0) / 2.0;
  double total = 0.0;
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) {
      const double di = double(i) - c, dj = double(j) - c;
      w[i * size + j] = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
      total += w[i * size + j];
    }
  for (double& v : w) v /= total;
  return w;
}

}  // namespace

double ssim(const Matrix& a, const Matrix& b, const SsimParams& p) {
  require_same_shape(a, b, "ssim");
  if (p.window == 0 || a.rows() < p.window || a.cols() < p.window)
    throw Error(ErrorCode::TooSmall, "image " + a.shape_string() + " is smaller than the " +
                                         std::to_string(p.window) + "-pixel window");
  const std::vector<double> w = gaussian_window(p.window, p.sigma);
  const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
  const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
  const std::size_t out_rows = a.rows() - p.window + 1, out_cols = a.cols() - p.window + 1;

  double total = 0.0;
  for (std::size_t r = 0; r < out_rows; ++r) {
    for (std::size_t c = 0; c < out_cols; ++c) {
      double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
      for (std::size_t i = 0; i < p.window; ++i)
        for (std::size_t j = 0; j < p.window; ++j) {
          const double wt = w[i * p.window + j];
          const double x = a(r + i, c + j), y = b(r + i, c + j);
          mx += wt * x;
          my += wt * y;
          sxx += wt * x * x;
          syy += wt * y * y;
          sxy += wt * x * y;
        }
      const double vx = sxx - mx * mx, vy = syy - my * my, cov = sxy - mx * my;
      total += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
  }
  return total / double(out_rows * out_cols);
}

double mean_frame_ssim(const Matrix& a, const Matrix& b, std::size_t height, std::size_t width,
                       const SsimParams& params) {
  require_same_shape(a, b, "mean_frame_ssim");
  if (a.rows() != height * width)
    throw Error(ErrorCode::ShapeMismatch, "frames of " + std::to_string(height) + "x" +
                                              std::to_string(width) + " do not fit " + a.shape_string());
  if (a.cols() == 0) throw Error(ErrorCode::TooSmall, "no frames");
  double total = 0.0;
  Matrix fa(height, width), fb(height, width);
  for (std::size_t f = 0; f < a.cols(); ++f) {
    for (std::size_t k = 0; k < height * width; ++k) {
      fa.data()[k] = a(k, f);
      fb.data()[k] = b(k, f);
    }
    total += ssim(fa, fb, params);
  }
  return total / double(a.cols());
}

void PhaseConfig::validate() const {
  if (ranks.empty()) throw Error(ErrorCode::InvalidArgument, "rank list is empty");
  if (densities.empty()) throw Error(ErrorCode::InvalidArgument, "density list is empty");
  if (methods.empty()) throw Error(ErrorCode::InvalidArgument, "method list is empty");
  if (trials_per_cell < 1) throw Error(ErrorCode::InvalidArgument, "trials per cell must be >= 1");
  if (!(success_threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold must be positive");
  if (!(observed_fraction > 0.0 && observed_fraction <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "observed fraction must lie in (0, 1]");
  if (!std::is_sorted(ranks.begin(), ranks.end()) || !std::is_sorted(densities.begin(), densities.end()))
    throw Error(ErrorCode::InvalidArgument, "ranks and densities must be sorted");
  for (double d : densities)
    if (!(d > 0.0 && d < 1.0)) throw Error(ErrorCode::InvalidArgument, "densities must lie in (0, 1)");
  for (std::size_t r : ranks)
    if (r < 1 || r + feature_padding > std::min(n1, n2))
      throw Error(ErrorCode::InvalidArgument, "rank " + std::to_string(r) + " plus " +
                                                  std::to_string(feature_padding) +
                                                  " feature columns exceeds the matrix size");
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 0");
  solver.validate();
}

PhaseConfig PhaseConfig::desk_default() {
  PhaseConfig c;
  c.ranks = {10, 20, 30, 40, 50, 60};
  c.densities = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
  c.methods = {Model::PCP, Model::PCPSM, Model::PCPF, Model::PCPSFM};
  return c;
}

std::size_t PhaseGrid::success_count(Model m) const {
  std::size_t n = 0;
  for (const auto& row : grids.at(m))
    for (const auto& cell : row) n += cell.success ? 1 : 0;
  return n;
}

bool PhaseGrid::success_subset(Model a, Model b) const {
  const MethodGrid& ga = grids.at(a);
  const MethodGrid& gb = grids.at(b);
  for (std::size_t i = 0; i < ga.size(); ++i)
    for (std::size_t j = 0; j < ga[i].size(); ++j)
      if (ga[i][j].success && !gb[i][j].success) return false;
  return true;
}

namespace {

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string PhaseGrid::to_csv() const {
  std::ostringstream out;
  out << "method,rank,density,trial,rel_error,success\n";
  for (Model m : config.methods) {
    const MethodGrid& g = grids.at(m);
    for (std::size_t i = 0; i < config.ranks.size(); ++i)
      for (std::size_t j = 0; j < config.densities.size(); ++j)
        for (std::size_t t = 0; t < g[i][j].errors.size(); ++t) {
          const double e = g[i][j].errors[t];
          out << to_string(m) << ',' << config.ranks[i] << ',' << format_real(config.densities[j])
              << ',' << t << ',' << format_real(e) << ','
              << (e < config.success_threshold ? 1 : 0) << '\n';
        }
  }
  return out.str();
}

std::string PhaseGrid::to_json() const {
  nlohmann::ordered_json j;
  j["n1"] = config.n1;
  j["n2"] = config.n2;
  j["ranks"] = config.ranks;
  j["densities"] = config.densities;
  j["trials_per_cell"] = config.trials_per_cell;
  j["sign"] = synth::to_string(config.sign_mode);
  j["observed_fraction"] = config.observed_fraction;
  j["success_threshold"] = config.success_threshold;
  j["base_seed"] = config.base_seed;
  j["feature_padding"] = config.feature_padding;
  j["alpha"] = config.alpha;
  j["solver"] = {{"beta", config.solver.beta},
                 {"epsilon", config.solver.epsilon},
                 {"mu_max", config.solver.mu_max},
                 {"max_iter", config.solver.max_iter},
                 {"mu0_scale", config.solver.mu0_scale}};
  nlohmann::ordered_json methods = nlohmann::ordered_json::object();
  for (Model m : config.methods) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : grids.at(m)) {
      std::vector<int> flags;
      for (const auto& cell : row) flags.push_back(cell.success ? 1 : 0);
      rows.push_back(flags);
    }
    methods[std::string(to_string(m))] = {{"success", rows}, {"success_count", success_count(m)}};
  }
  j["methods"] = methods;
  return j.dump(2) + "\n";
}

std::uint64_t cell_seed(std::uint64_t base_seed, std::size_t rank, double density,
                        std::size_t trial) {
  std::uint64_t s = derive_seed(base_seed, rank);
  s = derive_seed(s, std::bit_cast<std::uint64_t>(density));
  return derive_seed(s, trial);
}

Problem problem_for(Model method, const synth::SyntheticInstance& inst, double alpha) {
  const bool side = method == Model::PCPSM || method == Model::PCPSFM;
  const bool features = method == Model::PCPF || method == Model::PCPSFM || method == Model::LRR;
  if (features && inst.U.empty())
    throw Error(ErrorCode::DimensionOverflow, "instance has no features");
  std::optional<Matrix> S, U, V;
  if (side) S = inst.S;
  if (features) U = inst.U;
  if (features && method != Model::LRR) V = inst.V;
  const double lambda = default_lambda(inst.X.rows(), inst.X.cols());
  return make_problem(inst.X, inst.W, std::move(S), std::move(U), std::move(V),
                      side ? alpha : 0.0, lambda);
}

PhaseGrid run_phase(const PhaseConfig& config) {
  config.validate();
  PhaseGrid grid;
  grid.config = config;
  const std::size_t nr = config.ranks.size(), nd = config.densities.size(),
                    nt = config.trials_per_cell, nm = config.methods.size();
  for (Model m : config.methods)
    grid.grids[m] = MethodGrid(nr, std::vector<PhaseCell>(nd, PhaseCell{std::vector<double>(nt), false}));

  struct Slot {
    double error = std::numeric_limits<double>::infinity();
    bool converged = false;
    double r_primal = 0.0, r_side = 0.0;
  };
  const std::size_t jobs = nr * nd * nt;
  std::vector<Slot> slots(jobs * nm);

  auto run_job = [&](std::size_t job) {
    const std::size_t i = job / (nd * nt), j = (job / nt) % nd, t = job % nt;
    synth::InstanceSpec spec;
    spec.n1 = config.n1;
    spec.n2 = config.n2;
    spec.rank = config.ranks[i];
    spec.rho = config.densities[j];
    spec.sign = config.sign_mode;
    spec.missing = 1.0 - config.observed_fraction;
    spec.features = config.feature_padding;
    spec.seed = cell_seed(config.base_seed, config.ranks[i], config.densities[j], t);
    synth::SyntheticInstance inst;
    try {
      inst = synth::make_instance(spec);
    } catch (const Error&) {
      spec.with_features = false;
      inst = synth::make_instance(spec);
    }
    for (std::size_t k = 0; k < nm; ++k) {
      Slot& slot = slots[job * nm + k];
      try {
        const SolveReport rep = solve(problem_for(config.methods[k], inst, config.alpha), config.solver);
        slot.converged = rep.converged;
        slot.r_primal = rep.final_r_primal();
        slot.r_side = rep.final_r_side();
        if (rep.converged) slot.error = rel_error(rep.L, inst.L0);
      } catch (const Error&) {
        // Failed solves stay at +inf.
      }
    }
  };

  std::size_t workers = config.workers != 0 ? config.workers : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, jobs);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t job; (job = next.fetch_add(1)) < jobs;) {
      try {
        run_job(job);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t job = 0; job < jobs; ++job) {
    const std::size_t i = job / (nd * nt), j = (job / nt) % nd, t = job % nt;
    for (std::size_t k = 0; k < nm; ++k) {
      const Slot& slot = slots[job * nm + k];
      grid.grids[config.methods[k]][i][j].errors[t] = slot.error;
      grid.terminations.push_back({config.methods[k], i, j, t, slot.converged, slot.r_primal, slot.r_side});
    }
  }
  for (Model m : config.methods)
    for (auto& row : grid.grids[m])
      for (auto& cell : row)
        cell.success = std::all_of(cell.errors.begin(), cell.errors.end(),
                                   [&](double e) { return e < config.success_threshold; });
  return grid;
}

}  // namespace rpca::bench
