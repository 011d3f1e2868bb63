#include "lppl/fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "lppl/errors.hpp"

namespace lppl {

namespace {

constexpr double kConditionLimit = 1e10;
constexpr std::size_t kMaxGridPoints = 10'000'000;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> grid_values(const GridSpec& grid) {
  const auto count =
      static_cast<std::size_t>(std::floor((grid.hi - grid.lo) / grid.step + 1e-9)) + 1;
  std::vector<double> values;
  values.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    values.push_back(grid.lo + static_cast<double>(k) * grid.step);
  }
  return values;
}

void check_grid(const GridSpec& grid, const char* name) {
  if (!std::isfinite(grid.lo) || !std::isfinite(grid.hi) || grid.lo > grid.hi) {
    throw Error(ErrorKind::InvalidArgument, std::string(name) + " grid requires lo <= hi");
  }
  if (!std::isfinite(grid.step) || grid.step <= 0.0) {
    throw Error(ErrorKind::InvalidArgument, std::string(name) + " grid step must be > 0");
  }
}

struct Candidate {
  double sse = kInf;
  double t_crit = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
  double window_dist = kInf;
  LinearSolution sol{};
  bool valid = false;
};

// Strict "a wins over b": smaller sse, then t_crit closer to the data
// window, then smaller alpha, then smaller lambda. Total over grid points,
// so the parallel reduction is order-independent.
bool beats(const Candidate& a, const Candidate& b) {
  if (!a.valid) return false;
  if (!b.valid) return true;
  if (a.sse != b.sse) return a.sse < b.sse;
  if (a.window_dist != b.window_dist) return a.window_dist < b.window_dist;
  if (a.alpha != b.alpha) return a.alpha < b.alpha;
  return a.lambda < b.lambda;
}

struct Workspace {
  Eigen::MatrixXd basis;     // {1, x^a, x^a cos(w ln x), x^a sin(w ln x)}
  Eigen::VectorXd target;
  Eigen::VectorXd lnx;       // per t_crit
  Eigen::VectorXd osc_cos;   // per (t_crit, lambda)
  Eigen::VectorXd osc_sin;
  Eigen::VectorXd envelope;  // per (t_crit, alpha)
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;

  explicit Workspace(const Eigen::VectorXd& target_in)
      : basis(target_in.size(), 4),
        target(target_in),
        lnx(target_in.size()),
        osc_cos(target_in.size()),
        osc_sin(target_in.size()),
        envelope(target_in.size()) {
    basis.col(0).setOnes();
  }

  // x = |t - t_crit| per point; false when any point fails to lie
  // strictly on `side` of t_crit.
  bool prepare_tc(const std::vector<double>& times, double t_crit, Side side) {
    const auto n = static_cast<Eigen::Index>(times.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = side == Side::PreCritical ? t_crit - times[static_cast<std::size_t>(i)]
                                                 : times[static_cast<std::size_t>(i)] - t_crit;
      if (!(x > 0.0)) return false;
      lnx(i) = std::log(x);
    }
    return true;
  }

  void prepare_lambda(double lambda) {
    const double omega = 2.0 * std::numbers::pi / std::log(lambda);
    osc_cos = (omega * lnx).array().cos();
    osc_sin = (omega * lnx).array().sin();
  }

  void prepare_alpha(double alpha) {
    envelope = (alpha * lnx).array().exp();
    basis.col(1) = envelope;
    basis.col(2) = envelope.cwiseProduct(osc_cos);
    basis.col(3) = envelope.cwiseProduct(osc_sin);
  }

  // Least squares via column-pivoted Householder QR. Returns false when
  // the pivoted R diagonal flags collinearity (condition above 1e10).
  bool solve(LinearSolution& out) {
    qr.compute(basis);
    const auto& packed = qr.matrixQR();
    const double d_max = std::fabs(packed(0, 0));
    const double d_min = std::fabs(packed(3, 3));
    if (!(d_min > 0.0) || d_max > kConditionLimit * d_min) return false;
    const Eigen::Vector4d beta = qr.solve(target);
    out.p_crit = beta(0);
    out.a_env = beta(1);
    out.c_cos = beta(2);
    out.d_sin = beta(3);
    out.sse = (basis * beta - target).squaredNorm();
    return true;
  }
};

Eigen::VectorXd build_target(const PriceSeries& series, bool fit_log_price) {
  Eigen::VectorXd target(static_cast<Eigen::Index>(series.size()));
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    const double price = series.points[static_cast<std::size_t>(i)].price;
    target(i) = fit_log_price ? std::log(price) : price;
  }
  return target;
}

std::vector<double> extract_times(const PriceSeries& series) {
  std::vector<double> times;
  times.reserve(series.size());
  for (const PricePoint& p : series.points) times.push_back(p.t);
  return times;
}

// Contiguous-chunk parallel map; falls back to a serial loop on a single
// hardware thread. Workers must not touch shared mutable state outside
// their own index range.
void parallel_chunks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn) {
  std::size_t threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  threads = std::min(threads, count);
  if (threads <= 1) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        fn(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double window_distance(double t_crit, Side side, double t_first, double t_last) {
  return side == Side::PreCritical ? t_crit - t_last : t_first - t_crit;
}

void validate_config(const FitConfig& config, const PriceSeries& series) {
  if (config.min_points < 8) {
    throw Error(ErrorKind::InvalidArgument, "min_points must be >= 8");
  }
  check_grid(config.tc_grid, "tc");
  check_grid(config.alpha_grid, "alpha");
  if (config.alpha_grid.lo < 0.05 || config.alpha_grid.hi > 1.5) {
    throw Error(ErrorKind::InvalidArgument, "alpha bounds must stay within [0.05, 1.5]");
  }
  if (config.refine_rounds < 0 || config.refine_rounds > 32) {
    throw Error(ErrorKind::InvalidArgument, "refine_rounds must be in [0, 32]");
  }
  if (config.lambdas.empty()) {
    throw Error(ErrorKind::InvalidArgument, "at least one lambda is required");
  }
  for (double lambda : config.lambdas) {
    if (!std::isfinite(lambda) || lambda <= 1.0) {
      throw Error(ErrorKind::InvalidArgument, "lambda values must be finite and > 1");
    }
  }
  if (config.side == Side::PreCritical && config.tc_grid.lo < series.t_end()) {
    throw Error(ErrorKind::InvalidArgument,
                "pre-critical tc grid must start at or after the last data time");
  }
  if (config.side == Side::PostCritical && config.tc_grid.hi > series.t_start()) {
    throw Error(ErrorKind::InvalidArgument,
                "post-critical tc grid must end at or before the first data time");
  }
}

bool fit_degenerate(const ModelParams& params, double rmse) {
  const double b = std::hypot(params.c_cos, params.d_sin);
  if (b == 0.0) return true;
  if (std::fabs(params.a_env) > 0.0 && b / std::fabs(params.a_env) < 1e-3) return true;
  if (rmse > 0.0 && b / rmse < 1.0) return true;
  return false;
}

}  // namespace

LinearSolution solve_linear(const PriceSeries& series, double t_crit, double alpha, double lambda,
                            Side side, bool fit_log_price) {
  validate_series(series);
  if (series.size() < 4) {
    throw Error(ErrorKind::InsufficientData, "solve_linear requires at least 4 points");
  }
  if (!std::isfinite(t_crit) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::InvalidArgument, "t_crit and alpha must be finite");
  }
  angular_log_frequency(lambda);  // validates lambda

  Workspace ws(build_target(series, fit_log_price));
  const std::vector<double> times = extract_times(series);
  if (!ws.prepare_tc(times, t_crit, side)) {
    throw Error(ErrorKind::SideViolation,
                "all series times must lie strictly on the " +
                    std::string(to_string(side)) + "-critical side of t_crit = " +
                    std::to_string(t_crit));
  }
  ws.prepare_lambda(lambda);
  ws.prepare_alpha(alpha);
  LinearSolution solution;
  if (!ws.solve(solution)) {
    throw Error(ErrorKind::RankDeficient,
                "basis columns are numerically collinear at alpha = " + std::to_string(alpha));
  }
  return solution;
}

FitResult fit_lppl(const PriceSeries& series, const FitConfig& config) {
  validate_series(series);
  validate_config(config, series);
  const auto n = series.size();
  if (n < static_cast<std::size_t>(config.min_points)) {
    throw Error(ErrorKind::InsufficientData,
                "series has " + std::to_string(n) + " points, need " +
                    std::to_string(config.min_points));
  }

  const std::vector<double> tc_values = grid_values(config.tc_grid);
  const std::vector<double> alpha_values = grid_values(config.alpha_grid);
  if (tc_values.size() * alpha_values.size() * config.lambdas.size() > kMaxGridPoints) {
    throw Error(ErrorKind::InvalidArgument, "search grid exceeds the supported size");
  }

  const Eigen::VectorXd target = build_target(series, config.fit_log_price);
  const std::vector<double> times = extract_times(series);
  const double t_first = series.t_start();
  const double t_last = series.t_end();

  struct TcSlot {
    Candidate best;
    std::vector<TracePoint> trace;
  };
  std::vector<TcSlot> slots(tc_values.size());

  parallel_chunks(tc_values.size(), [&](std::size_t lo, std::size_t hi) {
    Workspace ws(target);
    for (std::size_t k = lo; k < hi; ++k) {
      TcSlot& slot = slots[k];
      const double tc = tc_values[k];
      if (!ws.prepare_tc(times, tc, config.side)) continue;
      const double dist = window_distance(tc, config.side, t_first, t_last);
      for (double lambda : config.lambdas) {
        ws.prepare_lambda(lambda);
        for (double alpha : alpha_values) {
          ws.prepare_alpha(alpha);
          LinearSolution sol;
          if (!ws.solve(sol)) continue;
          slot.trace.push_back(TracePoint{tc, alpha, sol.sse});
          Candidate cand{sol.sse, tc, alpha, lambda, dist, sol, true};
          if (beats(cand, slot.best)) slot.best = cand;
        }
      }
    }
  });

  FitResult result;
  Candidate incumbent;
  for (const TcSlot& slot : slots) {
    result.objective_trace.insert(result.objective_trace.end(), slot.trace.begin(),
                                  slot.trace.end());
    if (beats(slot.best, incumbent)) incumbent = slot.best;
  }
  if (!incumbent.valid) {
    throw Error(ErrorKind::NoValidGridPoint,
                "every grid point was side-violating or rank-deficient");
  }

  // Local refinement: step halves each round, 5x5 neighborhood centered on
  // the incumbent, clamped to the configured bounds (lambda stays at the
  // incumbent value).
  {
    Workspace ws(target);
    double tc_step = config.tc_grid.step;
    double alpha_step = config.alpha_grid.step;
    for (int round = 0; round < config.refine_rounds; ++round) {
      tc_step *= 0.5;
      alpha_step *= 0.5;
      std::vector<double> tc_cands;
      std::vector<double> alpha_cands;
      for (int j = -2; j <= 2; ++j) {
        tc_cands.push_back(std::clamp(incumbent.t_crit + j * tc_step, config.tc_grid.lo,
                                      config.tc_grid.hi));
        alpha_cands.push_back(std::clamp(incumbent.alpha + j * alpha_step, config.alpha_grid.lo,
                                         config.alpha_grid.hi));
      }
      std::sort(tc_cands.begin(), tc_cands.end());
      tc_cands.erase(std::unique(tc_cands.begin(), tc_cands.end()), tc_cands.end());
      std::sort(alpha_cands.begin(), alpha_cands.end());
      alpha_cands.erase(std::unique(alpha_cands.begin(), alpha_cands.end()), alpha_cands.end());

      for (double tc : tc_cands) {
        if (!ws.prepare_tc(times, tc, config.side)) continue;
        ws.prepare_lambda(incumbent.lambda);
        const double dist = window_distance(tc, config.side, t_first, t_last);
        for (double alpha : alpha_cands) {
          ws.prepare_alpha(alpha);
          LinearSolution sol;
          if (!ws.solve(sol)) continue;
          result.objective_trace.push_back(TracePoint{tc, alpha, sol.sse});
          Candidate cand{sol.sse, tc, alpha, incumbent.lambda, dist, sol, true};
          if (beats(cand, incumbent)) incumbent = cand;
        }
      }
    }
  }

  result.params.t_crit = incumbent.t_crit;
  result.params.alpha = incumbent.alpha;
  result.params.lambda = incumbent.lambda;
  result.params.p_crit = incumbent.sol.p_crit;
  result.params.a_env = incumbent.sol.a_env;
  result.params.c_cos = incumbent.sol.c_cos;
  result.params.d_sin = incumbent.sol.d_sin;
  result.params.side = config.side;
  result.sse = incumbent.sse;
  result.n_points = static_cast<int>(n);
  result.rmse = std::sqrt(incumbent.sse / static_cast<double>(n));
  result.degenerate = fit_degenerate(result.params, result.rmse);
  return result;
}

std::vector<Residual> residuals(const PriceSeries& series, const ModelParams& params,
                                bool fit_log_price) {
  std::vector<Residual> out;
  out.reserve(series.size());
  for (const PricePoint& p : series.points) {
    const double model = evaluate_model(params, p.t);
    double observed = p.price;
    if (fit_log_price) {
      if (!(p.price > 0.0)) {
        throw Error(ErrorKind::NonPositivePrice, "log-price residual requires positive prices");
      }
      observed = std::log(p.price);
    }
    out.push_back(Residual{p.t, observed - model});
  }
  return out;
}

}  // namespace lppl
