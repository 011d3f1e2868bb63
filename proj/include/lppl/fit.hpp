#pragma once

#include <vector>

#include "lppl/model.hpp"
#include "lppl/series.hpp"

namespace lppl {

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
};

// Nested-fit configuration: the four linear coefficients are profiled out
// exactly at every (t_crit, alpha, lambda) grid node, so the nonlinear
// search stays two-dimensional per lambda. A single entry in `lambdas` is
// the fixed-lambda mode; several entries scan a lambda grid.
struct FitConfig {
  std::vector<double> lambdas{2.0};
  Side side = Side::PreCritical;
  GridSpec tc_grid;                       // fractional years, strictly outside the data window
  GridSpec alpha_grid{0.05, 1.5, 0.05};   // bounds must stay within [0.05, 1.5]
  int refine_rounds = 6;                  // local grid shrinking, step halves each round
  bool fit_log_price = false;
  int min_points = 8;
};

struct LinearSolution {
  double p_crit = 0.0;
  double a_env = 0.0;
  double c_cos = 0.0;
  double d_sin = 0.0;
  double sse = 0.0;
};

struct TracePoint {
  double t_crit = 0.0;
  double alpha = 0.0;
  double sse = 0.0;
};

struct FitResult {
  ModelParams params;
  double rmse = 0.0;  // sqrt(sse / n_points), in the fitted target's units
  double sse = 0.0;
  int n_points = 0;
  std::vector<TracePoint> objective_trace;
  bool degenerate = false;  // oscillation indistinguishable from envelope or noise
};

// Least squares over the 4-column basis {1, x^a, x^a cos(w ln x),
// x^a sin(w ln x)} against price (or log-price), solved by a column-pivoted
// Householder QR. All series times must lie strictly on `side` of t_crit.
// Throws RankDeficient when the basis is numerically collinear (condition
// estimate above 1e10), SideViolation, or InsufficientData for < 4 points.
LinearSolution solve_linear(const PriceSeries& series, double t_crit, double alpha, double lambda,
                            Side side, bool fit_log_price = false);

// Exhaustive grid search over (t_crit, alpha, lambda) with solve_linear
// inner solutions, then `refine_rounds` of local refinement around the
// incumbent. Deterministic: ties break toward the t_crit closest to the
// data window, then the smaller alpha, then the smaller lambda.
FitResult fit_lppl(const PriceSeries& series, const FitConfig& config);

struct Residual {
  double t = 0.0;
  double value = 0.0;  // observed - model, in the fitted target's units
};

std::vector<Residual> residuals(const PriceSeries& series, const ModelParams& params,
                                bool fit_log_price = false);

}  // namespace lppl
