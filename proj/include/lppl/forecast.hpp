#pragma once

#include <limits>
#include <span>
#include <vector>

#include "lppl/fit.hpp"
#include "lppl/model.hpp"
#include "lppl/series.hpp"

namespace lppl {

enum class ExtremaKind { Maxima, Minima };

const char* to_string(ExtremaKind kind);

// Turning points of the oscillation phase (where the cosine term attains
// +1 or -1), accumulating geometrically at t_crit: consecutive same-kind
// distances to t_crit have ratio exactly lambda.
struct ExtremaSequence {
  ExtremaKind kind = ExtremaKind::Maxima;
  std::vector<double> times;  // ascending
  double t_crit = 0.0;
  double lambda = 0.0;
};

struct OscillationExtrema {
  ExtremaSequence maxima;
  ExtremaSequence minima;
};

// All oscillation extrema with t in [t_from, t_to], strictly on that
// window's side of t_crit. The sequence accumulates at t_crit, so at most
// max_count extrema per kind are returned, counted from t_from upward, and
// enumeration stops once times are no longer distinct at double precision.
// Throws ZeroOscillation when the params carry no oscillation, and
// InvalidArgument when the window straddles t_crit.
OscillationExtrema extrema_times(const ModelParams& params, double t_from, double t_to,
                                 std::size_t max_count = 1000);

struct TcEstimate {
  double t_crit = 0.0;
  double consistency_residual = 0.0;  // rms spread of pairwise implied t_crit values
};

// Recovers t_crit from >= 2 consecutive same-kind extrema times. For a
// pre-critical accumulating pair (t1, t2): t_crit = (lambda*t2 - t1) /
// (lambda - 1); post-critical mirrors it. More times average the pairwise
// estimates; the spread above `tolerance` throws InconsistentSpacing.
TcEstimate estimate_tc_from_extrema(std::span<const double> times, double lambda,
                                    Side side = Side::PreCritical,
                                    double tolerance = std::numeric_limits<double>::infinity());

// Samples evaluate_model on the regular grid t_from, t_from + step, ...
// The label marks the series as model output. Model values are not
// required to be positive prices.
PriceSeries extrapolate(const ModelParams& params, double t_from, double t_to, double step);

struct SuperBubbleThresholds {
  double min_gap_years = 0.5;
  double max_rel_rmse = 0.05;  // short-fit rmse over mean short-window price
};

struct SuperBubbleReport {
  FitResult long_fit;
  FitResult short_fit;
  bool is_superbubble = false;
  double gap_years = 0.0;  // t_crit(long) - t_crit(short)
  SuperBubbleThresholds thresholds;
  TimeWindow long_window;
  TimeWindow short_window;
};

// Two-tier windowed refit: fits the long window and a short suffix window,
// both pre-critical. The verdict is true iff the short critical time leads
// the long one by at least min_gap_years, neither fit is degenerate, and
// the short fit's relative rmse stays within max_rel_rmse.
SuperBubbleReport detect_superbubble(const PriceSeries& series, const TimeWindow& long_window,
                                     const TimeWindow& short_window, const FitConfig& long_config,
                                     const FitConfig& short_config,
                                     const SuperBubbleThresholds& thresholds = {});

}  // namespace lppl
