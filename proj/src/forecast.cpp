#include "lppl/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lppl/errors.hpp"

namespace lppl {

namespace {

// Below this distance to t_crit, times t_crit -/+ x stop being distinct
// doubles and the enumeration has hit the resolution floor.
double distance_floor(double t_crit) {
  return 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(t_crit));
}

void append_extremum(OscillationExtrema& out, long k, double t, std::size_t max_count) {
  // Even phase index -> cosine +1 (maximum of the oscillatory factor).
  ExtremaSequence& seq = (k % 2 == 0) ? out.maxima : out.minima;
  if (seq.times.size() < max_count) seq.times.push_back(t);
}

bool both_full(const OscillationExtrema& out, std::size_t max_count) {
  return out.maxima.times.size() >= max_count && out.minima.times.size() >= max_count;
}

}  // namespace

const char* to_string(ExtremaKind kind) {
  return kind == ExtremaKind::Maxima ? "max" : "min";
}

OscillationExtrema extrema_times(const ModelParams& params, double t_from, double t_to,
                                 std::size_t max_count) {
  if (!std::isfinite(t_from) || !std::isfinite(t_to) || t_from > t_to) {
    throw Error(ErrorKind::InvalidArgument, "extrema range requires t_from <= t_to");
  }
  const double omega = angular_log_frequency(params.lambda);
  const AmplitudePhase ap = to_amplitude_phase(params);
  if (ap.b_osc == 0.0) {
    throw Error(ErrorKind::ZeroOscillation, "oscillation amplitude B is zero");
  }
  const double tc = params.t_crit;
  const bool pre = t_to <= tc;
  if (!pre && t_from < tc) {
    throw Error(ErrorKind::InvalidArgument, "extrema range must lie on one side of t_crit");
  }

  OscillationExtrema out;
  out.maxima = ExtremaSequence{ExtremaKind::Maxima, {}, tc, params.lambda};
  out.minima = ExtremaSequence{ExtremaKind::Minima, {}, tc, params.lambda};

  // Oscillation is B*cos(omega*ln x - phi); extrema sit at phase k*pi,
  // i.e. x_k = exp((k*pi + phi) / omega).
  const double x_floor = distance_floor(tc);
  const double x_lo = std::max(pre ? tc - t_to : t_from - tc, x_floor);
  const double x_hi = pre ? tc - t_from : t_to - tc;
  if (x_hi < x_lo) return out;  // window collapses inside the resolution floor

  const double slack = 1e-9;
  const long k_min =
      static_cast<long>(std::ceil((omega * std::log(x_lo) - ap.phi) / std::numbers::pi - slack));
  const long k_max =
      static_cast<long>(std::floor((omega * std::log(x_hi) - ap.phi) / std::numbers::pi + slack));

  const double x_accept_lo = x_lo * (1.0 - 1e-12);
  const double x_accept_hi = x_hi * (1.0 + 1e-12);
  if (pre) {
    // Ascending time means descending x, i.e. descending k.
    for (long k = k_max; k >= k_min && !both_full(out, max_count); --k) {
      const double x = std::exp((static_cast<double>(k) * std::numbers::pi + ap.phi) / omega);
      if (x < x_accept_lo || x > x_accept_hi) continue;
      append_extremum(out, k, tc - x, max_count);
    }
  } else {
    for (long k = k_min; k <= k_max && !both_full(out, max_count); ++k) {
      const double x = std::exp((static_cast<double>(k) * std::numbers::pi + ap.phi) / omega);
      if (x < x_accept_lo || x > x_accept_hi) continue;
      append_extremum(out, k, tc + x, max_count);
    }
  }
  return out;
}

TcEstimate estimate_tc_from_extrema(std::span<const double> times, double lambda, Side side,
                                    double tolerance) {
  if (times.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "need at least 2 extrema times");
  }
  angular_log_frequency(lambda);  // validates lambda > 1
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "extrema times must be strictly increasing");
    }
  }

  // Each consecutive pair implies its own t_crit; the least-squares
  // estimate over pairs is their mean.
  std::vector<double> implied;
  implied.reserve(times.size() - 1);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double t1 = times[i];
    const double t2 = times[i + 1];
    implied.push_back(side == Side::PreCritical ? (lambda * t2 - t1) / (lambda - 1.0)
                                                : (lambda * t1 - t2) / (lambda - 1.0));
  }
  double mean = 0.0;
  for (double v : implied) mean += v;
  mean /= static_cast<double>(implied.size());
  double ss = 0.0;
  for (double v : implied) ss += (v - mean) * (v - mean);
  const double residual = std::sqrt(ss / static_cast<double>(implied.size()));

  if (residual > tolerance) {
    throw Error(ErrorKind::InconsistentSpacing,
                "implied t_crit spread " + std::to_string(residual) + " exceeds tolerance " +
                    std::to_string(tolerance));
  }
  return TcEstimate{mean, residual};
}

PriceSeries extrapolate(const ModelParams& params, double t_from, double t_to, double step) {
  if (!std::isfinite(t_from) || !std::isfinite(t_to) || t_from > t_to) {
    throw Error(ErrorKind::InvalidArgument, "extrapolation range requires t_from <= t_to");
  }
  if (!std::isfinite(step) || step <= 0.0) {
    throw Error(ErrorKind::InvalidArgument, "step must be > 0");
  }
  const auto count =
      static_cast<std::size_t>(std::floor((t_to - t_from) / step + 1e-9)) + 1;
  PriceSeries series;
  series.label = "model";
  series.points.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = t_from + static_cast<double>(k) * step;
    series.points.push_back(PricePoint{t, evaluate_model(params, t)});
  }
  return series;
}

SuperBubbleReport detect_superbubble(const PriceSeries& series, const TimeWindow& long_window,
                                     const TimeWindow& short_window, const FitConfig& long_config,
                                     const FitConfig& short_config,
                                     const SuperBubbleThresholds& thresholds) {
  const double end_slack = 1e-9 * std::max(1.0, std::fabs(long_window.t_end));
  if (std::fabs(short_window.t_end - long_window.t_end) > end_slack ||
      short_window.t_start <= long_window.t_start) {
    throw Error(ErrorKind::InvalidArgument,
                "short window must be a proper suffix of the long window");
  }
  if (long_config.side != Side::PreCritical || short_config.side != Side::PreCritical) {
    throw Error(ErrorKind::InvalidArgument, "super-bubble detection requires pre-critical fits");
  }

  SuperBubbleReport report;
  report.thresholds = thresholds;
  report.long_window = long_window;
  report.short_window = short_window;

  const PriceSeries long_series = slice_window(series, long_window.t_start, long_window.t_end);
  const PriceSeries short_series = slice_window(series, short_window.t_start, short_window.t_end);
  report.long_fit = fit_lppl(long_series, long_config);
  report.short_fit = fit_lppl(short_series, short_config);

  report.gap_years = report.long_fit.params.t_crit - report.short_fit.params.t_crit;
  double short_scale = mean_price(short_series);
  if (short_config.fit_log_price) {
    double sum = 0.0;
    for (const PricePoint& p : short_series.points) sum += std::log(p.price);
    short_scale = sum / static_cast<double>(short_series.size());
  }
  const double rel_rmse = report.short_fit.rmse / short_scale;
  report.is_superbubble = report.gap_years >= thresholds.min_gap_years &&
                          !report.long_fit.degenerate && !report.short_fit.degenerate &&
                          rel_rmse <= thresholds.max_rel_rmse;
  return report;
}

}  // namespace lppl
