#include "lppl/synth.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "lppl/errors.hpp"

namespace lppl {

namespace {

constexpr double kTwoPow53 = 9007199254740992.0;  // 2^53

}  // namespace

double GaussianSampler::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so log(u1) stays finite; u2 in [0, 1).
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) / kTwoPow53;
  const double u2 = static_cast<double>(engine_() >> 11) / kTwoPow53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

double ramp_weight(double t, double ramp_start) {
  if (t <= ramp_start) return 0.0;
  if (t >= ramp_start + kRampWidthYears) return 1.0;
  return (t - ramp_start) / kRampWidthYears;
}

PriceSeries generate(const SynthConfig& config) {
  if (!std::isfinite(config.t_from) || !std::isfinite(config.t_to) ||
      config.t_from > config.t_to) {
    throw Error(ErrorKind::InvalidArgument, "generation range requires t_from <= t_to");
  }
  if (!std::isfinite(config.step) || config.step <= 0.0) {
    throw Error(ErrorKind::InvalidArgument, "step must be > 0");
  }
  if (!std::isfinite(config.noise_sigma_rel) || config.noise_sigma_rel < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "noise_sigma_rel must be >= 0");
  }

  const auto count = static_cast<std::size_t>(
                         std::floor((config.t_to - config.t_from) / config.step + 1e-9)) +
                     1;
  std::vector<double> times;
  std::vector<double> clean;
  times.reserve(count);
  clean.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = config.t_from + static_cast<double>(k) * config.step;
    double value = evaluate_model(config.base, t);
    if (config.superbubble) {
      value += ramp_weight(t, config.superbubble->ramp_start) *
               evaluate_model(config.superbubble->params, t);
    }
    if (!(value > 0.0)) {
      throw Error(ErrorKind::NonPositiveGenerated,
                  "clean price " + std::to_string(value) + " at t = " + std::to_string(t));
    }
    times.push_back(t);
    clean.push_back(value);
  }

  double mean = 0.0;
  for (double v : clean) mean += v;
  mean /= static_cast<double>(clean.size());
  const double sigma = config.noise_sigma_rel * mean;

  PriceSeries series;
  series.label = "synthetic";
  series.points.reserve(count);
  GaussianSampler sampler(config.seed);
  for (std::size_t k = 0; k < count; ++k) {
    double price = clean[k];
    if (sigma > 0.0) price += sigma * sampler.next();
    if (!(price > 0.0)) {
      throw Error(ErrorKind::NonPositiveGenerated,
                  "sampled price " + std::to_string(price) + " at t = " + std::to_string(times[k]));
    }
    series.points.push_back(PricePoint{times[k], price});
  }
  return series;
}

}  // namespace lppl
