#include "lppl/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lppl/errors.hpp"

namespace lppl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

const char* to_string(Side side) {
  return side == Side::PreCritical ? "pre" : "post";
}

double angular_log_frequency(double lambda) {
  if (!std::isfinite(lambda) || lambda <= 1.0) {
    throw Error(ErrorKind::InvalidArgument,
                "lambda must be finite and > 1, got " + std::to_string(lambda));
  }
  return kTwoPi / std::log(lambda);
}

double distance_to_critical(double t, double t_crit) { return std::fabs(t - t_crit); }

AmplitudePhase to_amplitude_phase(const ModelParams& params) {
  const double b = std::hypot(params.c_cos, params.d_sin);
  if (b == 0.0) return AmplitudePhase{0.0, 0.0};
  double phi = std::atan2(params.d_sin, params.c_cos);
  if (phi < 0.0) phi += kTwoPi;
  return AmplitudePhase{b, phi};
}

double evaluate_pi(double y, const ModelParams& params) {
  const double theta = kTwoPi * y;
  return params.a_env + params.c_cos * std::cos(theta) + params.d_sin * std::sin(theta);
}

double oscillation(const ModelParams& params, double x) {
  const double theta = angular_log_frequency(params.lambda) * std::log(x);
  return params.c_cos * std::cos(theta) + params.d_sin * std::sin(theta);
}

double evaluate_model(const ModelParams& params, double t) {
  const double omega = angular_log_frequency(params.lambda);
  const double x = distance_to_critical(t, params.t_crit);
  if (x == 0.0) {
    if (params.alpha > 0.0) return params.p_crit;
    throw Error(ErrorKind::SingularAtCritical,
                "x = 0 with alpha <= 0 at t = " + std::to_string(t));
  }
  const double theta = omega * std::log(x);
  const double envelope = std::pow(x, params.alpha);
  return params.p_crit +
         envelope * (params.a_env + params.c_cos * std::cos(theta) + params.d_sin * std::sin(theta));
}

}  // namespace lppl
