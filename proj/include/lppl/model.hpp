#pragma once

namespace lppl {

// Which side of the critical time a modeled window lies on. Pre-critical
// windows show oscillations accelerating toward t_crit, post-critical
// windows show them decelerating away from it.
enum class Side { PreCritical, PostCritical };

const char* to_string(Side side);

// Log-periodic power law around a critical time t_crit:
//
//   price(t) = p_crit + x^alpha * (a_env + c_cos*cos(w ln x) + d_sin*sin(w ln x))
//
// with x = |t - t_crit| and w = 2*pi / ln(lambda), so the oscillation
// completes exactly one period whenever x grows by a factor lambda.
// (c_cos, d_sin) linearize the amplitude/phase pair: the oscillatory term
// equals B*cos(w ln x - phi) with B = hypot(c_cos, d_sin) and
// phi = atan2(d_sin, c_cos).
struct ModelParams {
  double t_crit = 0.0;  // fractional calendar years
  double alpha = 0.5;   // power-law exponent
  double lambda = 2.0;  // preferred scaling factor, > 1
  double p_crit = 0.0;  // baseline price level at the critical time
  double a_env = 0.0;   // envelope amplitude
  double c_cos = 0.0;   // cosine oscillation coefficient
  double d_sin = 0.0;   // sine oscillation coefficient
  Side side = Side::PreCritical;
};

struct AmplitudePhase {
  double b_osc = 0.0;  // B >= 0
  double phi = 0.0;    // [0, 2*pi)
};

// w = 2*pi / ln(lambda). Throws InvalidArgument unless lambda > 1 and finite.
double angular_log_frequency(double lambda);

// |t - t_crit|.
double distance_to_critical(double t, double t_crit);

// (B, phi) with c_cos*cos(theta) + d_sin*sin(theta) = B*cos(theta - phi).
// (0, 0) maps to B = 0, phi = 0.
AmplitudePhase to_amplitude_phase(const ModelParams& params);

// Oscillatory factor at log-scale coordinate y = ln(x)/ln(lambda):
// a_env + c_cos*cos(2*pi*y) + d_sin*sin(2*pi*y). Periodic with period 1.
double evaluate_pi(double y, const ModelParams& params);

// c_cos*cos(w ln x) + d_sin*sin(w ln x) for x > 0.
double oscillation(const ModelParams& params, double x);

// Full model at clock time t. At x = 0 returns p_crit when alpha > 0 and
// throws SingularAtCritical when alpha <= 0.
double evaluate_model(const ModelParams& params, double t);

}  // namespace lppl
