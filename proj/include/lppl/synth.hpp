#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "lppl/model.hpp"
#include "lppl/series.hpp"

namespace lppl {

// Ramp window for super-bubble overlays; 30 days on the fractional-year axis.
inline constexpr double kRampWidthYears = 30.0 / 365.0;

// Platform-stable standard Gaussian stream: std::mt19937_64 (the sequence
// is fixed by the standard), uniforms from the top 53 bits, Box-Muller
// pairs with both deviates consumed in order. Frozen test vectors live in
// the unit suite.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  double next();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct SuperBubbleOverlay {
  ModelParams params;
  double ramp_start = 0.0;  // overlay weight is 0 before this time
};

struct SynthConfig {
  ModelParams base;
  std::optional<SuperBubbleOverlay> superbubble;
  double noise_sigma_rel = 0.0;  // sigma as a fraction of the mean clean price
  std::uint64_t seed = 0;
  double t_from = 0.0;
  double t_to = 0.0;
  double step = 0.0;
};

// 0 before ramp_start, then linear to 1 over kRampWidthYears, then 1.
double ramp_weight(double t, double ramp_start);

// price(t) = base(t) + ramp(t) * overlay(t) + Gaussian noise. Throws
// NonPositiveGenerated if any clean or sampled price is <= 0.
PriceSeries generate(const SynthConfig& config);

}  // namespace lppl
