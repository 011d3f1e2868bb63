#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lppl/fit.hpp"
#include "lppl/forecast.hpp"

namespace lppl {

// Hex SHA-256 digest of raw bytes (the documented manifest hash).
std::string sha256_hex(std::string_view bytes);

// ISO-8601 UTC, e.g. "2026-08-19T12:00:00Z".
std::string utc_timestamp_now();

struct InputDigest {
  std::string path;
  std::string sha256;
};

// Every output file embeds or accompanies one of these. The timestamp is
// the only non-deterministic field and never leaks into data outputs.
nlohmann::json make_manifest(const std::string& command, nlohmann::json config_echo,
                             const std::optional<InputDigest>& input,
                             const std::string& timestamp);

nlohmann::json params_to_json(const ModelParams& params);
ModelParams params_from_json(const nlohmann::json& j);

nlohmann::json fit_config_to_json(const FitConfig& config);

// Structured fit report: params in both linearized and amplitude/phase
// form, residual diagnostics, grid bounds, and the fitted window.
nlohmann::json fit_report_to_json(const FitResult& result, const FitConfig& config,
                                  const TimeWindow& window);

struct ParsedFitReport {
  ModelParams params;
  double rmse = 0.0;
  double sse = 0.0;
  int n_points = 0;
  bool degenerate = false;
  bool fit_log_price = false;
};

// Reads back what fit_report_to_json wrote (the tool's own report reader).
ParsedFitReport parse_fit_report(const nlohmann::json& j);

nlohmann::json superbubble_report_to_json(const SuperBubbleReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace lppl
