#include "lppl/report.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "lppl/errors.hpp"
#include "lppl/version.hpp"

namespace lppl {

namespace {

const char* kHexDigits = "0123456789abcdef";

nlohmann::json grid_to_json(const GridSpec& grid) {
  return {{"lo", grid.lo}, {"hi", grid.hi}, {"step", grid.step}};
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &digest_len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::IoError, "sha256 computation failed");
  }
  std::string hex(static_cast<size_t>(digest_len) * 2, '0');
  for (unsigned int i = 0; i < digest_len; ++i) {
    hex[2 * i] = kHexDigits[digest[i] >> 4];
    hex[2 * i + 1] = kHexDigits[digest[i] & 0x0f];
  }
  return hex;
}

std::string utc_timestamp_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm_utc.tm_year + 1900,
                tm_utc.tm_mon + 1, tm_utc.tm_mday, tm_utc.tm_hour, tm_utc.tm_min, tm_utc.tm_sec);
  return buf;
}

nlohmann::json make_manifest(const std::string& command, nlohmann::json config_echo,
                             const std::optional<InputDigest>& input,
                             const std::string& timestamp) {
  nlohmann::json manifest = {
      {"tool", {{"name", kToolName}, {"version", kToolVersion}}},
      {"command", command},
      {"timestamp", timestamp},
      {"config", std::move(config_echo)},
  };
  if (input) {
    manifest["input"] = {{"path", input->path}, {"sha256", input->sha256}};
  }
  return manifest;
}

nlohmann::json params_to_json(const ModelParams& params) {
  const AmplitudePhase osc = to_amplitude_phase(params);
  return {
      {"t_crit", params.t_crit},
      {"alpha", params.alpha},
      {"lambda", params.lambda},
      {"omega", angular_log_frequency(params.lambda)},
      {"p_crit", params.p_crit},
      {"a_env", params.a_env},
      {"c_cos", params.c_cos},
      {"d_sin", params.d_sin},
      {"amplitude", osc.b_osc},
      {"phase", osc.phi},
      {"side", to_string(params.side)},
  };
}

ModelParams params_from_json(const nlohmann::json& j) {
  ModelParams params;
  params.t_crit = j.at("t_crit").get<double>();
  params.alpha = j.at("alpha").get<double>();
  params.lambda = j.at("lambda").get<double>();
  params.p_crit = j.at("p_crit").get<double>();
  params.a_env = j.at("a_env").get<double>();
  params.c_cos = j.at("c_cos").get<double>();
  params.d_sin = j.at("d_sin").get<double>();
  const auto side = j.at("side").get<std::string>();
  if (side == "pre") {
    params.side = Side::PreCritical;
  } else if (side == "post") {
    params.side = Side::PostCritical;
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown side '" + side + "' in report");
  }
  return params;
}

nlohmann::json fit_config_to_json(const FitConfig& config) {
  return {
      {"lambdas", config.lambdas},
      {"side", to_string(config.side)},
      {"tc_grid", grid_to_json(config.tc_grid)},
      {"alpha_grid", grid_to_json(config.alpha_grid)},
      {"refine_rounds", config.refine_rounds},
      {"fit_log_price", config.fit_log_price},
      {"min_points", config.min_points},
  };
}

nlohmann::json fit_report_to_json(const FitResult& result, const FitConfig& config,
                                  const TimeWindow& window) {
  return {
      {"params", params_to_json(result.params)},
      {"fit",
       {{"rmse", result.rmse},
        {"sse", result.sse},
        {"n_points", result.n_points},
        {"degenerate", result.degenerate},
        {"fit_log_price", config.fit_log_price}}},
      {"grid", fit_config_to_json(config)},
      {"window", {{"t_start", window.t_start}, {"t_end", window.t_end}}},
      {"trace_points", result.objective_trace.size()},
  };
}

ParsedFitReport parse_fit_report(const nlohmann::json& j) {
  ParsedFitReport parsed;
  parsed.params = params_from_json(j.at("params"));
  const auto& fit = j.at("fit");
  parsed.rmse = fit.at("rmse").get<double>();
  parsed.sse = fit.at("sse").get<double>();
  parsed.n_points = fit.at("n_points").get<int>();
  parsed.degenerate = fit.at("degenerate").get<bool>();
  parsed.fit_log_price = fit.at("fit_log_price").get<bool>();
  return parsed;
}

nlohmann::json superbubble_report_to_json(const SuperBubbleReport& report) {
  const auto window_json = [](const TimeWindow& w) {
    return nlohmann::json{{"t_start", w.t_start}, {"t_end", w.t_end}};
  };
  return {
      {"is_superbubble", report.is_superbubble},
      {"gap_years", report.gap_years},
      {"thresholds",
       {{"min_gap_years", report.thresholds.min_gap_years},
        {"max_rel_rmse", report.thresholds.max_rel_rmse}}},
      {"long_window", window_json(report.long_window)},
      {"short_window", window_json(report.short_window)},
      {"long_fit",
       {{"params", params_to_json(report.long_fit.params)},
        {"rmse", report.long_fit.rmse},
        {"degenerate", report.long_fit.degenerate}}},
      {"short_fit",
       {{"params", params_to_json(report.short_fit.params)},
        {"rmse", report.short_fit.rmse},
        {"degenerate", report.short_fit.degenerate}}},
  };
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorKind::IoError, "read failure on '" + path + "'");
  }
  return std::move(buffer).str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) {
    throw Error(ErrorKind::IoError, "write failure on '" + path + "'");
  }
}

}  // namespace lppl
