#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lppl/calendar.hpp"
#include "lppl/errors.hpp"
#include "lppl/fit.hpp"
#include "lppl/forecast.hpp"
#include "lppl/model.hpp"
#include "lppl/report.hpp"
#include "lppl/series.hpp"
#include "lppl/synth.hpp"

namespace {

using lppl::Error;
using lppl::ErrorKind;

// Usage-class failures exit 1, computation failures exit 2.
int exit_code_for(const Error& err) {
  switch (err.kind()) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidDate:
    case ErrorKind::IoError:
      return 1;
    default:
      return 2;
  }
}

// Accepts YYYY-MM-DD or a plain fractional year.
double parse_time_value(const std::string& text) {
  if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    return lppl::date_to_fractional_year(lppl::parse_iso_date(text));
  }
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw Error(ErrorKind::InvalidArgument,
                "cannot parse time '" + text + "' (expected YYYY-MM-DD or fractional years)");
  }
  return value;
}

lppl::Side parse_side(const std::string& text) {
  if (text == "pre") return lppl::Side::PreCritical;
  if (text == "post") return lppl::Side::PostCritical;
  throw Error(ErrorKind::InvalidArgument, "side must be 'pre' or 'post', got '" + text + "'");
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw Error(ErrorKind::IoError, "number formatting failed");
  }
  return std::string(buf, ptr);
}

struct SharedFitFlags {
  std::string side_text = "pre";
  std::vector<double> lambdas;
  double tc_min = std::numeric_limits<double>::quiet_NaN();
  double tc_max = std::numeric_limits<double>::quiet_NaN();
  double tc_step = 1.0 / 365.0;
  double alpha_min = 0.05;
  double alpha_max = 1.5;
  double alpha_step = 0.05;
  int refine_rounds = 6;
  int min_points = 8;
  bool log_price = false;
};

void add_grid_flags(CLI::App* cmd, SharedFitFlags* flags) {
  cmd->add_option("--lambda", flags->lambdas,
                  "preferred scaling factor(s); repeat the flag to scan several");
  cmd->add_option("--tc-min", flags->tc_min, "critical-time grid lower bound (fractional years)");
  cmd->add_option("--tc-max", flags->tc_max, "critical-time grid upper bound (fractional years)");
  cmd->add_option("--tc-step", flags->tc_step, "critical-time grid step (default 1/365)");
  cmd->add_option("--alpha-min", flags->alpha_min, "exponent grid lower bound");
  cmd->add_option("--alpha-max", flags->alpha_max, "exponent grid upper bound");
  cmd->add_option("--alpha-step", flags->alpha_step, "exponent grid step");
  cmd->add_option("--refine-rounds", flags->refine_rounds, "local refinement rounds (default 6)");
  cmd->add_option("--min-points", flags->min_points, "minimum points in the fitted window");
  cmd->add_flag("--log-price", flags->log_price, "fit log(price) instead of price");
}

// Default critical-time grid hugs the window: one step beyond the data on
// the requested side, reaching out by max(1 yr, 0.75 * window span).
lppl::GridSpec default_tc_grid(const lppl::PriceSeries& series, lppl::Side side, double step) {
  const double span = series.t_end() - series.t_start();
  const double reach = std::max(1.0, 0.75 * span);
  lppl::GridSpec grid;
  grid.step = step;
  if (side == lppl::Side::PreCritical) {
    grid.lo = series.t_end() + step;
    grid.hi = series.t_end() + reach;
  } else {
    grid.lo = series.t_start() - reach;
    grid.hi = series.t_start() - step;
  }
  return grid;
}

lppl::FitConfig build_fit_config(const SharedFitFlags& flags, const lppl::PriceSeries& series) {
  lppl::FitConfig config;
  config.side = parse_side(flags.side_text);
  if (!flags.lambdas.empty()) {
    config.lambdas = flags.lambdas;
  }
  config.alpha_grid = {flags.alpha_min, flags.alpha_max, flags.alpha_step};
  const bool has_min = !std::isnan(flags.tc_min);
  const bool has_max = !std::isnan(flags.tc_max);
  if (has_min != has_max) {
    throw Error(ErrorKind::InvalidArgument, "--tc-min and --tc-max must be given together");
  }
  if (has_min) {
    config.tc_grid = {flags.tc_min, flags.tc_max, flags.tc_step};
  } else {
    config.tc_grid = default_tc_grid(series, config.side, flags.tc_step);
  }
  config.refine_rounds = flags.refine_rounds;
  config.min_points = flags.min_points;
  config.fit_log_price = flags.log_price;
  return config;
}

std::string curve_csv(const lppl::PriceSeries& series, const lppl::ModelParams& params,
                      bool fit_log_price) {
  std::string out = "t,observed,model\n";
  for (const auto& point : series.points) {
    double model = lppl::evaluate_model(params, point.t);
    if (fit_log_price) {
      model = std::exp(model);
    }
    out += format_double(point.t);
    out += ',';
    out += format_double(point.price);
    out += ',';
    out += format_double(model);
    out += '\n';
  }
  return out;
}

nlohmann::json window_json(const lppl::TimeWindow& window) {
  return {{"t_start", window.t_start}, {"t_end", window.t_end}};
}

struct FitArgs {
  std::string input;
  std::string out_prefix;
  std::string window_start;
  std::string window_end;
  SharedFitFlags fit;
};

int run_fit(const FitArgs& args) {
  const std::string csv_text = lppl::read_file(args.input);
  lppl::PriceSeries series = lppl::parse_csv(csv_text, args.input);
  if (!args.window_start.empty() || !args.window_end.empty()) {
    const double lo =
        args.window_start.empty() ? series.t_start() : parse_time_value(args.window_start);
    const double hi = args.window_end.empty() ? series.t_end() : parse_time_value(args.window_end);
    series = lppl::slice_window(series, lo, hi);
  }
  const lppl::FitConfig config = build_fit_config(args.fit, series);
  const lppl::FitResult result = lppl::fit_lppl(series, config);
  const lppl::TimeWindow window{series.t_start(), series.t_end()};

  nlohmann::json config_echo = {
      {"input", args.input},
      {"window", window_json(window)},
      {"fit", lppl::fit_config_to_json(config)},
  };
  const lppl::InputDigest digest{args.input, lppl::sha256_hex(csv_text)};
  const std::string timestamp = lppl::utc_timestamp_now();

  nlohmann::json report = lppl::fit_report_to_json(result, config, window);
  report["manifest"] = lppl::make_manifest("fit", config_echo, digest, timestamp);
  lppl::write_file(args.out_prefix + ".report.json", report.dump(2) + "\n");

  lppl::write_file(args.out_prefix + ".curve.csv",
                   curve_csv(series, result.params, config.fit_log_price));
  nlohmann::json curve_manifest = lppl::make_manifest("fit", config_echo, digest, timestamp);
  lppl::write_file(args.out_prefix + ".curve.manifest.json", curve_manifest.dump(2) + "\n");
  return 0;
}

struct ExtremaArgs {
  std::string fit_report;
  std::string from_text;
  std::string to_text;
  std::string out_path;
  std::size_t max_extrema = 64;
  bool has_params = false;
  double tc = 0.0;
  double alpha = 0.5;
  double lambda = 2.0;
  double p_crit = 0.0;
  double a_env = 0.0;
  double c_cos = 0.0;
  double d_sin = 0.0;
  std::string side_text = "pre";
};

int run_extrema(const ExtremaArgs& args) {
  lppl::ModelParams params;
  if (!args.fit_report.empty()) {
    const auto report = nlohmann::json::parse(lppl::read_file(args.fit_report));
    params = lppl::params_from_json(report.at("params"));
  } else if (args.has_params) {
    params.t_crit = args.tc;
    params.alpha = args.alpha;
    params.lambda = args.lambda;
    params.p_crit = args.p_crit;
    params.a_env = args.a_env;
    params.c_cos = args.c_cos;
    params.d_sin = args.d_sin;
    params.side = parse_side(args.side_text);
  } else {
    throw Error(ErrorKind::InvalidArgument, "give either --fit-report or --tc with coefficients");
  }
  const double t_from = parse_time_value(args.from_text);
  const double t_to = parse_time_value(args.to_text);
  const lppl::OscillationExtrema extrema =
      lppl::extrema_times(params, t_from, t_to, args.max_extrema);

  struct Row {
    const char* kind;
    double t;
  };
  std::vector<Row> rows;
  rows.reserve(extrema.maxima.times.size() + extrema.minima.times.size());
  for (double t : extrema.maxima.times) rows.push_back({"max", t});
  for (double t : extrema.minima.times) rows.push_back({"min", t});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });

  std::string table = "kind,t,x\n";
  for (const Row& row : rows) {
    table += row.kind;
    table += ',';
    table += format_double(row.t);
    table += ',';
    table += format_double(lppl::distance_to_critical(row.t, params.t_crit));
    table += '\n';
  }

  if (args.out_path.empty()) {
    std::fwrite(table.data(), 1, table.size(), stdout);
  } else {
    lppl::write_file(args.out_path, table);
    nlohmann::json config_echo = {
        {"params", lppl::params_to_json(params)},
        {"from", t_from},
        {"to", t_to},
        {"max_extrema", args.max_extrema},
    };
    std::optional<lppl::InputDigest> digest;
    if (!args.fit_report.empty()) {
      digest = lppl::InputDigest{args.fit_report, lppl::sha256_hex(lppl::read_file(args.fit_report))};
    }
    nlohmann::json manifest =
        lppl::make_manifest("extrema", config_echo, digest, lppl::utc_timestamp_now());
    lppl::write_file(args.out_path + ".manifest.json", manifest.dump(2) + "\n");
  }
  return 0;
}

struct SuperBubbleArgs {
  std::string input;
  std::string out_path;
  std::string long_start;
  std::string long_end;
  std::string short_start;
  std::string short_end;
  double min_gap_years = 0.5;
  double max_rel_rmse = 0.05;
  double long_tc_min = std::numeric_limits<double>::quiet_NaN();
  double long_tc_max = std::numeric_limits<double>::quiet_NaN();
  double short_tc_min = std::numeric_limits<double>::quiet_NaN();
  double short_tc_max = std::numeric_limits<double>::quiet_NaN();
  SharedFitFlags fit;
};

int run_superbubble(const SuperBubbleArgs& args) {
  const std::string csv_text = lppl::read_file(args.input);
  const lppl::PriceSeries series = lppl::parse_csv(csv_text, args.input);
  const lppl::TimeWindow long_window{parse_time_value(args.long_start),
                                     parse_time_value(args.long_end)};
  const lppl::TimeWindow short_window{parse_time_value(args.short_start),
                                      parse_time_value(args.short_end)};

  if (args.fit.side_text != "pre") {
    throw Error(ErrorKind::InvalidArgument, "super-bubble detection fits pre-critical windows");
  }
  const auto config_for = [&](const lppl::TimeWindow& window, double tc_min, double tc_max) {
    const lppl::PriceSeries sliced = lppl::slice_window(series, window.t_start, window.t_end);
    SharedFitFlags flags = args.fit;
    flags.tc_min = tc_min;
    flags.tc_max = tc_max;
    return build_fit_config(flags, sliced);
  };
  const lppl::FitConfig long_config = config_for(long_window, args.long_tc_min, args.long_tc_max);
  // The short fit answers "does the suffix point to an earlier critical
  // time than the long fit?", so by default its grid shares the long fit's
  // reach. A grid hugging the one-year window would cap the short t_c just
  // past the data and manufacture a gap on single-bubble inputs.
  const bool short_grid_given = !std::isnan(args.short_tc_min) || !std::isnan(args.short_tc_max);
  const lppl::FitConfig short_config =
      short_grid_given ? config_for(short_window, args.short_tc_min, args.short_tc_max)
                       : config_for(short_window, long_config.tc_grid.lo, long_config.tc_grid.hi);
  const lppl::SuperBubbleThresholds thresholds{args.min_gap_years, args.max_rel_rmse};

  const lppl::SuperBubbleReport verdict = lppl::detect_superbubble(
      series, long_window, short_window, long_config, short_config, thresholds);

  nlohmann::json config_echo = {
      {"input", args.input},
      {"long_window", window_json(long_window)},
      {"short_window", window_json(short_window)},
      {"long_fit", lppl::fit_config_to_json(long_config)},
      {"short_fit", lppl::fit_config_to_json(short_config)},
      {"thresholds",
       {{"min_gap_years", thresholds.min_gap_years}, {"max_rel_rmse", thresholds.max_rel_rmse}}},
  };
  const lppl::InputDigest digest{args.input, lppl::sha256_hex(csv_text)};
  nlohmann::json report = lppl::superbubble_report_to_json(verdict);
  report["manifest"] =
      lppl::make_manifest("superbubble", config_echo, digest, lppl::utc_timestamp_now());

  const std::string text = report.dump(2) + "\n";
  if (args.out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    lppl::write_file(args.out_path, text);
  }
  return 0;
}

struct SynthArgs {
  std::string out_path;
  double t_crit = 2010.75;
  double alpha = 0.6;
  double lambda = 2.0;
  double p_crit = 150.0;
  double a_env = -20.0;
  double c_cos = 2.0;
  double d_sin = 0.0;
  std::string side_text = "pre";
  std::string from_text = "1999.5";
  std::string to_text = "2008.4";
  double step = 1.0 / 365.0;
  double noise_sigma_rel = 0.0;
  std::uint64_t seed = 0;
  // Overlay; enabled iff --sb-ramp-start is given.
  std::string sb_ramp_start;
  double sb_tc = 2008.5;
  double sb_alpha = 0.6;
  double sb_lambda = 2.0;
  double sb_p_crit = 0.0;
  double sb_a_env = 0.0;
  double sb_c_cos = 0.0;
  double sb_d_sin = 0.0;
  std::string sb_side_text = "pre";
};

int run_synth(const SynthArgs& args) {
  lppl::SynthConfig config;
  config.base.t_crit = args.t_crit;
  config.base.alpha = args.alpha;
  config.base.lambda = args.lambda;
  config.base.p_crit = args.p_crit;
  config.base.a_env = args.a_env;
  config.base.c_cos = args.c_cos;
  config.base.d_sin = args.d_sin;
  config.base.side = parse_side(args.side_text);
  config.t_from = parse_time_value(args.from_text);
  config.t_to = parse_time_value(args.to_text);
  config.step = args.step;
  config.noise_sigma_rel = args.noise_sigma_rel;
  config.seed = args.seed;
  if (!args.sb_ramp_start.empty()) {
    lppl::SuperBubbleOverlay overlay;
    overlay.ramp_start = parse_time_value(args.sb_ramp_start);
    overlay.params.t_crit = args.sb_tc;
    overlay.params.alpha = args.sb_alpha;
    overlay.params.lambda = args.sb_lambda;
    overlay.params.p_crit = args.sb_p_crit;
    overlay.params.a_env = args.sb_a_env;
    overlay.params.c_cos = args.sb_c_cos;
    overlay.params.d_sin = args.sb_d_sin;
    overlay.params.side = parse_side(args.sb_side_text);
    config.superbubble = overlay;
  }

  const lppl::PriceSeries series = lppl::generate(config);
  lppl::write_file(args.out_path, lppl::write_csv(series));

  nlohmann::json config_echo = {
      {"base", lppl::params_to_json(config.base)},
      {"noise_sigma_rel", config.noise_sigma_rel},
      {"seed", config.seed},
      {"from", config.t_from},
      {"to", config.t_to},
      {"step", config.step},
  };
  if (config.superbubble) {
    config_echo["superbubble"] = {
        {"params", lppl::params_to_json(config.superbubble->params)},
        {"ramp_start", config.superbubble->ramp_start},
    };
  } else {
    config_echo["superbubble"] = nullptr;
  }
  nlohmann::json manifest =
      lppl::make_manifest("synth", config_echo, std::nullopt, lppl::utc_timestamp_now());
  lppl::write_file(args.out_path + ".manifest.json", manifest.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"log-periodic bubble model toolkit"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit the model to a price CSV");
  fit_cmd->add_option("--input", fit_args.input, "input CSV (date,price)")->required();
  fit_cmd->add_option("--out", fit_args.out_prefix, "output prefix for report and curve files")
      ->required();
  fit_cmd->add_option("--window-start", fit_args.window_start, "fit window start (YYYY-MM-DD)");
  fit_cmd->add_option("--window-end", fit_args.window_end, "fit window end (YYYY-MM-DD)");
  fit_cmd->add_option("--side", fit_args.fit.side_text, "which side of the critical time: pre|post");
  add_grid_flags(fit_cmd, &fit_args.fit);

  ExtremaArgs extrema_args;
  CLI::App* extrema_cmd =
      app.add_subcommand("extrema", "tabulate oscillation extrema of a fitted model");
  CLI::Option* report_opt =
      extrema_cmd->add_option("--fit-report", extrema_args.fit_report, "read params from a fit report");
  CLI::Option* tc_opt = extrema_cmd->add_option("--tc", extrema_args.tc, "critical time");
  extrema_cmd->add_option("--alpha", extrema_args.alpha, "power-law exponent");
  extrema_cmd->add_option("--lambda", extrema_args.lambda, "preferred scaling factor");
  extrema_cmd->add_option("--p-crit", extrema_args.p_crit, "baseline price at the critical time");
  extrema_cmd->add_option("--a-env", extrema_args.a_env, "envelope amplitude");
  extrema_cmd->add_option("--c-cos", extrema_args.c_cos, "cosine coefficient");
  extrema_cmd->add_option("--d-sin", extrema_args.d_sin, "sine coefficient");
  extrema_cmd->add_option("--side", extrema_args.side_text, "pre|post");
  extrema_cmd->add_option("--from", extrema_args.from_text, "range start (date or fractional year)")
      ->required();
  extrema_cmd->add_option("--to", extrema_args.to_text, "range end (date or fractional year)")
      ->required();
  extrema_cmd->add_option("--max-extrema", extrema_args.max_extrema,
                          "cap per extrema kind (default 64)");
  extrema_cmd->add_option("--out", extrema_args.out_path, "output CSV path (default stdout)");
  report_opt->excludes(tc_opt);

  SuperBubbleArgs sb_args;
  CLI::App* sb_cmd =
      app.add_subcommand("superbubble", "two-tier windowed refit and verdict");
  sb_cmd->add_option("--input", sb_args.input, "input CSV (date,price)")->required();
  sb_cmd->add_option("--long-start", sb_args.long_start, "long window start")->required();
  sb_cmd->add_option("--long-end", sb_args.long_end, "long window end")->required();
  sb_cmd->add_option("--short-start", sb_args.short_start, "short window start")->required();
  sb_cmd->add_option("--short-end", sb_args.short_end, "short window end")->required();
  sb_cmd->add_option("--min-gap-years", sb_args.min_gap_years,
                     "minimum lead of the short critical time (default 0.5)");
  sb_cmd->add_option("--max-rel-rmse", sb_args.max_rel_rmse,
                     "maximum short-fit rmse relative to mean price (default 0.05)");
  sb_cmd->add_option("--long-tc-min", sb_args.long_tc_min, "long-fit critical-time grid lower bound");
  sb_cmd->add_option("--long-tc-max", sb_args.long_tc_max, "long-fit critical-time grid upper bound");
  sb_cmd->add_option("--short-tc-min", sb_args.short_tc_min,
                     "short-fit critical-time grid lower bound");
  sb_cmd->add_option("--short-tc-max", sb_args.short_tc_max,
                     "short-fit critical-time grid upper bound");
  sb_cmd->add_option("--side", sb_args.fit.side_text, "must be pre");
  add_grid_flags(sb_cmd, &sb_args.fit);
  sb_cmd->add_option("--out", sb_args.out_path, "report path (default stdout)");

  SynthArgs synth_args;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic price CSV");
  synth_cmd->add_option("--out", synth_args.out_path, "output CSV path")->required();
  synth_cmd->add_option("--t-crit", synth_args.t_crit, "critical time (fractional years)");
  synth_cmd->add_option("--alpha", synth_args.alpha, "power-law exponent");
  synth_cmd->add_option("--lambda", synth_args.lambda, "preferred scaling factor");
  synth_cmd->add_option("--p-crit", synth_args.p_crit, "baseline price at the critical time");
  synth_cmd->add_option("--a-env", synth_args.a_env, "envelope amplitude");
  synth_cmd->add_option("--c-cos", synth_args.c_cos, "cosine coefficient");
  synth_cmd->add_option("--d-sin", synth_args.d_sin, "sine coefficient");
  synth_cmd->add_option("--side", synth_args.side_text, "pre|post");
  synth_cmd->add_option("--from", synth_args.from_text, "range start (date or fractional year)");
  synth_cmd->add_option("--to", synth_args.to_text, "range end (date or fractional year)");
  synth_cmd->add_option("--step", synth_args.step, "sampling step in years (default 1/365)");
  synth_cmd->add_option("--noise-sigma-rel", synth_args.noise_sigma_rel,
                        "noise sigma as a fraction of the mean clean price");
  synth_cmd->add_option("--seed", synth_args.seed, "noise stream seed");
  synth_cmd->add_option("--sb-ramp-start", synth_args.sb_ramp_start,
                        "enable a super-bubble overlay ramping in at this time");
  synth_cmd->add_option("--sb-tc", synth_args.sb_tc, "overlay critical time");
  synth_cmd->add_option("--sb-alpha", synth_args.sb_alpha, "overlay exponent");
  synth_cmd->add_option("--sb-lambda", synth_args.sb_lambda, "overlay scaling factor");
  synth_cmd->add_option("--sb-p-crit", synth_args.sb_p_crit, "overlay baseline");
  synth_cmd->add_option("--sb-a-env", synth_args.sb_a_env, "overlay envelope amplitude");
  synth_cmd->add_option("--sb-c-cos", synth_args.sb_c_cos, "overlay cosine coefficient");
  synth_cmd->add_option("--sb-d-sin", synth_args.sb_d_sin, "overlay sine coefficient");
  synth_cmd->add_option("--sb-side", synth_args.sb_side_text, "overlay side: pre|post");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (fit_cmd->parsed()) {
      return run_fit(fit_args);
    }
    if (extrema_cmd->parsed()) {
      extrema_args.has_params = tc_opt->count() > 0;
      return run_extrema(extrema_args);
    }
    if (sb_cmd->parsed()) {
      return run_superbubble(sb_args);
    }
    if (synth_cmd->parsed()) {
      return run_synth(synth_args);
    }
    std::fprintf(stderr, "error: no command given\n");
    return 1;
  } catch (const Error& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return exit_code_for(err);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  }
}
