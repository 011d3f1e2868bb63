#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lppl {

struct PricePoint {
  double t = 0.0;      // fractional calendar years
  double price = 0.0;  // currency units, > 0 for observed data
};

// Timestamped prices on the fractional-year axis, strictly increasing in t.
struct PriceSeries {
  std::vector<PricePoint> points;
  std::string label;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  double t_start() const { return points.front().t; }
  double t_end() const { return points.back().t; }
};

struct TimeWindow {
  double t_start = 0.0;
  double t_end = 0.0;
};

// Throws unless the series has >= 1 point, strictly increasing finite
// times, and positive finite prices.
void validate_series(const PriceSeries& series);

double mean_price(const PriceSeries& series);

// Parses `date,price` CSV text (UTF-8, LF or CRLF, rows YYYY-MM-DD,<decimal>).
// Rows may arrive unsorted; output is sorted by date. Blank lines are
// ignored, duplicate dates rejected. Throws MalformedRow / NonPositivePrice /
// DuplicateDate with the 1-based line number, or EmptySeries.
PriceSeries parse_csv(std::string_view text, std::string label = "");

// Emits the same CSV format, mapping each t to the nearest calendar day.
// Throws DuplicateDate if two points land on the same day.
std::string write_csv(const PriceSeries& series);

// Sub-series with t_start <= t <= t_end, order preserved. Throws
// EmptySeries if no points fall inside.
PriceSeries slice_window(const PriceSeries& series, double t_start, double t_end);

}  // namespace lppl
