#include "lppl/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "lppl/calendar.hpp"
#include "lppl/errors.hpp"

namespace lppl {

namespace {

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

double parse_price_field(std::string_view field, long line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorKind::MalformedRow, "bad price field '" + std::string(field) + "'", line_no);
  }
  return value;
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace

void validate_series(const PriceSeries& series) {
  if (series.points.empty()) {
    throw Error(ErrorKind::EmptySeries, "series has no points");
  }
  double prev_t = -std::numeric_limits<double>::infinity();
  for (const PricePoint& p : series.points) {
    if (!std::isfinite(p.t)) {
      throw Error(ErrorKind::InvalidArgument, "non-finite time in series");
    }
    if (p.t <= prev_t) {
      throw Error(ErrorKind::InvalidArgument, "series times must be strictly increasing");
    }
    if (!std::isfinite(p.price) || p.price <= 0.0) {
      throw Error(ErrorKind::NonPositivePrice,
                  "price must be positive, got " + format_double(p.price));
    }
    prev_t = p.t;
  }
}

double mean_price(const PriceSeries& series) {
  if (series.points.empty()) {
    throw Error(ErrorKind::EmptySeries, "series has no points");
  }
  double sum = 0.0;
  for (const PricePoint& p : series.points) sum += p.price;
  return sum / static_cast<double>(series.points.size());
}

PriceSeries parse_csv(std::string_view text, std::string label) {
  // Tolerate a UTF-8 BOM in front of the header.
  if (text.size() >= 3 && text.substr(0, 3) == "\xef\xbb\xbf") text.remove_prefix(3);

  struct Row {
    double t;
    double price;
    long line_no;
  };
  std::vector<Row> rows;
  std::unordered_set<long> seen_days;  // year * 1000 + ordinal day

  bool header_seen = false;
  long line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    line = strip_cr(line);
    if (is_blank(line)) continue;

    if (!header_seen) {
      if (line != "date,price") {
        throw Error(ErrorKind::MalformedRow, "expected header 'date,price'", line_no);
      }
      header_seen = true;
      continue;
    }

    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos ||
        line.find(',', comma + 1) != std::string_view::npos) {
      throw Error(ErrorKind::MalformedRow, "expected 'YYYY-MM-DD,<decimal>'", line_no);
    }
    CalendarDate date;
    try {
      date = parse_iso_date(line.substr(0, comma));
    } catch (const Error& e) {
      throw Error(ErrorKind::MalformedRow, e.what(), line_no);
    }
    const double price = parse_price_field(line.substr(comma + 1), line_no);
    if (price <= 0.0) {
      throw Error(ErrorKind::NonPositivePrice, "price must be positive, got " + format_double(price),
                  line_no);
    }
    const long day_key = static_cast<long>(date.year) * 1000 + day_of_year(date);
    if (!seen_days.insert(day_key).second) {
      throw Error(ErrorKind::DuplicateDate, "duplicate date " + format_iso_date(date), line_no);
    }
    rows.push_back(Row{date_to_fractional_year(date), price, line_no});
  }

  if (!header_seen || rows.empty()) {
    throw Error(ErrorKind::EmptySeries, "no data rows");
  }

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });

  PriceSeries series;
  series.label = std::move(label);
  series.points.reserve(rows.size());
  for (const Row& r : rows) series.points.push_back(PricePoint{r.t, r.price});
  validate_series(series);
  return series;
}

std::string write_csv(const PriceSeries& series) {
  validate_series(series);
  std::string out = "date,price\n";
  std::unordered_set<long> seen_days;
  long row = 0;
  for (const PricePoint& p : series.points) {
    ++row;
    const CalendarDate date = fractional_year_to_date(p.t);
    const long day_key = static_cast<long>(date.year) * 1000 + day_of_year(date);
    if (!seen_days.insert(day_key).second) {
      throw Error(ErrorKind::DuplicateDate,
                  "two points round to the same day " + format_iso_date(date), row);
    }
    out += format_iso_date(date);
    out += ',';
    out += format_double(p.price);
    out += '\n';
  }
  return out;
}

PriceSeries slice_window(const PriceSeries& series, double t_start, double t_end) {
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || t_start >= t_end) {
    throw Error(ErrorKind::InvalidArgument, "window requires t_start < t_end");
  }
  PriceSeries out;
  out.label = series.label;
  for (const PricePoint& p : series.points) {
    if (p.t >= t_start && p.t <= t_end) out.points.push_back(p);
  }
  if (out.points.empty()) {
    throw Error(ErrorKind::EmptySeries, "no points inside window");
  }
  return out;
}

}  // namespace lppl
