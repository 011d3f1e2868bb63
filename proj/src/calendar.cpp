#include "lppl/calendar.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "lppl/errors.hpp"

namespace lppl {

namespace {

constexpr std::array<int, 12> kMonthDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

// Years outside this band make no sense for price series and would start
// to stress the double-precision day resolution.
constexpr int kMinYear = 1583;
constexpr int kMaxYear = 9999;

void check_date(const CalendarDate& d) {
  if (d.year < kMinYear || d.year > kMaxYear) {
    throw Error(ErrorKind::InvalidDate, "year out of range: " + std::to_string(d.year));
  }
  if (d.month < 1 || d.month > 12) {
    throw Error(ErrorKind::InvalidDate, "month out of range: " + std::to_string(d.month));
  }
  if (d.day < 1 || d.day > days_in_month(d.year, d.month)) {
    throw Error(ErrorKind::InvalidDate, "day out of range: " + format_iso_date(d));
  }
}

bool parse_int_field(std::string_view text, int& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_year(int year) { return is_leap_year(year) ? 366 : 365; }

int days_in_month(int year, int month) {
  if (month < 1 || month > 12) {
    throw Error(ErrorKind::InvalidDate, "month out of range: " + std::to_string(month));
  }
  if (month == 2 && is_leap_year(year)) return 29;
  return kMonthDays[static_cast<std::size_t>(month - 1)];
}

int day_of_year(const CalendarDate& date) {
  check_date(date);
  int ordinal = date.day;
  for (int m = 1; m < date.month; ++m) ordinal += days_in_month(date.year, m);
  return ordinal;
}

double date_to_fractional_year(const CalendarDate& date) {
  const int ordinal = day_of_year(date);
  return static_cast<double>(date.year) +
         (static_cast<double>(ordinal) - 0.5) / static_cast<double>(days_in_year(date.year));
}

double date_to_fractional_year(int year, int month, int day) {
  return date_to_fractional_year(CalendarDate{year, month, day});
}

CalendarDate fractional_year_to_date(double fractional_year) {
  if (!std::isfinite(fractional_year) || fractional_year < kMinYear ||
      fractional_year >= kMaxYear + 1.0) {
    throw Error(ErrorKind::InvalidDate,
                "fractional year out of range: " + std::to_string(fractional_year));
  }
  const int year = static_cast<int>(std::floor(fractional_year));
  const int days = days_in_year(year);
  const double frac = fractional_year - static_cast<double>(year);
  long ordinal = std::lround(frac * static_cast<double>(days) + 0.5);
  if (ordinal < 1) ordinal = 1;
  if (ordinal > days) ordinal = days;

  int month = 1;
  int remaining = static_cast<int>(ordinal);
  while (remaining > days_in_month(year, month)) {
    remaining -= days_in_month(year, month);
    ++month;
  }
  return CalendarDate{year, month, remaining};
}

CalendarDate parse_iso_date(std::string_view text) {
  // YYYY-MM-DD, all digits, fixed width.
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw Error(ErrorKind::InvalidDate, "expected YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  CalendarDate d;
  if (!parse_int_field(text.substr(0, 4), d.year) || !parse_int_field(text.substr(5, 2), d.month) ||
      !parse_int_field(text.substr(8, 2), d.day)) {
    throw Error(ErrorKind::InvalidDate, "expected YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  check_date(d);
  return d;
}

std::string format_iso_date(const CalendarDate& date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", date.year, date.month, date.day);
  return std::string(buf);
}

}  // namespace lppl
