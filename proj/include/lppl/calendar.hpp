#pragma once

#include <string>
#include <string_view>

namespace lppl {

struct CalendarDate {
  int year = 0;
  int month = 0;  // 1..12
  int day = 0;    // 1..days_in_month

  friend bool operator==(const CalendarDate&, const CalendarDate&) = default;
};

bool is_leap_year(int year);
int days_in_year(int year);
int days_in_month(int year, int month);

// 1-based ordinal day of the year. Throws InvalidDate.
int day_of_year(const CalendarDate& date);

// Maps a calendar date to the continuous fractional-year axis:
// year + (ordinal - 0.5) / days_in_year(year). Each day lands on its
// mid-day anchor, so day-level dates carry ~0.003-year precision.
double date_to_fractional_year(const CalendarDate& date);
double date_to_fractional_year(int year, int month, int day);

// Inverse of date_to_fractional_year, rounding to the nearest day.
CalendarDate fractional_year_to_date(double fractional_year);

// "YYYY-MM-DD" only. Throws InvalidDate.
CalendarDate parse_iso_date(std::string_view text);
std::string format_iso_date(const CalendarDate& date);

}  // namespace lppl
