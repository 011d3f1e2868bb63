#include <doctest.h>

#include "lppl/calendar.hpp"
#include "lppl/errors.hpp"

using namespace lppl;

namespace {

// Independent ordinal-day oracle built on the civil-days algorithm
// (shifted so March is month 0), no shared code with the library.
long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                       static_cast<unsigned>(d) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

int oracle_day_of_year(int y, int m, int d) {
  return static_cast<int>(days_from_civil(y, m, d) - days_from_civil(y, 1, 1)) + 1;
}

}  // namespace

TEST_CASE("leap-year rule") {
  CHECK(is_leap_year(2008));
  CHECK(is_leap_year(2000));
  CHECK_FALSE(is_leap_year(1900));
  CHECK_FALSE(is_leap_year(2100));
  CHECK_FALSE(is_leap_year(2009));
  CHECK(days_in_year(2008) == 366);
  CHECK(days_in_year(2009) == 365);
  CHECK(days_in_month(2008, 2) == 29);
  CHECK(days_in_month(2009, 2) == 28);
  CHECK(days_in_month(2008, 7) == 31);
}

TEST_CASE("ordinal day matches the civil-days oracle") {
  for (int year : {2007, 2008, 2009, 2100}) {
    for (int month = 1; month <= 12; ++month) {
      for (int day = 1; day <= days_in_month(year, month); ++day) {
        CAPTURE(year);
        CAPTURE(month);
        CAPTURE(day);
        CHECK(day_of_year({year, month, day}) == oracle_day_of_year(year, month, day));
      }
    }
  }
}

TEST_CASE("fractional year anchors each day at its midpoint") {
  // 2008-07-11 is ordinal day 193 of a 366-day year.
  CHECK(oracle_day_of_year(2008, 7, 11) == 193);
  CHECK(date_to_fractional_year(2008, 7, 11) == doctest::Approx(2008.0 + 192.5 / 366.0).epsilon(1e-12));
  CHECK(date_to_fractional_year(2009, 1, 1) == doctest::Approx(2009.0 + 0.5 / 365.0).epsilon(1e-12));
  CHECK(date_to_fractional_year(2008, 12, 31) == doctest::Approx(2008.0 + 365.5 / 366.0).epsilon(1e-12));
}

TEST_CASE("date round-trip is exact over several years") {
  double prev = 0.0;
  bool first = true;
  for (int year = 2007; year <= 2011; ++year) {
    for (int month = 1; month <= 12; ++month) {
      for (int day = 1; day <= days_in_month(year, month); ++day) {
        const CalendarDate date{year, month, day};
        const double frac = date_to_fractional_year(date);
        if (!first) {
          CHECK(frac > prev);
        }
        first = false;
        prev = frac;
        CHECK(fractional_year_to_date(frac) == date);
      }
    }
  }
}

TEST_CASE("fractional year inversion rounds to the nearest day") {
  const CalendarDate date{2008, 7, 11};
  const double frac = date_to_fractional_year(date);
  const double quarter_day = 0.25 / 366.0;
  CHECK(fractional_year_to_date(frac + quarter_day) == date);
  CHECK(fractional_year_to_date(frac - quarter_day) == date);
  // 0.6 of a day past the anchor lands safely inside the next day.
  CHECK(fractional_year_to_date(frac + 2.4 * quarter_day) == CalendarDate{2008, 7, 12});
}

TEST_CASE("iso parsing and formatting") {
  CHECK(parse_iso_date("2008-07-11") == CalendarDate{2008, 7, 11});
  CHECK(parse_iso_date("2008-02-29") == CalendarDate{2008, 2, 29});
  CHECK(format_iso_date({2008, 7, 11}) == "2008-07-11");
  CHECK(format_iso_date(parse_iso_date("1999-01-02")) == "1999-01-02");

  for (const char* bad : {"2009-02-29", "2008-13-01", "2008-00-10", "2008-01-32", "2008/07/11",
                          "08-07-11", "2008-7-11", "garbage", "", "2008-07-11x"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_iso_date(bad), Error);
    try {
      parse_iso_date(bad);
    } catch (const Error& err) {
      CHECK(err.kind() == ErrorKind::InvalidDate);
    }
  }
}

TEST_CASE("year range is bounded") {
  CHECK_THROWS_AS(date_to_fractional_year(1582, 1, 1), Error);
  CHECK_THROWS_AS(date_to_fractional_year(10000, 1, 1), Error);
  CHECK_NOTHROW(date_to_fractional_year(1583, 1, 1));
  CHECK_NOTHROW(date_to_fractional_year(9999, 12, 31));
}
