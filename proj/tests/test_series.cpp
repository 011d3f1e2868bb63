#include <doctest.h>

#include <cmath>
#include <string>

#include "lppl/calendar.hpp"
#include "lppl/errors.hpp"
#include "lppl/series.hpp"

using namespace lppl;

namespace {

ErrorKind kind_of(const std::string& csv) {
  try {
    parse_csv(csv);
  } catch (const Error& err) {
    return err.kind();
  }
  FAIL("expected a parse error");
  return ErrorKind::InvalidArgument;
}

long line_of(const std::string& csv) {
  try {
    parse_csv(csv);
  } catch (const Error& err) {
    return err.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("parses a simple file") {
  const PriceSeries series = parse_csv("date,price\n2008-07-10,146.0\n2008-07-11,147.5\n");
  REQUIRE(series.size() == 2);
  CHECK(series.points[0].price == 146.0);
  CHECK(series.points[1].price == 147.5);
  CHECK(series.points[0].t == doctest::Approx(date_to_fractional_year(2008, 7, 10)).epsilon(1e-15));
  CHECK(series.points[1].t > series.points[0].t);
}

TEST_CASE("rows arrive unsorted and leave sorted") {
  const PriceSeries series =
      parse_csv("date,price\n2008-07-12,150\n2008-07-10,146\n2008-07-11,147.5\n");
  REQUIRE(series.size() == 3);
  CHECK(series.points[0].price == 146.0);
  CHECK(series.points[1].price == 147.5);
  CHECK(series.points[2].price == 150.0);
}

TEST_CASE("tolerates CRLF, blank lines, and a BOM") {
  const PriceSeries series =
      parse_csv("\xEF\xBB\xBF" "date,price\r\n\r\n2008-07-10,146\r\n\n2008-07-11,147.5\r\n");
  CHECK(series.size() == 2);
}

TEST_CASE("rejects malformed input with the offending line") {
  CHECK(kind_of("date,price\n2008-07-10\n") == ErrorKind::MalformedRow);
  CHECK(line_of("date,price\n2008-07-10\n") == 2);
  CHECK(kind_of("date,price\n2008-07-10,1,2\n") == ErrorKind::MalformedRow);
  CHECK(kind_of("date,price\nnot-a-date,1\n") == ErrorKind::MalformedRow);
  CHECK(kind_of("date,price\n2008-07-10,abc\n") == ErrorKind::MalformedRow);
  CHECK(kind_of("date,price\n2008-07-10,1.5x\n") == ErrorKind::MalformedRow);
  CHECK(kind_of("date,price\n2008-07-10,\n") == ErrorKind::MalformedRow);
  CHECK(kind_of("date,price\n2008-07-10,inf\n") == ErrorKind::MalformedRow);
  CHECK(kind_of("price,date\n2008-07-10,1\n") == ErrorKind::MalformedRow);
  CHECK(line_of("price,date\n2008-07-10,1\n") == 1);

  CHECK(kind_of("date,price\n2008-07-10,0\n") == ErrorKind::NonPositivePrice);
  CHECK(kind_of("date,price\n2008-07-10,-3\n") == ErrorKind::NonPositivePrice);
  CHECK(line_of("date,price\n2008-07-10,1\n2008-07-11,-3\n") == 3);

  CHECK(kind_of("date,price\n2008-07-10,1\n2008-07-10,2\n") == ErrorKind::DuplicateDate);
  CHECK(line_of("date,price\n2008-07-10,1\n2008-07-10,2\n") == 3);

  CHECK(kind_of("date,price\n") == ErrorKind::EmptySeries);
  CHECK(kind_of("") == ErrorKind::EmptySeries);
  CHECK(kind_of("\n\n") == ErrorKind::EmptySeries);
}

TEST_CASE("window slicing keeps inclusive bounds") {
  const PriceSeries series = parse_csv(
      "date,price\n2008-07-10,1\n2008-07-11,2\n2008-07-12,3\n2008-07-13,4\n2008-07-14,5\n");
  const double t11 = date_to_fractional_year(2008, 7, 11);
  const double t13 = date_to_fractional_year(2008, 7, 13);

  const PriceSeries inner = slice_window(series, t11, t13);
  REQUIRE(inner.size() == 3);
  CHECK(inner.points.front().price == 2.0);
  CHECK(inner.points.back().price == 4.0);

  const PriceSeries again = slice_window(inner, t11, t13);
  CHECK(again.size() == inner.size());

  CHECK_THROWS_AS(slice_window(series, 2050.0, 2051.0), Error);
  try {
    slice_window(series, 2050.0, 2051.0);
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::EmptySeries);
  }
  CHECK_THROWS_AS(slice_window(series, t13, t11), Error);
}

TEST_CASE("write and parse round-trip") {
  const PriceSeries original = parse_csv(
      "date,price\n2008-07-10,146.25\n2008-07-11,147.5390625\n2008-07-14,151.0001\n");
  const std::string csv = write_csv(original);
  const PriceSeries reparsed = parse_csv(csv);
  REQUIRE(reparsed.size() == original.size());
  const double half_day = 0.5 / 365.0 + 1e-12;
  for (std::size_t i = 0; i < original.size(); ++i) {
    CHECK(reparsed.points[i].price == original.points[i].price);
    CHECK(std::fabs(reparsed.points[i].t - original.points[i].t) <= half_day);
  }
}

TEST_CASE("series validation") {
  PriceSeries series;
  CHECK_THROWS_AS(validate_series(series), Error);

  series.points = {{2008.0, 10.0}, {2008.0, 11.0}};
  CHECK_THROWS_AS(validate_series(series), Error);

  series.points = {{2008.0, 10.0}, {2008.1, -1.0}};
  CHECK_THROWS_AS(validate_series(series), Error);

  series.points = {{2008.0, 10.0}, {2008.1, 11.0}};
  CHECK_NOTHROW(validate_series(series));
  CHECK(mean_price(series) == doctest::Approx(10.5).epsilon(1e-15));
}
