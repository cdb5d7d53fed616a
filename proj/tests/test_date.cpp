#include <doctest.h>

#include "patnet/date.hpp"

using namespace patnet;

TEST_CASE("iso parse and format round-trip") {
    auto d = Date::parse("2005-01-31");
    REQUIRE(d.has_value());
    CHECK(d->year == 2005);
    CHECK(d->month == 1);
    CHECK(d->day == 31);
    CHECK(d->to_string() == "2005-01-31");

    CHECK_FALSE(Date::parse("2005-13-01").has_value());
    CHECK_FALSE(Date::parse("2005-02-30").has_value());
    CHECK_FALSE(Date::parse("2005/01/31").has_value());
    CHECK_FALSE(Date::parse("05-01-31").has_value());
}

TEST_CASE("day arithmetic") {
    CHECK(days_between(*Date::parse("2005-01-01"), *Date::parse("2005-01-01")) == 0);
    CHECK(days_between(*Date::parse("2005-01-01"), *Date::parse("2005-01-31")) == 30);
    // leap-year span
    CHECK(days_between(*Date::parse("2004-02-28"), *Date::parse("2004-03-01")) == 2);
    CHECK(days_between(*Date::parse("2005-02-28"), *Date::parse("2005-03-01")) == 1);
}

TEST_CASE("from_days inverts to_days") {
    for (const char* s : {"1970-01-01", "2000-02-29", "2018-12-31", "1999-03-01"}) {
        const Date d = *Date::parse(s);
        CHECK(Date::from_days(d.to_days()) == d);
    }
}

TEST_CASE("leap year rules") {
    CHECK(is_leap_year(2004));
    CHECK_FALSE(is_leap_year(1900));
    CHECK(is_leap_year(2000));
    CHECK_FALSE(is_leap_year(2001));
}
