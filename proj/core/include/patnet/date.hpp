#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace patnet {

/// Proleptic Gregorian calendar date. Only valid dates are constructible
/// through parse() / make(); default-constructed dates compare less than any
/// real date and should never escape into records.
struct Date {
    std::int16_t year = 0;
    std::uint8_t month = 0;  // 1..12
    std::uint8_t day = 0;    // 1..31

    static std::optional<Date> parse(std::string_view iso);          // "YYYY-MM-DD"
    static std::optional<Date> make(int year, int month, int day);

    std::string to_string() const;

    /// Days since 1970-01-01 (negative before the epoch).
    std::int64_t to_days() const;
    static Date from_days(std::int64_t days);

    auto operator<=>(const Date&) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);

/// Exact calendar-day difference, to - from.
std::int64_t days_between(Date from, Date to);

}  // namespace patnet
