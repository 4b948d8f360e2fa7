#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace forecastlab {

using Date = std::chrono::year_month_day;

enum class DateParseStatus { Ok, Malformed, Impossible };

struct ParsedDate {
    DateParseStatus status = DateParseStatus::Malformed;
    Date date{};
};

/// Strict ISO-8601 `YYYY-MM-DD`. Well-formed but non-existent dates
/// (month 13, Feb 30) report Impossible rather than Malformed.
ParsedDate parse_date(std::string_view text);

std::string to_string(const Date& d);

/// Calendar month with gap-free integer arithmetic. month is 1..12.
struct YearMonth {
    int year = 0;
    int month = 1;

    static YearMonth of(const Date& d);
    static std::optional<YearMonth> parse(std::string_view text);  // "YYYY-MM"

    /// Months since 0000-01; adjacent months differ by exactly 1.
    int index() const { return year * 12 + (month - 1); }

    YearMonth plus_months(int n) const;
    std::string str() const;

    auto operator<=>(const YearMonth&) const = default;
};

/// Signed month count `to - from`; 0 when equal.
int months_between(YearMonth from, YearMonth to);

/// Last calendar day of the month.
Date last_day_of(YearMonth ym);

/// Same day `years` earlier; Feb 29 clamps to Feb 28 when the target
/// year is not a leap year.
Date shift_years(const Date& d, int years);

}  // namespace forecastlab
