#include "forecastlab/calendar.hpp"

#include <charconv>
#include <cstdio>

namespace forecastlab {

namespace {

bool parse_fixed_uint(std::string_view text, int& out) {
    int value = 0;
    for (char c : text) {
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    out = value;
    return true;
}

}  // namespace

ParsedDate parse_date(std::string_view text) {
    // Exactly YYYY-MM-DD.
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return {};
    int y = 0, m = 0, d = 0;
    if (!parse_fixed_uint(text.substr(0, 4), y) || !parse_fixed_uint(text.substr(5, 2), m) ||
        !parse_fixed_uint(text.substr(8, 2), d)) {
        return {};
    }
    const Date date = std::chrono::year{y} / m / d;
    if (!date.ok()) return {DateParseStatus::Impossible, date};
    return {DateParseStatus::Ok, date};
}

std::string to_string(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

YearMonth YearMonth::of(const Date& d) {
    return {static_cast<int>(d.year()), static_cast<int>(static_cast<unsigned>(d.month()))};
}

std::optional<YearMonth> YearMonth::parse(std::string_view text) {
    if (text.size() != 7 || text[4] != '-') return std::nullopt;
    int y = 0, m = 0;
    if (!parse_fixed_uint(text.substr(0, 4), y) || !parse_fixed_uint(text.substr(5, 2), m)) {
        return std::nullopt;
    }
    if (m < 1 || m > 12) return std::nullopt;
    return YearMonth{y, m};
}

YearMonth YearMonth::plus_months(int n) const {
    const int idx = index() + n;
    int y = idx / 12;
    int rem = idx - y * 12;
    if (rem < 0) {  // floor toward -inf
        rem += 12;
        y -= 1;
    }
    return {y, rem + 1};
}

std::string YearMonth::str() const {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

int months_between(YearMonth from, YearMonth to) {
    return to.index() - from.index();
}

Date last_day_of(YearMonth ym) {
    const auto yml = std::chrono::year{ym.year} / ym.month / std::chrono::last;
    return Date{yml};
}

Date shift_years(const Date& d, int years) {
    const Date shifted = (d.year() - std::chrono::years{years}) / d.month() / d.day();
    if (shifted.ok()) return shifted;
    return Date{shifted.year() / shifted.month() / std::chrono::last};
}

}  // namespace forecastlab
