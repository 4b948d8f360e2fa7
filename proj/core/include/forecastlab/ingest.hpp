#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forecastlab/calendar.hpp"

namespace forecastlab {

/// One sales transaction. Negative quantities are returns.
struct SalesRecord {
    std::string item_code;
    Date date{};
    double quantity = 0.0;
    std::optional<double> unit_price;
};

/// Contiguous monthly quantities for one item, zero-filled over months
/// with no transactions. Values are never negative: within-month nets
/// below zero are floored during aggregation.
struct MonthlySeries {
    std::string item_code;
    YearMonth start_month;
    std::vector<double> values;

    YearMonth end_month() const {
        return start_month.plus_months(static_cast<int>(values.size()) - 1);
    }
};

/// Parse transaction CSV with header `item_code,date,quantity,unit_price`
/// (unit_price column optional). Rows are returned in file order.
std::vector<SalesRecord> parse_sales_csv(std::istream& source);

/// Keep records with window_end - max_history_years < date <= window_end,
/// order preserved.
std::vector<SalesRecord> filter_by_date(std::span<const SalesRecord> records,
                                        Date window_end,
                                        int max_history_years);

/// Multiply each record's quantity by its item's multiplier; items absent
/// from the map keep their quantity (multiplier 1).
std::vector<SalesRecord> convert_units(std::span<const SalesRecord> records,
                                       const std::map<std::string, double>& multipliers);

struct AggregateResult {
    std::map<std::string, MonthlySeries> series;
    /// Items with at least one month whose net was negative before flooring.
    std::map<std::string, int> floored_months;

    int total_floored_months() const;
};

/// Sum quantities per item per calendar month, from each item's first
/// transaction month through dataset_end inclusive.
AggregateResult aggregate_monthly(std::span<const SalesRecord> records,
                                  YearMonth dataset_end);

/// Two-column sidecar CSV with header `item_code,<value_column>`.
std::map<std::string, double> parse_sidecar_csv(std::istream& source,
                                                std::string_view value_column);

/// JSON stage-handoff format: object keyed by item_code, each value
/// carrying item_code, start_month ("YYYY-MM") and values.
void write_series_json(std::ostream& out, const std::map<std::string, MonthlySeries>& series);
std::map<std::string, MonthlySeries> read_series_json(std::istream& in);

}  // namespace forecastlab
