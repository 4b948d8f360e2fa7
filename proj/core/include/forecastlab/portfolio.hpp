#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "forecastlab/calendar.hpp"
#include "forecastlab/ingest.hpp"

namespace forecastlab {

/// Horizon eligibility of an item, decided by trailing downtime first:
/// 3+ trailing zero months is Inactive; otherwise under 24 months of
/// history cannot be forecast, under 39 can be forecast but not
/// backtested, and 39+ is fully eligible.
enum class Category { Inactive, TooShortToForecast, ForecastOnly, FullyEligible };

std::string_view to_string(Category c);

enum class RankCriterion { Profit, Turnover, Quantity };

std::string_view to_string(RankCriterion c);

struct PortfolioEntry {
    std::string item_code;
    double rank_value = 0.0;
    int rank = 0;                   // 1-based
    double cumulative_share = 0.0;  // running rank_value sum over total
    int horizon_months = 0;
    int downtime_months = 0;
    Category category = Category::Inactive;
};

struct HorizonClass {
    int horizon_months = 0;
    int downtime_months = 0;
    Category category = Category::Inactive;
};

HorizonClass classify_horizon(const MonthlySeries& series, YearMonth dataset_end);

/// Rank every item in `series` by the criterion computed from `records`
/// over the 12 calendar months ending at dataset_end. Ties break by
/// ascending item_code. Profit needs `unit_margins` (per-unit margin
/// sidecar); turnover needs unit_price on every contributing record.
std::vector<PortfolioEntry> rank_products(
    const std::map<std::string, MonthlySeries>& series,
    std::span<const SalesRecord> records,
    RankCriterion criterion,
    YearMonth dataset_end,
    const std::map<std::string, double>* unit_margins = nullptr);

struct CoverageCut {
    double coverage = 0.9;  // in (0, 1]
};
struct TopCount {
    int n = 0;
};
using SelectionMode = std::variant<CoverageCut, TopCount>;

/// Coverage mode: smallest prefix whose cumulative_share reaches the
/// target. TopCount mode: first min(n, size) entries.
std::vector<PortfolioEntry> select_top(std::span<const PortfolioEntry> ranked,
                                       const SelectionMode& mode);

/// Non-zero sales observed in the 12 months ending at dataset_end.
bool is_active(const MonthlySeries& series, YearMonth dataset_end);
int count_active(const std::map<std::string, MonthlySeries>& series, YearMonth dataset_end);

/// CSV: rank,item_code,rank_value,cumulative_share,horizon_months,downtime_months,category
void write_portfolio_csv(std::ostream& out, std::span<const PortfolioEntry> entries);

}  // namespace forecastlab
