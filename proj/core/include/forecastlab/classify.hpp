#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forecastlab/backtest.hpp"
#include "forecastlab/portfolio.hpp"

namespace forecastlab {

/// MAPE class intervals: B1 <= 15 < B2 <= 30 < B3 <= 50 < B4.
enum class MapeBin { B1, B2, B3, B4 };

std::string_view to_string(MapeBin b);

MapeBin bin_by_mape(double mape_percent);

struct ItemClassification {
    std::string item_code;
    double monthly_mape = 0.0;
    double quarterly_mape = 0.0;
    MapeBin monthly_bin = MapeBin::B1;
    MapeBin quarterly_bin = MapeBin::B1;
};

struct ClassificationReport {
    std::array<int, 4> horizon_counts{};  // indexed by Category
    std::array<int, 4> monthly_bin_counts{};
    std::array<int, 4> quarterly_bin_counts{};
    std::vector<ItemClassification> per_item;  // sorted by item_code
};

/// Summarize a selected portfolio: every FullyEligible entry must have
/// exactly one report, and nothing else may have one.
ClassificationReport summarize_portfolio(std::span<const PortfolioEntry> entries,
                                         std::span<const BacktestReport> reports);

void write_classification_json(std::ostream& out, const ClassificationReport& report);

/// Histogram CSVs (`bin,count`) for external plotting.
void write_horizon_histogram_csv(std::ostream& out, const ClassificationReport& report);
void write_mape_histogram_csv(std::ostream& out, const std::array<int, 4>& bin_counts);

}  // namespace forecastlab
