#include "forecastlab/classify.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <ostream>

#include "forecastlab/errors.hpp"

namespace forecastlab {

std::string_view to_string(MapeBin b) {
    switch (b) {
        case MapeBin::B1: return "B1";
        case MapeBin::B2: return "B2";
        case MapeBin::B3: return "B3";
        case MapeBin::B4: return "B4";
    }
    return "?";
}

MapeBin bin_by_mape(double mape_percent) {
    if (mape_percent < 0.0) {
        raise(Errc::NegativeMape, "MAPE cannot be negative");
    }
    if (mape_percent <= 15.0) return MapeBin::B1;
    if (mape_percent <= 30.0) return MapeBin::B2;
    if (mape_percent <= 50.0) return MapeBin::B3;
    return MapeBin::B4;
}

ClassificationReport summarize_portfolio(std::span<const PortfolioEntry> entries,
                                         std::span<const BacktestReport> reports) {
    std::map<std::string, const BacktestReport*> by_item;
    for (const BacktestReport& report : reports) {
        const auto [_, inserted] = by_item.emplace(report.item_code, &report);
        if (!inserted) {
            raise(Errc::UnexpectedReport, "duplicate report for '" + report.item_code + "'");
        }
    }

    ClassificationReport out;
    std::map<std::string, const PortfolioEntry*> entry_items;
    for (const PortfolioEntry& entry : entries) {
        entry_items.emplace(entry.item_code, &entry);
        out.horizon_counts[static_cast<size_t>(entry.category)] += 1;
        const auto it = by_item.find(entry.item_code);
        if (entry.category == Category::FullyEligible) {
            if (it == by_item.end()) {
                raise(Errc::MissingReport,
                      "no backtest report for eligible item '" + entry.item_code + "'");
            }
            const BacktestReport& report = *it->second;
            ItemClassification item;
            item.item_code = entry.item_code;
            item.monthly_mape = report.monthly_mape;
            item.quarterly_mape = report.quarterly_mape;
            item.monthly_bin = bin_by_mape(report.monthly_mape);
            item.quarterly_bin = bin_by_mape(report.quarterly_mape);
            out.monthly_bin_counts[static_cast<size_t>(item.monthly_bin)] += 1;
            out.quarterly_bin_counts[static_cast<size_t>(item.quarterly_bin)] += 1;
            out.per_item.push_back(std::move(item));
        } else if (it != by_item.end()) {
            raise(Errc::UnexpectedReport,
                  "report for non-eligible item '" + entry.item_code + "'");
        }
    }
    for (const auto& [item, _] : by_item) {
        if (!entry_items.contains(item)) {
            raise(Errc::UnexpectedReport, "report for unknown item '" + item + "'");
        }
    }

    std::sort(out.per_item.begin(), out.per_item.end(),
              [](const ItemClassification& a, const ItemClassification& b) {
                  return a.item_code < b.item_code;
              });
    return out;
}

namespace {

nlohmann::json horizon_counts_json(const ClassificationReport& report) {
    nlohmann::json counts;
    for (Category c : {Category::Inactive, Category::TooShortToForecast, Category::ForecastOnly,
                       Category::FullyEligible}) {
        counts[std::string(to_string(c))] = report.horizon_counts[static_cast<size_t>(c)];
    }
    return counts;
}

nlohmann::json bin_counts_json(const std::array<int, 4>& bins) {
    nlohmann::json counts;
    for (MapeBin b : {MapeBin::B1, MapeBin::B2, MapeBin::B3, MapeBin::B4}) {
        counts[std::string(to_string(b))] = bins[static_cast<size_t>(b)];
    }
    return counts;
}

}  // namespace

void write_classification_json(std::ostream& out, const ClassificationReport& report) {
    nlohmann::json doc;
    doc["horizon_counts"] = horizon_counts_json(report);
    doc["monthly_bin_counts"] = bin_counts_json(report.monthly_bin_counts);
    doc["quarterly_bin_counts"] = bin_counts_json(report.quarterly_bin_counts);
    nlohmann::json items = nlohmann::json::array();
    for (const ItemClassification& item : report.per_item) {
        items.push_back({
            {"item_code", item.item_code},
            {"monthly_mape", item.monthly_mape},
            {"quarterly_mape", item.quarterly_mape},
            {"monthly_bin", std::string(to_string(item.monthly_bin))},
            {"quarterly_bin", std::string(to_string(item.quarterly_bin))},
        });
    }
    doc["per_item"] = std::move(items);
    out << doc.dump(2) << '\n';
}

void write_horizon_histogram_csv(std::ostream& out, const ClassificationReport& report) {
    out << "bin,count\n";
    for (Category c : {Category::Inactive, Category::TooShortToForecast, Category::ForecastOnly,
                       Category::FullyEligible}) {
        out << to_string(c) << ',' << report.horizon_counts[static_cast<size_t>(c)] << '\n';
    }
}

void write_mape_histogram_csv(std::ostream& out, const std::array<int, 4>& bin_counts) {
    out << "bin,count\n";
    for (MapeBin b : {MapeBin::B1, MapeBin::B2, MapeBin::B3, MapeBin::B4}) {
        out << to_string(b) << ',' << bin_counts[static_cast<size_t>(b)] << '\n';
    }
}

}  // namespace forecastlab
