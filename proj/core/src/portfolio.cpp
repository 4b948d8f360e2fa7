#include "forecastlab/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "forecastlab/errors.hpp"
#include "forecastlab/text.hpp"

namespace forecastlab {

std::string_view to_string(Category c) {
    switch (c) {
        case Category::Inactive: return "Inactive";
        case Category::TooShortToForecast: return "TooShortToForecast";
        case Category::ForecastOnly: return "ForecastOnly";
        case Category::FullyEligible: return "FullyEligible";
    }
    return "?";
}

std::string_view to_string(RankCriterion c) {
    switch (c) {
        case RankCriterion::Profit: return "profit";
        case RankCriterion::Turnover: return "turnover";
        case RankCriterion::Quantity: return "quantity";
    }
    return "?";
}

HorizonClass classify_horizon(const MonthlySeries& series, YearMonth dataset_end) {
    const int horizon = static_cast<int>(series.values.size());
    if (horizon < 1 || series.end_month() != dataset_end) {
        raise(Errc::InvalidArgument,
              "series for '" + series.item_code + "' is not contiguous through " +
                  dataset_end.str());
    }
    int downtime = 0;
    for (auto it = series.values.rbegin(); it != series.values.rend() && *it == 0.0; ++it) {
        ++downtime;
    }
    Category category;
    if (downtime >= 3) {
        category = Category::Inactive;
    } else if (horizon < 24) {
        category = Category::TooShortToForecast;
    } else if (horizon < 39) {
        category = Category::ForecastOnly;
    } else {
        category = Category::FullyEligible;
    }
    return {horizon, downtime, category};
}

std::vector<PortfolioEntry> rank_products(const std::map<std::string, MonthlySeries>& series,
                                          std::span<const SalesRecord> records,
                                          RankCriterion criterion,
                                          YearMonth dataset_end,
                                          const std::map<std::string, double>* unit_margins) {
    if (criterion == RankCriterion::Profit && unit_margins == nullptr) {
        raise(Errc::ProfitDataMissing, "profit ranking needs a unit-margin sidecar");
    }
    const int window_first = dataset_end.plus_months(-11).index();
    const int window_last = dataset_end.index();

    std::map<std::string, double> totals;
    for (const SalesRecord& record : records) {
        const int month = YearMonth::of(record.date).index();
        if (month < window_first || month > window_last) continue;
        if (!series.contains(record.item_code)) continue;
        double contribution = 0.0;
        switch (criterion) {
            case RankCriterion::Quantity:
                contribution = record.quantity;
                break;
            case RankCriterion::Turnover:
                if (!record.unit_price) {
                    raise(Errc::PriceDataMissing,
                          "turnover ranking: record for '" + record.item_code + "' dated " +
                              to_string(record.date) + " has no unit_price");
                }
                contribution = record.quantity * *record.unit_price;
                break;
            case RankCriterion::Profit: {
                const auto it = unit_margins->find(record.item_code);
                if (it == unit_margins->end()) {
                    raise(Errc::ProfitDataMissing,
                          "profit ranking: no unit margin for '" + record.item_code + "'");
                }
                contribution = record.quantity * it->second;
                break;
            }
        }
        totals[record.item_code] += contribution;
    }

    std::vector<PortfolioEntry> entries;
    entries.reserve(series.size());
    for (const auto& [item, s] : series) {
        PortfolioEntry entry;
        entry.item_code = item;
        const auto it = totals.find(item);
        // Negative yearly nets (returns exceeding sales) rank as zero.
        entry.rank_value = it != totals.end() ? std::max(0.0, it->second) : 0.0;
        const HorizonClass hc = classify_horizon(s, dataset_end);
        entry.horizon_months = hc.horizon_months;
        entry.downtime_months = hc.downtime_months;
        entry.category = hc.category;
        entries.push_back(std::move(entry));
    }

    std::sort(entries.begin(), entries.end(), [](const PortfolioEntry& a, const PortfolioEntry& b) {
        if (a.rank_value != b.rank_value) return a.rank_value > b.rank_value;
        return a.item_code < b.item_code;
    });

    double total = 0.0;
    for (const PortfolioEntry& entry : entries) total += entry.rank_value;
    double running = 0.0;
    for (size_t i = 0; i < entries.size(); ++i) {
        entries[i].rank = static_cast<int>(i) + 1;
        if (total > 0.0) {
            running += entries[i].rank_value;
            entries[i].cumulative_share = running / total;
        } else {
            // All-zero portfolio: fall back to a uniform share so the
            // cumulative invariants still hold.
            entries[i].cumulative_share = static_cast<double>(i + 1) / entries.size();
        }
    }
    return entries;
}

std::vector<PortfolioEntry> select_top(std::span<const PortfolioEntry> ranked,
                                       const SelectionMode& mode) {
    if (const auto* cut = std::get_if<CoverageCut>(&mode)) {
        if (!(cut->coverage > 0.0) || cut->coverage > 1.0) {
            raise(Errc::InvalidCoverage,
                  "coverage must be in (0, 1], got " + format_double(cut->coverage));
        }
        size_t keep = ranked.size();
        for (size_t i = 0; i < ranked.size(); ++i) {
            if (ranked[i].cumulative_share >= cut->coverage) {
                keep = i + 1;
                break;
            }
        }
        return {ranked.begin(), ranked.begin() + keep};
    }
    const auto& top = std::get<TopCount>(mode);
    if (top.n < 1) raise(Errc::InvalidArgument, "top_n must be >= 1");
    const size_t keep = std::min(ranked.size(), static_cast<size_t>(top.n));
    return {ranked.begin(), ranked.begin() + keep};
}

bool is_active(const MonthlySeries& series, YearMonth dataset_end) {
    const int last = dataset_end.index();
    const int first = dataset_end.plus_months(-11).index();
    const int start = series.start_month.index();
    for (size_t i = 0; i < series.values.size(); ++i) {
        const int month = start + static_cast<int>(i);
        if (month >= first && month <= last && series.values[i] != 0.0) return true;
    }
    return false;
}

int count_active(const std::map<std::string, MonthlySeries>& series, YearMonth dataset_end) {
    int active = 0;
    for (const auto& [_, s] : series) {
        if (is_active(s, dataset_end)) ++active;
    }
    return active;
}

void write_portfolio_csv(std::ostream& out, std::span<const PortfolioEntry> entries) {
    out << "rank,item_code,rank_value,cumulative_share,horizon_months,downtime_months,category\n";
    for (const PortfolioEntry& e : entries) {
        out << e.rank << ',' << e.item_code << ',' << format_double(e.rank_value) << ','
            << format_double(e.cumulative_share) << ',' << e.horizon_months << ','
            << e.downtime_months << ',' << to_string(e.category) << '\n';
    }
}

}  // namespace forecastlab
