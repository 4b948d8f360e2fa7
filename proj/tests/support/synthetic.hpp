#pragma once

// Deterministic synthetic transaction corpora for CLI and acceptance
// tests. All randomness is seeded; generated CSV text is byte-stable.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "forecastlab/calendar.hpp"
#include "forecastlab/text.hpp"

namespace synthetic {

struct ItemSpec {
    std::string item_code;
    int history_months = 48;      // counted back from dataset_end
    double base = 100.0;          // mean monthly quantity
    double trend_per_month = 0.0;
    double seasonal_amplitude = 0.0;
    double noise_fraction = 0.0;      // uniform +- fraction of base
    int trailing_zero_months = 0;     // downtime at the series end
    double zero_month_probability = 0.0;  // intermittency
    double unit_price = 2.0;
    bool with_returns = false;  // sprinkle small negative rows
};

/// Monthly quantity profile for one item; values are integers >= 0 so
/// the CSV stays compact and exact.
inline std::vector<double> monthly_profile(const ItemSpec& spec, std::mt19937& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> months(spec.history_months, 0.0);
    for (int t = 0; t < spec.history_months; ++t) {
        if (t >= spec.history_months - spec.trailing_zero_months) continue;
        if (spec.zero_month_probability > 0.0 && unit(rng) < spec.zero_month_probability) {
            continue;
        }
        double value = spec.base + spec.trend_per_month * t +
                       spec.seasonal_amplitude *
                           std::sin(6.283185307179586 * (t % 12) / 12.0);
        if (spec.noise_fraction > 0.0) {
            value += spec.base * spec.noise_fraction * (2.0 * unit(rng) - 1.0);
        }
        months[t] = std::max(0.0, std::round(value));
    }
    return months;
}

/// Render a corpus as transaction CSV text. Each month's quantity is
/// split across one to three days of that month.
inline std::string make_sales_csv(const std::vector<ItemSpec>& items,
                                  forecastlab::YearMonth dataset_end,
                                  uint32_t seed = 20240901) {
    std::mt19937 rng(seed);
    std::ostringstream csv;
    csv << "item_code,date,quantity,unit_price\n";
    for (const ItemSpec& spec : items) {
        const std::vector<double> months = monthly_profile(spec, rng);
        const forecastlab::YearMonth start =
            dataset_end.plus_months(-(spec.history_months - 1));
        std::uniform_int_distribution<int> split_dist(1, 3);
        for (int t = 0; t < spec.history_months; ++t) {
            const double total = months[t];
            if (total == 0.0 && !(t == 0)) continue;  // keep first month row to pin start
            const forecastlab::YearMonth month = start.plus_months(t);
            const int splits = total > 0.0 ? split_dist(rng) : 1;
            double remaining = total;
            for (int part = 0; part < splits; ++part) {
                const double quantity =
                    part + 1 == splits ? remaining : std::floor(remaining / 2.0);
                remaining -= quantity;
                const int day = 2 + part * 9;
                csv << spec.item_code << ',' << month.str() << '-' << (day < 10 ? "0" : "")
                    << day << ',' << forecastlab::format_double(quantity) << ','
                    << forecastlab::format_double(spec.unit_price) << '\n';
            }
            if (spec.with_returns && total > 10.0 && t % 7 == 3) {
                csv << spec.item_code << ',' << month.str() << "-25,-2,"
                    << forecastlab::format_double(spec.unit_price) << '\n';
            }
        }
    }
    return csv.str();
}

/// Mixed portfolio: long clean seasonal items, trends, intermittent
/// sellers, short histories and inactive tails.
inline std::vector<ItemSpec> mixed_portfolio(int n_eligible = 12) {
    std::vector<ItemSpec> items;
    auto code = [](int i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "9%05d", i);
        return std::string(buf);
    };
    int next = 1;
    for (int i = 0; i < n_eligible; ++i) {
        ItemSpec spec;
        spec.item_code = code(next++);
        spec.history_months = 44 + (i % 4) * 6;
        spec.base = 200.0 + 40.0 * i;
        spec.trend_per_month = (i % 3 == 0) ? 1.5 : 0.0;
        spec.seasonal_amplitude = (i % 2 == 0) ? spec.base * 0.25 : 0.0;
        spec.noise_fraction = 0.05;
        spec.unit_price = 1.0 + 0.5 * (i % 5);
        spec.with_returns = i % 4 == 1;
        items.push_back(spec);
    }
    for (int i = 0; i < 4; ++i) {  // forecastable but not backtestable
        ItemSpec spec;
        spec.item_code = code(next++);
        spec.history_months = 26 + i * 3;
        spec.base = 80.0 + 10.0 * i;
        spec.noise_fraction = 0.1;
        items.push_back(spec);
    }
    for (int i = 0; i < 3; ++i) {  // too short to forecast
        ItemSpec spec;
        spec.item_code = code(next++);
        spec.history_months = 12 + i * 4;
        spec.base = 50.0;
        items.push_back(spec);
    }
    for (int i = 0; i < 3; ++i) {  // inactive tails
        ItemSpec spec;
        spec.item_code = code(next++);
        spec.history_months = 40;
        spec.base = 120.0;
        spec.trailing_zero_months = 3 + i;
        items.push_back(spec);
    }
    for (int i = 0; i < 2; ++i) {  // intermittent
        ItemSpec spec;
        spec.item_code = code(next++);
        spec.history_months = 48;
        spec.base = 30.0;
        spec.zero_month_probability = 0.35;
        spec.unit_price = 4.0;
        items.push_back(spec);
    }
    return items;
}

}  // namespace synthetic
