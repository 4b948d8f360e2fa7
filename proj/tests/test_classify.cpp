#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "forecastlab/classify.hpp"
#include "forecastlab/errors.hpp"

using namespace forecastlab;

namespace {

PortfolioEntry entry_of(const std::string& code, Category category) {
    PortfolioEntry e;
    e.item_code = code;
    e.category = category;
    return e;
}

BacktestReport report_of(const std::string& code, double monthly, double quarterly) {
    BacktestReport r;
    r.item_code = code;
    r.monthly_mape = monthly;
    r.quarterly_mape = quarterly;
    return r;
}

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a forecastlab::Error");
    return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("bin_by_mape boundaries") {
    CHECK(bin_by_mape(8.0) == MapeBin::B1);
    CHECK(bin_by_mape(0.0) == MapeBin::B1);
    CHECK(bin_by_mape(15.0) == MapeBin::B1);
    CHECK(bin_by_mape(15.0001) == MapeBin::B2);
    CHECK(bin_by_mape(30.0) == MapeBin::B2);
    CHECK(bin_by_mape(30.0001) == MapeBin::B3);
    CHECK(bin_by_mape(50.0) == MapeBin::B3);
    CHECK(bin_by_mape(50.01) == MapeBin::B4);
    CHECK(bin_by_mape(1e9) == MapeBin::B4);
    CHECK(code_of([] { bin_by_mape(-0.001); }) == Errc::NegativeMape);
}

TEST_CASE("binning partitions [0, inf) even right at the edges") {
    for (double edge : {15.0, 30.0, 50.0}) {
        const MapeBin below = bin_by_mape(edge - 1e-12);
        const MapeBin at = bin_by_mape(edge);
        const MapeBin above = bin_by_mape(edge + 1e-12);
        CHECK(below == at);  // boundary belongs to the lower bin
        CHECK(static_cast<int>(above) == static_cast<int>(at) + 1);
    }
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> value(0.0, 120.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = value(rng);
        const MapeBin bin = bin_by_mape(v);
        const bool in_b1 = v <= 15.0;
        const bool in_b2 = v > 15.0 && v <= 30.0;
        const bool in_b3 = v > 30.0 && v <= 50.0;
        const bool in_b4 = v > 50.0;
        CHECK((in_b1 ? 1 : 0) + (in_b2 ? 1 : 0) + (in_b3 ? 1 : 0) + (in_b4 ? 1 : 0) == 1);
        switch (bin) {
            case MapeBin::B1: CHECK(in_b1); break;
            case MapeBin::B2: CHECK(in_b2); break;
            case MapeBin::B3: CHECK(in_b3); break;
            case MapeBin::B4: CHECK(in_b4); break;
        }
    }
}

TEST_CASE("summarize_portfolio") {
    SUBCASE("empty inputs give zero counts") {
        const ClassificationReport report = summarize_portfolio({}, {});
        for (int c : report.horizon_counts) CHECK(c == 0);
        for (int c : report.monthly_bin_counts) CHECK(c == 0);
        CHECK(report.per_item.empty());
    }
    SUBCASE("counts both criteria") {
        const std::vector<PortfolioEntry> entries{
            entry_of("A", Category::FullyEligible),
            entry_of("B", Category::FullyEligible),
            entry_of("C", Category::ForecastOnly),
            entry_of("D", Category::Inactive),
            entry_of("E", Category::TooShortToForecast),
        };
        const std::vector<BacktestReport> reports{
            report_of("A", 10.0, 8.0),
            report_of("B", 40.0, 22.0),
        };
        const ClassificationReport report = summarize_portfolio(entries, reports);
        CHECK(report.horizon_counts[static_cast<size_t>(Category::FullyEligible)] == 2);
        CHECK(report.horizon_counts[static_cast<size_t>(Category::ForecastOnly)] == 1);
        CHECK(report.horizon_counts[static_cast<size_t>(Category::Inactive)] == 1);
        CHECK(report.horizon_counts[static_cast<size_t>(Category::TooShortToForecast)] == 1);

        CHECK(report.monthly_bin_counts[static_cast<size_t>(MapeBin::B1)] == 1);
        CHECK(report.monthly_bin_counts[static_cast<size_t>(MapeBin::B3)] == 1);
        CHECK(report.quarterly_bin_counts[static_cast<size_t>(MapeBin::B1)] == 1);
        CHECK(report.quarterly_bin_counts[static_cast<size_t>(MapeBin::B2)] == 1);

        // Total bin mass equals the eligible count.
        const int monthly_total = report.monthly_bin_counts[0] + report.monthly_bin_counts[1] +
                                  report.monthly_bin_counts[2] + report.monthly_bin_counts[3];
        CHECK(monthly_total == 2);
        REQUIRE(report.per_item.size() == 2);
        CHECK(report.per_item[0].item_code == "A");
        CHECK(report.per_item[1].item_code == "B");
    }
    SUBCASE("missing and unexpected reports are rejected") {
        const std::vector<PortfolioEntry> entries{
            entry_of("A", Category::FullyEligible),
            entry_of("B", Category::ForecastOnly),
        };
        CHECK(code_of([&] {
                  summarize_portfolio(entries, std::vector<BacktestReport>{});
              }) == Errc::MissingReport);
        CHECK(code_of([&] {
                  summarize_portfolio(
                      entries, std::vector<BacktestReport>{report_of("A", 1, 1),
                                                           report_of("B", 1, 1)});
              }) == Errc::UnexpectedReport);
        CHECK(code_of([&] {
                  summarize_portfolio(
                      entries, std::vector<BacktestReport>{report_of("A", 1, 1),
                                                           report_of("Z", 1, 1)});
              }) == Errc::UnexpectedReport);
        CHECK(code_of([&] {
                  summarize_portfolio(
                      entries, std::vector<BacktestReport>{report_of("A", 1, 1),
                                                           report_of("A", 2, 2)});
              }) == Errc::UnexpectedReport);
    }
    SUBCASE("output is permutation invariant") {
        std::vector<PortfolioEntry> entries;
        std::vector<BacktestReport> reports;
        std::mt19937 rng(71);
        std::uniform_real_distribution<double> value(0.0, 80.0);
        for (int i = 0; i < 20; ++i) {
            const std::string code = "I" + std::to_string(i);
            entries.push_back(entry_of(code, i % 3 == 0 ? Category::ForecastOnly
                                                        : Category::FullyEligible));
            if (i % 3 != 0) reports.push_back(report_of(code, value(rng), value(rng)));
        }
        const ClassificationReport base = summarize_portfolio(entries, reports);
        std::shuffle(entries.begin(), entries.end(), rng);
        std::shuffle(reports.begin(), reports.end(), rng);
        const ClassificationReport shuffled = summarize_portfolio(entries, reports);

        CHECK(base.horizon_counts == shuffled.horizon_counts);
        CHECK(base.monthly_bin_counts == shuffled.monthly_bin_counts);
        CHECK(base.quarterly_bin_counts == shuffled.quarterly_bin_counts);
        REQUIRE(base.per_item.size() == shuffled.per_item.size());
        for (size_t i = 0; i < base.per_item.size(); ++i) {
            CHECK(base.per_item[i].item_code == shuffled.per_item[i].item_code);
            CHECK(base.per_item[i].monthly_mape == shuffled.per_item[i].monthly_mape);
        }
    }
}

TEST_CASE("classification serialization") {
    const std::vector<PortfolioEntry> entries{
        entry_of("A", Category::FullyEligible),
        entry_of("B", Category::Inactive),
    };
    const std::vector<BacktestReport> reports{report_of("A", 12.0, 9.0)};
    const ClassificationReport report = summarize_portfolio(entries, reports);

    std::ostringstream json;
    write_classification_json(json, report);
    CHECK(json.str().find("\"horizon_counts\"") != std::string::npos);
    CHECK(json.str().find("\"FullyEligible\": 1") != std::string::npos);
    CHECK(json.str().find("\"monthly_bin_counts\"") != std::string::npos);

    std::ostringstream horizon;
    write_horizon_histogram_csv(horizon, report);
    CHECK(horizon.str().find("bin,count\n") == 0);
    CHECK(horizon.str().find("FullyEligible,1\n") != std::string::npos);
    CHECK(horizon.str().find("Inactive,1\n") != std::string::npos);

    std::ostringstream bins;
    write_mape_histogram_csv(bins, report.monthly_bin_counts);
    CHECK(bins.str() == "bin,count\nB1,1\nB2,0\nB3,0\nB4,0\n");
}
