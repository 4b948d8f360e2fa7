#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "forecastlab/forecaster.hpp"
#include "forecastlab/ingest.hpp"
#include "forecastlab/metrics.hpp"

namespace forecastlab {

inline constexpr int kBacktestRepetitions = 12;
inline constexpr int kForecastHorizonMonths = 3;
/// 24 months minimum training + 12 one-month steps + 3 test months.
inline constexpr int kMinBacktestMonths = 39;

struct BacktestWindow {
    int train_len = 0;                  // months in the training prefix
    std::array<int, 3> test_months{};   // 1-based month positions in the series
};

/// Twelve expanding windows anchored to the series end: window j trains
/// on the first n-3-(12-j) months and tests the following three.
std::vector<BacktestWindow> make_windows(int n_months);

struct BacktestStep {
    int window_index = 0;  // 1..12
    int train_len = 0;
    std::array<double, 3> forecasts{};
    std::array<double, 3> actuals{};
    std::array<std::optional<double>, 3> monthly_pes;  // absent where actual is 0
    std::optional<double> quarterly_pe;                // on 3-month sums
};

struct BacktestReport {
    std::string item_code;
    std::vector<BacktestStep> steps;
    double monthly_mape = 0.0;    // over up to 36 monthly errors
    double quarterly_mape = 0.0;  // over up to 12 quarterly errors
    int monthly_used = 0;
    int monthly_skipped = 0;
    int quarterly_used = 0;
    int quarterly_skipped = 0;
};

/// Pluggable forecaster: history in, `horizon` point forecasts out.
using ForecastFn =
    std::function<std::vector<double>(std::span<const double> history, int horizon)>;

/// The production forecaster: fit_additive_model + predict with cfg.
ForecastFn additive_forecaster(const FitConfig& cfg);

BacktestReport backtest_item(const MonthlySeries& series,
                             const ForecastFn& forecast,
                             ZeroPolicy policy = ZeroPolicy::Skip);

/// Backtest each item on up to `jobs` worker threads. Reports come back
/// in input order regardless of scheduling.
std::vector<BacktestReport> run_backtests(std::span<const MonthlySeries* const> items,
                                          const ForecastFn& forecast,
                                          ZeroPolicy policy,
                                          int jobs);

/// One JSON object per item with every report field.
void write_backtest_json(std::ostream& out, std::span<const BacktestReport> reports);
/// Flat CSV: item_code,monthly_mape,quarterly_mape,monthly_used,
/// monthly_skipped,quarterly_used,quarterly_skipped
void write_backtest_csv(std::ostream& out, std::span<const BacktestReport> reports);

}  // namespace forecastlab
