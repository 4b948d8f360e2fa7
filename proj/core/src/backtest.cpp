#include "forecastlab/backtest.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <ostream>
#include <thread>

#include "forecastlab/errors.hpp"
#include "forecastlab/text.hpp"

namespace forecastlab {

std::vector<BacktestWindow> make_windows(int n_months) {
    if (n_months < kMinBacktestMonths) {
        raise(Errc::TooShort, "backtest needs " + std::to_string(kMinBacktestMonths) +
                                  " months, got " + std::to_string(n_months));
    }
    std::vector<BacktestWindow> windows;
    windows.reserve(kBacktestRepetitions);
    for (int j = 1; j <= kBacktestRepetitions; ++j) {
        BacktestWindow w;
        w.train_len = n_months - kForecastHorizonMonths - (kBacktestRepetitions - j);
        for (int h = 0; h < kForecastHorizonMonths; ++h) {
            w.test_months[h] = w.train_len + 1 + h;
        }
        windows.push_back(w);
    }
    return windows;
}

BacktestReport backtest_item(const MonthlySeries& series,
                             const ForecastFn& forecast,
                             ZeroPolicy policy) {
    const int n = static_cast<int>(series.values.size());
    const std::vector<BacktestWindow> windows = make_windows(n);

    BacktestReport report;
    report.item_code = series.item_code;
    report.steps.reserve(windows.size());

    std::vector<ErrorPair> monthly_pairs;
    std::vector<ErrorPair> quarterly_pairs;
    monthly_pairs.reserve(windows.size() * kForecastHorizonMonths);
    quarterly_pairs.reserve(windows.size());

    int index = 0;
    for (const BacktestWindow& window : windows) {
        const std::span<const double> train(series.values.data(), window.train_len);
        const std::vector<double> forecasts = forecast(train, kForecastHorizonMonths);
        if (forecasts.size() != kForecastHorizonMonths) {
            raise(Errc::InvalidArgument, "forecaster returned " +
                                             std::to_string(forecasts.size()) +
                                             " values, expected 3");
        }

        BacktestStep step;
        step.window_index = ++index;
        step.train_len = window.train_len;
        double forecast_sum = 0.0;
        double actual_sum = 0.0;
        for (int h = 0; h < kForecastHorizonMonths; ++h) {
            step.forecasts[h] = forecasts[h];
            step.actuals[h] = series.values[window.test_months[h] - 1];
            forecast_sum += step.forecasts[h];
            actual_sum += step.actuals[h];
            monthly_pairs.push_back({step.forecasts[h], step.actuals[h]});
            if (step.actuals[h] != 0.0) {
                step.monthly_pes[h] = percentage_error({step.forecasts[h], step.actuals[h]});
            }
        }
        quarterly_pairs.push_back({forecast_sum, actual_sum});
        if (actual_sum != 0.0) {
            step.quarterly_pe = percentage_error({forecast_sum, actual_sum});
        }
        report.steps.push_back(step);
    }

    const MapeResult monthly = mape(monthly_pairs, policy);
    const MapeResult quarterly = mape(quarterly_pairs, policy);
    report.monthly_mape = monthly.mape;
    report.monthly_used = monthly.used;
    report.monthly_skipped = monthly.skipped;
    report.quarterly_mape = quarterly.mape;
    report.quarterly_used = quarterly.used;
    report.quarterly_skipped = quarterly.skipped;
    return report;
}

ForecastFn additive_forecaster(const FitConfig& cfg) {
    return [cfg](std::span<const double> history, int horizon) {
        return predict(fit_additive_model(history, cfg), horizon);
    };
}

std::vector<BacktestReport> run_backtests(std::span<const MonthlySeries* const> items,
                                          const ForecastFn& forecast,
                                          ZeroPolicy policy,
                                          int jobs) {
    if (jobs < 1) raise(Errc::InvalidArgument, "jobs must be >= 1");
    std::vector<BacktestReport> reports(items.size());
    if (items.empty()) return reports;

    const int workers = std::min<int>(jobs, static_cast<int>(items.size()));
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const size_t i = next.fetch_add(1);
            if (i >= items.size()) break;
            try {
                reports[i] = backtest_item(*items[i], forecast, policy);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return reports;
}

namespace {

nlohmann::json step_to_json(const BacktestStep& step) {
    nlohmann::json doc;
    doc["window_index"] = step.window_index;
    doc["train_len"] = step.train_len;
    doc["forecasts"] = step.forecasts;
    doc["actuals"] = step.actuals;
    nlohmann::json pes = nlohmann::json::array();
    for (const auto& pe : step.monthly_pes) {
        if (pe) {
            pes.push_back(*pe);
        } else {
            pes.push_back(nullptr);
        }
    }
    doc["monthly_pes"] = std::move(pes);
    doc["quarterly_pe"] = step.quarterly_pe ? nlohmann::json(*step.quarterly_pe)
                                            : nlohmann::json(nullptr);
    return doc;
}

}  // namespace

void write_backtest_json(std::ostream& out, std::span<const BacktestReport> reports) {
    nlohmann::json doc = nlohmann::json::array();
    for (const BacktestReport& report : reports) {
        nlohmann::json entry;
        entry["item_code"] = report.item_code;
        entry["monthly_mape"] = report.monthly_mape;
        entry["quarterly_mape"] = report.quarterly_mape;
        entry["monthly_used"] = report.monthly_used;
        entry["monthly_skipped"] = report.monthly_skipped;
        entry["quarterly_used"] = report.quarterly_used;
        entry["quarterly_skipped"] = report.quarterly_skipped;
        nlohmann::json steps = nlohmann::json::array();
        for (const BacktestStep& step : report.steps) steps.push_back(step_to_json(step));
        entry["steps"] = std::move(steps);
        doc.push_back(std::move(entry));
    }
    out << doc.dump(2) << '\n';
}

void write_backtest_csv(std::ostream& out, std::span<const BacktestReport> reports) {
    out << "item_code,monthly_mape,quarterly_mape,monthly_used,monthly_skipped,"
           "quarterly_used,quarterly_skipped\n";
    for (const BacktestReport& r : reports) {
        out << r.item_code << ',' << format_double(r.monthly_mape) << ','
            << format_double(r.quarterly_mape) << ',' << r.monthly_used << ','
            << r.monthly_skipped << ',' << r.quarterly_used << ',' << r.quarterly_skipped
            << '\n';
    }
}

}  // namespace forecastlab
