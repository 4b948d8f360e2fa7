#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "forecastlab/backtest.hpp"
#include "forecastlab/forecaster.hpp"
#include "forecastlab/metrics.hpp"

using namespace forecastlab;

namespace {

std::vector<double> seasonal_series(int n) {
    std::mt19937 rng(n);
    std::uniform_real_distribution<double> noise(0.0, 15.0);
    std::vector<double> values(n);
    for (int t = 0; t < n; ++t) {
        values[t] = 150.0 + 0.9 * t + 25.0 * std::sin(2.0 * 3.141592653589793 * t / 12.0) +
                    noise(rng);
    }
    return values;
}

void BM_FitAdditiveModel(benchmark::State& state) {
    const auto values = seasonal_series(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_additive_model(values));
    }
}
BENCHMARK(BM_FitAdditiveModel)->Arg(24)->Arg(39)->Arg(72);

void BM_Predict(benchmark::State& state) {
    const AdditiveModel model = fit_additive_model(seasonal_series(48));
    for (auto _ : state) {
        benchmark::DoNotOptimize(predict(model, 3));
    }
}
BENCHMARK(BM_Predict);

void BM_SolveRidge(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Eigen::MatrixXd X = build_design_matrix(n, FitConfig{});
    Eigen::VectorXd y(n);
    for (int t = 0; t < n; ++t) y[t] = 1.0 + 0.01 * t;
    Eigen::VectorXd penalties = Eigen::VectorXd::Constant(X.cols(), 0.5);
    penalties[0] = penalties[1] = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_ridge(X, y, penalties));
    }
}
BENCHMARK(BM_SolveRidge)->Arg(36)->Arg(72);

void BM_BacktestItem(benchmark::State& state) {
    MonthlySeries series;
    series.item_code = "BENCH";
    series.start_month = {2016, 1};
    series.values = seasonal_series(static_cast<int>(state.range(0)));
    const ForecastFn forecaster = additive_forecaster(FitConfig{});
    for (auto _ : state) {
        benchmark::DoNotOptimize(backtest_item(series, forecaster));
    }
}
BENCHMARK(BM_BacktestItem)->Arg(39)->Arg(51)->Arg(72)->Unit(benchmark::kMillisecond);

void BM_Mape(benchmark::State& state) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> value(1.0, 500.0);
    std::vector<ErrorPair> pairs(1000);
    for (auto& p : pairs) p = {value(rng), value(rng)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(mape(pairs));
    }
}
BENCHMARK(BM_Mape);

}  // namespace
