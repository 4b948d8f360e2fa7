// forecastlab command line: ingest -> backtest -> forecast, with
// file-based stage handoff and a digest manifest per output directory.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "forecastlab/backtest.hpp"
#include "forecastlab/calendar.hpp"
#include "forecastlab/classify.hpp"
#include "forecastlab/errors.hpp"
#include "forecastlab/forecaster.hpp"
#include "forecastlab/ingest.hpp"
#include "forecastlab/metrics.hpp"
#include "forecastlab/portfolio.hpp"
#include "forecastlab/text.hpp"

namespace fs = std::filesystem;
using namespace forecastlab;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIoOrParse = 2;
constexpr int kExitNoEligible = 3;
constexpr int kExitUnknownItem = 4;
constexpr int kExitTooShort = 5;

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case Errc::InvalidArgument:
        case Errc::InvalidCoverage:
            return kExitUsage;
        case Errc::UnknownItem:
            return kExitUnknownItem;
        case Errc::TooShortToFit:
            return kExitTooShort;
        default:
            return kExitIoOrParse;
    }
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

/// Collects files written by one command and rewrites the directory's
/// manifest (merging entries from earlier stages).
class OutputWriter {
public:
    explicit OutputWriter(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) raise(Errc::IoFailure, "cannot create output directory " + dir_.string());
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) raise(Errc::IoFailure, "cannot open " + path.string() + " for writing");
        out << content;
        out.close();
        if (!out) raise(Errc::IoFailure, "failed writing " + path.string());
        written_[name] = {sha256_hex(content), content.size()};
    }

    void finalize_manifest() {
        nlohmann::json files = nlohmann::json::object();
        const fs::path manifest_path = dir_ / "manifest.json";
        if (fs::exists(manifest_path)) {
            std::ifstream in(manifest_path);
            nlohmann::json old;
            in >> old;
            if (old.contains("files")) files = old["files"];
        }
        for (const auto& [name, meta] : written_) {
            files[name] = {{"sha256", meta.first}, {"bytes", meta.second}};
        }
        nlohmann::json manifest;
        manifest["files"] = std::move(files);
        std::ofstream out(manifest_path, std::ios::binary);
        out << manifest.dump(2) << '\n';
    }

    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::map<std::string, std::pair<std::string, size_t>> written_;
};

struct IngestOptions {
    std::string input;
    std::string out_dir;
    std::string dataset_end;  // "YYYY-MM", empty -> latest record month
    int max_history_years = 6;
    std::string conversion_path;
    bool drop_last_month = false;
};

struct FitOptions {
    int fourier_order = 4;
    int n_changepoints = 10;
    double lambda_delta = 1.0;
    double lambda_season = 0.1;

    FitConfig to_config() const {
        FitConfig cfg;
        cfg.fourier_order = fourier_order;
        cfg.n_changepoints = n_changepoints;
        cfg.lambda_delta = lambda_delta;
        cfg.lambda_season = lambda_season;
        return cfg;
    }
};

struct BacktestOptions {
    std::string input;
    std::string series_path;  // default <out>/series.json
    std::string out_dir;
    std::string criterion = "turnover";
    double coverage = 0.9;
    int top_n = 0;  // 0 -> coverage mode
    std::string margins_path;
    std::string conversion_path;
    int max_history_years = 6;
    std::string zero_policy = "skip";
    int jobs = 0;  // 0 -> FORECASTLAB_JOBS or hardware concurrency
    FitOptions fit;
};

struct ForecastOptions {
    std::string series_path;
    std::string out_dir;
    std::string item;
    int horizon = 3;
    bool emit_model = false;
    FitOptions fit;
};

std::vector<SalesRecord> load_records(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::IoFailure, "cannot open input file " + path);
    return parse_sales_csv(in);
}

std::map<std::string, double> load_sidecar(const std::string& path,
                                           std::string_view value_column) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::IoFailure, "cannot open sidecar file " + path);
    return parse_sidecar_csv(in, value_column);
}

std::map<std::string, MonthlySeries> load_series(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::IoFailure, "cannot open series file " + path);
    return read_series_json(in);
}

YearMonth parse_year_month_flag(const std::string& text, const char* flag) {
    const auto ym = YearMonth::parse(text);
    if (!ym) {
        raise(Errc::InvalidArgument,
              std::string(flag) + " must be YYYY-MM, got '" + text + "'");
    }
    return *ym;
}

/// The shared month every series in the file ends at.
YearMonth series_dataset_end(const std::map<std::string, MonthlySeries>& series) {
    std::optional<YearMonth> end;
    for (const auto& [item, s] : series) {
        const YearMonth item_end = s.end_month();
        if (!end) {
            end = item_end;
        } else if (*end != item_end) {
            raise(Errc::ParseFailure,
                  "series file is not aligned: '" + item + "' ends at " + item_end.str() +
                      ", expected " + end->str());
        }
    }
    if (!end) raise(Errc::ParseFailure, "series file has no items");
    return *end;
}

ZeroPolicy parse_zero_policy(const std::string& text) {
    if (text == "skip") return ZeroPolicy::Skip;
    if (text == "error") return ZeroPolicy::Error;
    raise(Errc::InvalidArgument, "zero-policy must be skip or error, got '" + text + "'");
}

RankCriterion parse_criterion(const std::string& text) {
    if (text == "profit") return RankCriterion::Profit;
    if (text == "turnover") return RankCriterion::Turnover;
    if (text == "quantity") return RankCriterion::Quantity;
    raise(Errc::InvalidArgument,
          "criterion must be profit, turnover or quantity, got '" + text + "'");
}

int resolve_jobs(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("FORECASTLAB_JOBS")) {
        const auto parsed = parse_int(env);
        if (parsed && *parsed > 0) return *parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

int run_ingest(const IngestOptions& opt) {
    const std::vector<SalesRecord> raw = load_records(opt.input);

    YearMonth dataset_end;
    if (!opt.dataset_end.empty()) {
        dataset_end = parse_year_month_flag(opt.dataset_end, "--dataset-end");
    } else {
        if (raw.empty()) {
            raise(Errc::ParseFailure,
                  "input has no data rows and no --dataset-end was given");
        }
        Date latest = raw.front().date;
        for (const SalesRecord& r : raw) latest = std::max(latest, r.date);
        dataset_end = YearMonth::of(latest);
    }
    if (opt.drop_last_month) dataset_end = dataset_end.plus_months(-1);

    std::vector<SalesRecord> records =
        filter_by_date(raw, last_day_of(dataset_end), opt.max_history_years);
    if (!opt.conversion_path.empty()) {
        records = convert_units(records, load_sidecar(opt.conversion_path, "multiplier"));
    }
    const AggregateResult aggregated = aggregate_monthly(records, dataset_end);

    OutputWriter writer(opt.out_dir);
    std::ostringstream series_text;
    write_series_json(series_text, aggregated.series);
    writer.write("series.json", series_text.str());

    nlohmann::json summary;
    summary["records_parsed"] = raw.size();
    summary["records_in_window"] = records.size();
    summary["items"] = aggregated.series.size();
    summary["dataset_end"] = dataset_end.str();
    summary["floored_months_total"] = aggregated.total_floored_months();
    summary["floored_months"] = aggregated.floored_months;
    writer.write("ingest_summary.json", summary.dump(2) + "\n");
    writer.finalize_manifest();

    std::cout << "ingest: " << raw.size() << " records, " << records.size()
              << " in window, " << aggregated.series.size() << " items through "
              << dataset_end.str() << ", " << aggregated.total_floored_months()
              << " floored months\n";
    return 0;
}

int run_backtest(const BacktestOptions& opt) {
    // Validate selection flags before touching any file.
    if (opt.top_n == 0 && (!(opt.coverage > 0.0) || opt.coverage > 1.0)) {
        raise(Errc::InvalidCoverage,
              "--coverage must be in (0, 1], got " + format_double(opt.coverage));
    }
    if (opt.top_n < 0) raise(Errc::InvalidArgument, "--top-n must be >= 1");

    const std::string series_path = !opt.series_path.empty()
                                        ? opt.series_path
                                        : (fs::path(opt.out_dir) / "series.json").string();
    const std::map<std::string, MonthlySeries> series = load_series(series_path);
    const YearMonth dataset_end = series_dataset_end(series);

    std::vector<SalesRecord> records =
        filter_by_date(load_records(opt.input), last_day_of(dataset_end), opt.max_history_years);
    if (!opt.conversion_path.empty()) {
        records = convert_units(records, load_sidecar(opt.conversion_path, "multiplier"));
    }

    std::optional<std::map<std::string, double>> margins;
    if (!opt.margins_path.empty()) {
        margins = load_sidecar(opt.margins_path, "unit_margin");
    }
    const RankCriterion criterion = parse_criterion(opt.criterion);
    const std::vector<PortfolioEntry> ranked =
        rank_products(series, records, criterion, dataset_end, margins ? &*margins : nullptr);

    const SelectionMode mode = opt.top_n > 0 ? SelectionMode(TopCount{opt.top_n})
                                             : SelectionMode(CoverageCut{opt.coverage});
    const std::vector<PortfolioEntry> selected = select_top(ranked, mode);

    std::vector<const PortfolioEntry*> eligible;
    for (const PortfolioEntry& entry : selected) {
        if (entry.category == Category::FullyEligible) eligible.push_back(&entry);
    }
    std::sort(eligible.begin(), eligible.end(),
              [](const PortfolioEntry* a, const PortfolioEntry* b) {
                  return a->item_code < b->item_code;
              });
    if (eligible.empty()) {
        std::cerr << "error: no FullyEligible item in the selected portfolio\n";
        return kExitNoEligible;
    }

    std::vector<const MonthlySeries*> items;
    items.reserve(eligible.size());
    for (const PortfolioEntry* entry : eligible) {
        items.push_back(&series.at(entry->item_code));
    }
    const ZeroPolicy policy = parse_zero_policy(opt.zero_policy);
    const int jobs = resolve_jobs(opt.jobs);
    const std::vector<BacktestReport> reports =
        run_backtests(items, additive_forecaster(opt.fit.to_config()), policy, jobs);

    const ClassificationReport classification = summarize_portfolio(selected, reports);

    OutputWriter writer(opt.out_dir);
    {
        std::ostringstream text;
        write_portfolio_csv(text, ranked);
        writer.write("portfolio.csv", text.str());
    }
    {
        std::ostringstream text;
        write_backtest_json(text, reports);
        writer.write("backtests.json", text.str());
    }
    {
        std::ostringstream text;
        write_backtest_csv(text, reports);
        writer.write("backtests.csv", text.str());
    }
    {
        std::ostringstream text;
        write_classification_json(text, classification);
        writer.write("classification.json", text.str());
    }
    {
        std::ostringstream text;
        write_horizon_histogram_csv(text, classification);
        writer.write("horizon_hist.csv", text.str());
    }
    {
        std::ostringstream text;
        write_mape_histogram_csv(text, classification.monthly_bin_counts);
        writer.write("monthly_mape_hist.csv", text.str());
    }
    {
        std::ostringstream text;
        write_mape_histogram_csv(text, classification.quarterly_bin_counts);
        writer.write("quarterly_mape_hist.csv", text.str());
    }

    const int eligible_count =
        classification.horizon_counts[static_cast<size_t>(Category::FullyEligible)];
    nlohmann::json summary;
    summary["total_items"] = series.size();
    summary["active_items"] = count_active(series, dataset_end);
    summary["dataset_end"] = dataset_end.str();
    summary["criterion"] = std::string(to_string(criterion));
    summary["selected_items"] = selected.size();
    summary["selection_cumulative_share"] =
        selected.empty() ? 0.0 : selected.back().cumulative_share;
    summary["fully_eligible"] = eligible_count;
    nlohmann::json horizon = nlohmann::json::object();
    for (Category c : {Category::Inactive, Category::TooShortToForecast, Category::ForecastOnly,
                       Category::FullyEligible}) {
        horizon[std::string(to_string(c))] =
            classification.horizon_counts[static_cast<size_t>(c)];
    }
    summary["horizon_counts"] = std::move(horizon);
    auto bins_json = [](const std::array<int, 4>& bins) {
        nlohmann::json out = nlohmann::json::object();
        for (MapeBin b : {MapeBin::B1, MapeBin::B2, MapeBin::B3, MapeBin::B4}) {
            out[std::string(to_string(b))] = bins[static_cast<size_t>(b)];
        }
        return out;
    };
    summary["monthly_bin_counts"] = bins_json(classification.monthly_bin_counts);
    summary["quarterly_bin_counts"] = bins_json(classification.quarterly_bin_counts);
    writer.write("summary.json", summary.dump(2) + "\n");
    writer.finalize_manifest();

    std::cout << "portfolio: " << series.size() << " items ("
              << summary["active_items"].get<int>() << " active), selected "
              << selected.size() << " (share "
              << format_double(summary["selection_cumulative_share"].get<double>())
              << "), fully eligible " << eligible_count << "\n";
    std::cout << "monthly bins:   B1=" << classification.monthly_bin_counts[0]
              << " B2=" << classification.monthly_bin_counts[1]
              << " B3=" << classification.monthly_bin_counts[2]
              << " B4=" << classification.monthly_bin_counts[3] << "\n";
    std::cout << "quarterly bins: B1=" << classification.quarterly_bin_counts[0]
              << " B2=" << classification.quarterly_bin_counts[1]
              << " B3=" << classification.quarterly_bin_counts[2]
              << " B4=" << classification.quarterly_bin_counts[3] << "\n";
    return 0;
}

int run_forecast(const ForecastOptions& opt) {
    const std::map<std::string, MonthlySeries> series = load_series(opt.series_path);
    const auto it = series.find(opt.item);
    if (it == series.end()) {
        raise(Errc::UnknownItem, "item '" + opt.item + "' not found in series file");
    }
    const MonthlySeries& s = it->second;
    if (opt.horizon < 0) raise(Errc::InvalidArgument, "--horizon must be >= 0");

    const AdditiveModel model = fit_additive_model(s.values, opt.fit.to_config());
    const std::vector<double> forecasts = predict(model, opt.horizon);

    std::ostringstream text;
    text << "month,value,forecast\n";
    for (size_t i = 0; i < s.values.size(); ++i) {
        text << s.start_month.plus_months(static_cast<int>(i)).str() << ','
             << format_double(s.values[i]) << ",\n";
    }
    for (int h = 0; h < opt.horizon; ++h) {
        text << s.end_month().plus_months(h + 1).str() << ",," << format_double(forecasts[h])
             << '\n';
    }

    OutputWriter writer(opt.out_dir);
    writer.write("forecast_" + opt.item + ".csv", text.str());
    if (opt.emit_model) {
        writer.write("model_" + opt.item + ".json", model_to_json(model) + "\n");
    }
    writer.finalize_manifest();

    std::cout << "forecast: " << opt.item << ", " << s.values.size() << " history months, "
              << opt.horizon << " forecast months\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monthly retail sales forecasting, backtesting and portfolio classification"};
    app.require_subcommand(1);

    IngestOptions ingest_opt;
    CLI::App* ingest = app.add_subcommand("ingest", "Aggregate transaction CSV to monthly series");
    ingest->add_option("--input", ingest_opt.input, "Transaction CSV")->required();
    ingest->add_option("--out", ingest_opt.out_dir, "Output directory")->required();
    ingest->add_option("--dataset-end", ingest_opt.dataset_end,
                       "Final month YYYY-MM (default: month of latest record)");
    ingest->add_option("--max-history-years", ingest_opt.max_history_years,
                       "History window in years")
        ->check(CLI::PositiveNumber);
    ingest->add_option("--conversion", ingest_opt.conversion_path,
                       "Unit conversion sidecar CSV (item_code,multiplier)");
    ingest->add_flag("--drop-last-month", ingest_opt.drop_last_month,
                     "Drop the (possibly partial) final month");

    BacktestOptions backtest_opt;
    CLI::App* backtest =
        app.add_subcommand("backtest", "Rank, select, backtest and classify the portfolio");
    backtest->add_option("--input", backtest_opt.input, "Transaction CSV (for ranking)")
        ->required();
    backtest->add_option("--out", backtest_opt.out_dir, "Output directory")->required();
    backtest->add_option("--series", backtest_opt.series_path,
                         "Series JSON (default: <out>/series.json)");
    backtest->add_option("--criterion", backtest_opt.criterion,
                         "Ranking criterion: profit|turnover|quantity");
    auto* coverage_flag = backtest->add_option("--coverage", backtest_opt.coverage,
                                               "Coverage cut in (0,1], default 0.9");
    backtest->add_option("--top-n", backtest_opt.top_n, "Select the top N items instead")
        ->excludes(coverage_flag);
    backtest->add_option("--margins", backtest_opt.margins_path,
                         "Unit margin sidecar CSV (item_code,unit_margin)");
    backtest->add_option("--conversion", backtest_opt.conversion_path,
                         "Unit conversion sidecar CSV");
    backtest->add_option("--max-history-years", backtest_opt.max_history_years,
                         "History window in years")
        ->check(CLI::PositiveNumber);
    backtest->add_option("--zero-policy", backtest_opt.zero_policy,
                         "Zero-actual policy: skip|error");
    backtest->add_option("--jobs", backtest_opt.jobs,
                         "Worker threads (default: FORECASTLAB_JOBS or all cores)");
    backtest->add_option("--fourier-order", backtest_opt.fit.fourier_order,
                         "Yearly Fourier harmonics (1..5)");
    backtest->add_option("--n-changepoints", backtest_opt.fit.n_changepoints,
                         "Trend changepoints");
    backtest->add_option("--lambda-delta", backtest_opt.fit.lambda_delta,
                         "L2 penalty on changepoint deltas");
    backtest->add_option("--lambda-season", backtest_opt.fit.lambda_season,
                         "L2 penalty on Fourier coefficients");

    ForecastOptions forecast_opt;
    CLI::App* forecast = app.add_subcommand("forecast", "Fit one item and forecast ahead");
    forecast->add_option("--series", forecast_opt.series_path, "Series JSON")->required();
    forecast->add_option("--out", forecast_opt.out_dir, "Output directory")->required();
    forecast->add_option("--item", forecast_opt.item, "Item code")->required();
    forecast->add_option("--horizon", forecast_opt.horizon, "Forecast months (default 3)");
    forecast->add_flag("--emit-model", forecast_opt.emit_model,
                       "Also write the fitted model JSON");
    forecast->add_option("--fourier-order", forecast_opt.fit.fourier_order,
                         "Yearly Fourier harmonics (1..5)");
    forecast->add_option("--n-changepoints", forecast_opt.fit.n_changepoints,
                         "Trend changepoints");
    forecast->add_option("--lambda-delta", forecast_opt.fit.lambda_delta,
                         "L2 penalty on changepoint deltas");
    forecast->add_option("--lambda-season", forecast_opt.fit.lambda_season,
                         "L2 penalty on Fourier coefficients");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (ingest->parsed()) return run_ingest(ingest_opt);
        if (backtest->parsed()) return run_backtest(backtest_opt);
        if (forecast->parsed()) return run_forecast(forecast_opt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIoOrParse;
    }
    return kExitUsage;
}
