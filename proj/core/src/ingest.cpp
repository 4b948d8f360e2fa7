#include "forecastlab/ingest.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "forecastlab/errors.hpp"
#include "forecastlab/text.hpp"

namespace forecastlab {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    size_t start = 0;
    while (true) {
        const size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

struct CsvHeader {
    std::vector<std::string> columns;

    int find(std::string_view name) const {
        for (size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) return static_cast<int>(i);
        }
        return -1;
    }
};

CsvHeader read_header(std::istream& source) {
    std::string line;
    if (!std::getline(source, line)) {
        raise(Errc::MissingColumn, "empty input: no header row");
    }
    CsvHeader header;
    for (std::string_view field : split_fields(line)) {
        header.columns.emplace_back(field);
    }
    return header;
}

[[noreturn]] void malformed(size_t line_no, const std::string& why) {
    raise(Errc::MalformedRow, "line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

std::vector<SalesRecord> parse_sales_csv(std::istream& source) {
    const CsvHeader header = read_header(source);
    const int col_item = header.find("item_code");
    const int col_date = header.find("date");
    const int col_qty = header.find("quantity");
    const int col_price = header.find("unit_price");  // optional
    for (auto [idx, name] : {std::pair{col_item, "item_code"},
                             std::pair{col_date, "date"},
                             std::pair{col_qty, "quantity"}}) {
        if (idx < 0) raise(Errc::MissingColumn, std::string("missing required column: ") + name);
    }

    std::vector<SalesRecord> records;
    std::string line;
    size_t line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        const std::string_view stripped = trim(line);
        if (stripped.empty()) continue;
        const auto fields = split_fields(stripped);
        if (fields.size() > header.columns.size()) {
            malformed(line_no, "more fields than header columns");
        }
        auto field_at = [&](int idx) -> std::string_view {
            return idx >= 0 && static_cast<size_t>(idx) < fields.size() ? fields[idx]
                                                                        : std::string_view{};
        };

        SalesRecord record;
        record.item_code = std::string(field_at(col_item));
        if (record.item_code.empty()) malformed(line_no, "empty item_code");

        const std::string_view date_text = field_at(col_date);
        const ParsedDate parsed = parse_date(date_text);
        if (parsed.status == DateParseStatus::Malformed) {
            malformed(line_no, "unparseable date '" + std::string(date_text) + "'");
        }
        if (parsed.status == DateParseStatus::Impossible) {
            raise(Errc::InvalidDate, "line " + std::to_string(line_no) +
                                         ": impossible calendar date '" +
                                         std::string(date_text) + "'");
        }
        record.date = parsed.date;

        const auto quantity = parse_double(field_at(col_qty));
        if (!quantity || !std::isfinite(*quantity)) {
            malformed(line_no, "unparseable quantity '" + std::string(field_at(col_qty)) + "'");
        }
        record.quantity = *quantity;

        const std::string_view price_text = field_at(col_price);
        if (!price_text.empty()) {
            const auto price = parse_double(price_text);
            if (!price || !std::isfinite(*price) || *price < 0.0) {
                malformed(line_no, "invalid unit_price '" + std::string(price_text) + "'");
            }
            record.unit_price = *price;
        }
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<SalesRecord> filter_by_date(std::span<const SalesRecord> records,
                                        Date window_end,
                                        int max_history_years) {
    if (max_history_years < 1) {
        raise(Errc::InvalidArgument, "max_history_years must be >= 1");
    }
    const Date boundary = shift_years(window_end, max_history_years);  // exclusive
    std::vector<SalesRecord> kept;
    kept.reserve(records.size());
    for (const SalesRecord& record : records) {
        if (record.date > boundary && record.date <= window_end) {
            kept.push_back(record);
        }
    }
    return kept;
}

std::vector<SalesRecord> convert_units(std::span<const SalesRecord> records,
                                       const std::map<std::string, double>& multipliers) {
    for (const auto& [item, multiplier] : multipliers) {
        if (!std::isfinite(multiplier) || multiplier <= 0.0) {
            raise(Errc::InvalidMultiplier,
                  "multiplier for '" + item + "' must be finite and > 0, got " +
                      format_double(multiplier));
        }
    }
    std::vector<SalesRecord> converted(records.begin(), records.end());
    for (SalesRecord& record : converted) {
        const auto it = multipliers.find(record.item_code);
        if (it != multipliers.end()) record.quantity *= it->second;
    }
    return converted;
}

int AggregateResult::total_floored_months() const {
    int total = 0;
    for (const auto& [_, count] : floored_months) total += count;
    return total;
}

AggregateResult aggregate_monthly(std::span<const SalesRecord> records, YearMonth dataset_end) {
    // First pass: per-item first month and per-month sums.
    struct Accum {
        YearMonth first;
        std::map<int, double> by_month;  // month index -> net quantity
    };
    std::map<std::string, Accum> accums;
    for (const SalesRecord& record : records) {
        const YearMonth month = YearMonth::of(record.date);
        if (month > dataset_end) {
            raise(Errc::RecordAfterEnd, "record for '" + record.item_code + "' dated " +
                                            to_string(record.date) + " is after dataset end " +
                                            dataset_end.str());
        }
        auto [it, inserted] = accums.try_emplace(record.item_code, Accum{month, {}});
        if (!inserted && month < it->second.first) it->second.first = month;
        it->second.by_month[month.index()] += record.quantity;
    }

    AggregateResult result;
    for (auto& [item, accum] : accums) {
        MonthlySeries series;
        series.item_code = item;
        series.start_month = accum.first;
        const int n = months_between(accum.first, dataset_end) + 1;
        series.values.assign(n, 0.0);
        int floored = 0;
        for (const auto& [month_index, net] : accum.by_month) {
            const int offset = month_index - accum.first.index();
            if (net < 0.0) {
                ++floored;
            } else {
                series.values[offset] = net;
            }
        }
        if (floored > 0) result.floored_months[item] = floored;
        result.series.emplace(item, std::move(series));
    }
    return result;
}

std::map<std::string, double> parse_sidecar_csv(std::istream& source,
                                                std::string_view value_column) {
    const CsvHeader header = read_header(source);
    const int col_item = header.find("item_code");
    const int col_value = header.find(value_column);
    if (col_item < 0) raise(Errc::MissingColumn, "missing required column: item_code");
    if (col_value < 0) {
        raise(Errc::MissingColumn, "missing required column: " + std::string(value_column));
    }

    std::map<std::string, double> table;
    std::string line;
    size_t line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        const std::string_view stripped = trim(line);
        if (stripped.empty()) continue;
        const auto fields = split_fields(stripped);
        const size_t needed = static_cast<size_t>(std::max(col_item, col_value));
        if (fields.size() <= needed) malformed(line_no, "too few fields");
        const std::string item(fields[col_item]);
        if (item.empty()) malformed(line_no, "empty item_code");
        const auto value = parse_double(fields[col_value]);
        if (!value) {
            malformed(line_no, "unparseable " + std::string(value_column) + " '" +
                                   std::string(fields[col_value]) + "'");
        }
        table[item] = *value;
    }
    return table;
}

void write_series_json(std::ostream& out, const std::map<std::string, MonthlySeries>& series) {
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& [item, s] : series) {
        nlohmann::json entry;
        entry["item_code"] = s.item_code;
        entry["start_month"] = s.start_month.str();
        entry["values"] = s.values;
        doc[item] = std::move(entry);
    }
    out << doc.dump(2) << '\n';
}

std::map<std::string, MonthlySeries> read_series_json(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        raise(Errc::ParseFailure, std::string("series JSON: ") + e.what());
    }
    if (!doc.is_object()) raise(Errc::ParseFailure, "series JSON: top level must be an object");

    std::map<std::string, MonthlySeries> series;
    for (const auto& [key, entry] : doc.items()) {
        MonthlySeries s;
        try {
            s.item_code = entry.at("item_code").get<std::string>();
            const auto start = YearMonth::parse(entry.at("start_month").get<std::string>());
            if (!start) raise(Errc::ParseFailure, "series JSON: bad start_month for " + key);
            s.start_month = *start;
            s.values = entry.at("values").get<std::vector<double>>();
        } catch (const nlohmann::json::exception& e) {
            raise(Errc::ParseFailure, "series JSON entry '" + key + "': " + e.what());
        }
        if (s.item_code != key) {
            raise(Errc::ParseFailure, "series JSON entry '" + key + "': item_code mismatch");
        }
        if (s.values.empty()) {
            raise(Errc::ParseFailure, "series JSON entry '" + key + "': empty values");
        }
        for (double v : s.values) {
            if (!std::isfinite(v) || v < 0.0) {
                raise(Errc::ParseFailure, "series JSON entry '" + key + "': invalid value");
            }
        }
        series.emplace(key, std::move(s));
    }
    return series;
}

}  // namespace forecastlab
