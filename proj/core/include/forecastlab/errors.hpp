#pragma once

#include <stdexcept>
#include <string>

namespace forecastlab {

enum class Errc {
    InvalidArgument,
    ParseFailure,
    IoFailure,
    // ingest
    MissingColumn,
    MalformedRow,
    InvalidDate,
    InvalidMultiplier,
    RecordAfterEnd,
    // portfolio
    PriceDataMissing,
    ProfitDataMissing,
    InvalidCoverage,
    // metrics
    ZeroActual,
    AllSkipped,
    NegativeMape,
    // forecaster
    DegenerateInput,
    SingularSystem,
    TooShortToFit,
    NonNegativeViolation,
    // backtest
    TooShort,
    // classify
    MissingReport,
    UnexpectedReport,
    // cli
    UnknownItem,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace forecastlab
