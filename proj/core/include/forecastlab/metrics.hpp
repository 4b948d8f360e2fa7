#pragma once

#include <span>

namespace forecastlab {

struct ErrorPair {
    double forecast = 0.0;
    double actual = 0.0;
};

/// What to do with pairs whose actual is zero, where the percentage
/// error is undefined.
enum class ZeroPolicy { Skip, Error };

struct MapeResult {
    double mape = 0.0;  // percent
    int used = 0;
    int skipped = 0;
};

/// Signed relative error in percent: (forecast - actual) / actual * 100.
/// Throws ZeroActual when actual == 0.
double percentage_error(const ErrorPair& pair);

/// Mean of |percentage_error| over the pairs, in percent. Under Skip,
/// zero-actual pairs are dropped and counted; under Error they throw.
MapeResult mape(std::span<const ErrorPair> pairs, ZeroPolicy policy = ZeroPolicy::Skip);

}  // namespace forecastlab
