#include "forecastlab/metrics.hpp"

#include <cmath>

#include "forecastlab/errors.hpp"

namespace forecastlab {

double percentage_error(const ErrorPair& pair) {
    if (!std::isfinite(pair.forecast) || !std::isfinite(pair.actual)) {
        raise(Errc::InvalidArgument, "percentage_error: non-finite pair");
    }
    if (pair.actual < 0.0) {
        raise(Errc::InvalidArgument, "percentage_error: negative actual");
    }
    if (pair.actual == 0.0) {
        raise(Errc::ZeroActual, "percentage_error: actual is zero");
    }
    return (pair.forecast - pair.actual) / pair.actual * 100.0;
}

MapeResult mape(std::span<const ErrorPair> pairs, ZeroPolicy policy) {
    if (pairs.empty()) {
        raise(Errc::InvalidArgument, "mape: no pairs");
    }
    double sum = 0.0;
    int used = 0;
    int skipped = 0;
    for (const ErrorPair& pair : pairs) {
        if (pair.actual == 0.0) {
            if (policy == ZeroPolicy::Error) {
                raise(Errc::ZeroActual, "mape: actual is zero");
            }
            ++skipped;
            continue;
        }
        sum += std::abs(percentage_error(pair));
        ++used;
    }
    if (used == 0) {
        raise(Errc::AllSkipped, "mape: every pair had a zero actual");
    }
    return {sum / used, used, skipped};
}

}  // namespace forecastlab
