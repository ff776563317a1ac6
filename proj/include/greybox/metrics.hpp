#pragma once

#include <span>

namespace greybox {

struct FitMetrics {
    double mse = 0.0;          // mean squared error, squared signal units
    double mae = 0.0;          // mean absolute error, signal units
    double fit_percent = 0.0;  // goodness of fit, 100 = perfect, may be negative
};

// (1/N) sum (y' - y)^2. Throws DataError on length mismatch or empty input.
double mse(std::span<const double> measured, std::span<const double> simulated);

// (1/N) sum |y' - y|.
double mae(std::span<const double> measured, std::span<const double> simulated);

// 100 (1 - ||y' - y|| / ||y' - mean(y')||). Requires N >= 2 and a
// non-constant measured series; throws NumericError("FIT undefined ...")
// when the denominator vanishes instead of dividing by zero.
double goodness_of_fit(std::span<const double> measured, std::span<const double> simulated);

// All three criteria over the series with the first warmup_samples
// excluded. The warm-up keeps the scores independent of the initial state.
FitMetrics compute_fit_metrics(std::span<const double> measured,
                               std::span<const double> simulated,
                               int warmup_samples = 720);

}  // namespace greybox
