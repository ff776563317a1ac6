#include "greybox/metrics.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>

#include "greybox/errors.hpp"

namespace greybox {

namespace {

void check_pair(std::span<const double> measured, std::span<const double> simulated,
                size_t min_len) {
    if (measured.size() != simulated.size()) {
        std::ostringstream os;
        os << "metrics: series length mismatch (" << measured.size() << " vs "
           << simulated.size() << ")";
        throw DataError(os.str());
    }
    if (measured.size() < min_len) {
        std::ostringstream os;
        os << "metrics: need at least " << min_len << " samples, got " << measured.size();
        throw DataError(os.str());
    }
}

}  // namespace

double mse(std::span<const double> measured, std::span<const double> simulated) {
    check_pair(measured, simulated, 1);
    double acc = 0.0;
    for (size_t i = 0; i < measured.size(); ++i) {
        const double e = measured[i] - simulated[i];
        acc += e * e;
    }
    return acc / static_cast<double>(measured.size());
}

double mae(std::span<const double> measured, std::span<const double> simulated) {
    check_pair(measured, simulated, 1);
    double acc = 0.0;
    for (size_t i = 0; i < measured.size(); ++i) acc += std::abs(measured[i] - simulated[i]);
    return acc / static_cast<double>(measured.size());
}

double goodness_of_fit(std::span<const double> measured, std::span<const double> simulated) {
    check_pair(measured, simulated, 2);

    bool constant = true;
    for (const double v : measured)
        if (v != measured[0]) {
            constant = false;
            break;
        }
    if (constant) throw NumericError("FIT undefined: measured series is constant");

    double mean = 0.0;
    for (const double v : measured) mean += v;
    mean /= static_cast<double>(measured.size());

    double err_sq = 0.0;
    double dev_sq = 0.0;
    for (size_t i = 0; i < measured.size(); ++i) {
        const double e = measured[i] - simulated[i];
        const double d = measured[i] - mean;
        err_sq += e * e;
        dev_sq += d * d;
    }
    if (dev_sq <= 0.0)
        throw NumericError("FIT undefined: measured series is constant");
    return 100.0 * (1.0 - std::sqrt(err_sq) / std::sqrt(dev_sq));
}

FitMetrics compute_fit_metrics(std::span<const double> measured,
                               std::span<const double> simulated, int warmup_samples) {
    check_pair(measured, simulated, 1);
    const size_t skip = warmup_samples > 0 ? static_cast<size_t>(warmup_samples) : 0;
    if (skip >= measured.size()) {
        std::ostringstream os;
        os << "metrics: warm-up of " << skip << " samples leaves no fit window (series has "
           << measured.size() << ")";
        throw DataError(os.str());
    }
    const auto m = measured.subspan(skip);
    const auto s = simulated.subspan(skip);
    FitMetrics out;
    out.mse = mse(m, s);
    out.mae = mae(m, s);
    out.fit_percent = goodness_of_fit(m, s);
    return out;
}

}  // namespace greybox
