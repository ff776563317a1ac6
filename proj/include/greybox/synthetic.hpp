#pragma once

#include <cstdint>

#include "greybox/model.hpp"
#include "greybox/timeseries.hpp"

namespace greybox {

// Plausible hourly outdoor climate: annual and daily temperature harmonics with
// AR(1) weather noise, clipped half-sine irradiation per orientation, and an
// outdoor vapour pressure capped at saturation. Deterministic for a given seed.
ClimateDataset make_synthetic_climate(size_t hours, uint64_t seed,
                                      int64_t start = 1609459200 /* 2021-01-01T00:00:00Z */);

// Representative unheated-zone parameter sets for benchmarks and examples,
// with c_i at the nominal value the default bounds pin to.
ThermalParams demo_thermal_params();
HygricParams demo_hygric_params();

}  // namespace greybox
