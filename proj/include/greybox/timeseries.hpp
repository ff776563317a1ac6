#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace greybox {

enum class SampleFlag : uint8_t {
    kPresent = 0,
    kMissing = 1,
    kFilled = 2,
};

// Uniformly sampled scalar series. Missing samples hold NaN and are flagged;
// kFilled marks values reconstructed by resample_hourly's gap in-fill.
struct TimeSeries {
    int64_t start = 0;  // UTC seconds since epoch
    long step = 3600;   // seconds
    std::vector<double> values;
    std::vector<SampleFlag> flags;
    std::string unit;

    [[nodiscard]] size_t size() const { return values.size(); }
    [[nodiscard]] bool usable(size_t i) const { return flags[i] != SampleFlag::kMissing; }
    [[nodiscard]] bool complete() const;
    [[nodiscard]] int64_t time_at(size_t i) const {
        return start + static_cast<int64_t>(i) * step;
    }
};

TimeSeries make_series(int64_t start, long step, std::vector<double> values,
                       std::string unit = "");

struct ClimateDataset {
    TimeSeries t_e;    // outdoor temperature [degC]
    TimeSeries irr_n;  // irradiation on vertical surfaces [W/m2]
    TimeSeries irr_e;
    TimeSeries irr_s;
    TimeSeries irr_w;
    TimeSeries p_e;    // outdoor vapour pressure [Pa]

    [[nodiscard]] size_t size() const { return t_e.size(); }
    [[nodiscard]] int64_t start() const { return t_e.start; }
    [[nodiscard]] long step() const { return t_e.step; }
};

// Shared start/step/length across the six series, irradiation >= 0.
void validate_climate(const ClimateDataset& climate);

// Sub-hourly samples are averaged per hour; super-hourly steps expand onto the
// hourly grid. Gaps up to 6 hours are linearly in-filled and flagged kFilled,
// longer runs stay missing.
TimeSeries resample_hourly(const TimeSeries& series);

ClimateDataset resample_climate_hourly(const ClimateDataset& climate);

struct Alignment {
    size_t climate_offset = 0;
    size_t measured_offset = 0;
    size_t length = 0;
};

// Overlap of two hourly grids; throws DataError when steps differ from 3600 s,
// grids are phase-shifted, or the overlap is empty.
Alignment align_hourly(const ClimateDataset& climate, const TimeSeries& measured);

int64_t parse_iso8601(const std::string& text);
std::string format_iso8601(int64_t epoch_seconds);

}  // namespace greybox
