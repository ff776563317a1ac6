#pragma once

#include <string>

#include "greybox/timeseries.hpp"

namespace greybox {

// Header must be exactly: timestamp,t_e,irr_n,irr_e,irr_s,irr_w,p_e
// Timestamps are ISO-8601 UTC on a monotone hourly grid; skipped hours become
// flagged missing samples, empty cells become missing values.
ClimateDataset load_climate_csv(const std::string& path);

// Header: timestamp plus any of t_i, rh_i, p_i; `column` picks one. Uniform
// sub-hourly steps that divide 3600 s are accepted for later resampling.
TimeSeries load_measurements_csv(const std::string& path, const std::string& column);

// Value columns present in a measurement file, header order preserved.
std::vector<std::string> measurement_columns(const std::string& path);

struct NamedSeries {
    std::string name;
    TimeSeries series;
};

// Any two-column timestamp,value file on a uniform grid.
NamedSeries load_series_csv(const std::string& path);

void write_timeseries_csv(const std::string& path, const TimeSeries& series,
                          const std::string& value_header);

void write_climate_csv(const std::string& path, const ClimateDataset& climate);

// Write-to-temp plus rename, so failures never leave partial output behind.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace greybox
