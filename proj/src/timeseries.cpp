#include "greybox/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "greybox/errors.hpp"

namespace greybox {

namespace {

constexpr long kHour = 3600;
constexpr size_t kMaxFillHours = 6;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

// Howard Hinnant's civil calendar algorithms.
int64_t days_from_civil(int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t yr = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = yr + (m <= 2);
}

bool is_leap(int64_t y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

unsigned days_in_month(int64_t y, unsigned m) {
    static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

// In-fill missing runs of <= kMaxFillHours samples bounded by usable values.
void fill_short_gaps(TimeSeries& s) {
    const size_t n = s.size();
    size_t i = 0;
    while (i < n) {
        if (s.flags[i] != SampleFlag::kMissing) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < n && s.flags[j] == SampleFlag::kMissing) ++j;
        const size_t run = j - i;
        if (i > 0 && j < n && run <= kMaxFillHours) {
            const double a = s.values[i - 1];
            const double b = s.values[j];
            for (size_t k = i; k < j; ++k) {
                const double w = static_cast<double>(k - i + 1) / static_cast<double>(run + 1);
                s.values[k] = a + w * (b - a);
                s.flags[k] = SampleFlag::kFilled;
            }
        }
        i = j;
    }
}

}  // namespace

bool TimeSeries::complete() const {
    return std::all_of(flags.begin(), flags.end(),
                       [](SampleFlag f) { return f != SampleFlag::kMissing; });
}

TimeSeries make_series(int64_t start, long step, std::vector<double> values, std::string unit) {
    if (step <= 0) throw DataError("time series step must be > 0");
    TimeSeries s;
    s.start = start;
    s.step = step;
    s.unit = std::move(unit);
    s.flags.resize(values.size());
    for (size_t i = 0; i < values.size(); ++i)
        s.flags[i] = std::isfinite(values[i]) ? SampleFlag::kPresent : SampleFlag::kMissing;
    s.values = std::move(values);
    for (size_t i = 0; i < s.values.size(); ++i)
        if (s.flags[i] == SampleFlag::kMissing) s.values[i] = kNaN;
    return s;
}

void validate_climate(const ClimateDataset& climate) {
    const TimeSeries* series[] = {&climate.t_e,   &climate.irr_n, &climate.irr_e,
                                  &climate.irr_s, &climate.irr_w, &climate.p_e};
    const char* names[] = {"t_e", "irr_n", "irr_e", "irr_s", "irr_w", "p_e"};
    if (climate.t_e.values.empty()) throw DataError("climate dataset is empty");
    for (int i = 1; i < 6; ++i) {
        if (series[i]->start != climate.t_e.start || series[i]->step != climate.t_e.step ||
            series[i]->size() != climate.t_e.size()) {
            std::ostringstream os;
            os << "climate series " << names[i] << " is not aligned with t_e";
            throw DataError(os.str());
        }
    }
    for (int i = 1; i <= 4; ++i) {
        for (size_t k = 0; k < series[i]->size(); ++k) {
            const double v = series[i]->values[k];
            if (series[i]->flags[k] != SampleFlag::kMissing && v < 0.0) {
                std::ostringstream os;
                os << "climate series " << names[i] << " has negative irradiation at index "
                   << k;
                throw DataError(os.str());
            }
        }
    }
}

TimeSeries resample_hourly(const TimeSeries& series) {
    if (series.step <= 0) throw DataError("resample_hourly: step must be > 0");
    if (series.values.empty()) throw DataError("resample_hourly: empty series");
    if (kHour % series.step != 0 && series.step % kHour != 0)
        throw DataError("resample_hourly: step must divide or be divided by 3600 s");

    TimeSeries out;
    out.unit = series.unit;
    out.step = kHour;

    if (series.step <= kHour) {
        const int64_t first_hour = series.start >= 0 ? series.start / kHour
                                                     : (series.start - kHour + 1) / kHour;
        const int64_t last_time = series.time_at(series.size() - 1);
        const int64_t last_hour = last_time >= 0 ? last_time / kHour
                                                 : (last_time - kHour + 1) / kHour;
        const auto n = static_cast<size_t>(last_hour - first_hour + 1);
        out.start = first_hour * kHour;
        out.values.assign(n, 0.0);
        out.flags.assign(n, SampleFlag::kMissing);
        std::vector<int> counts(n, 0);
        for (size_t i = 0; i < series.size(); ++i) {
            if (series.flags[i] == SampleFlag::kMissing) continue;
            const int64_t t = series.time_at(i);
            const int64_t hour = t >= 0 ? t / kHour : (t - kHour + 1) / kHour;
            const auto idx = static_cast<size_t>(hour - first_hour);
            out.values[idx] += series.values[i];
            ++counts[idx];
        }
        for (size_t i = 0; i < n; ++i) {
            if (counts[i] > 0) {
                out.values[i] /= counts[i];
                out.flags[i] = SampleFlag::kPresent;
            } else {
                out.values[i] = kNaN;
            }
        }
    } else {
        const auto ratio = static_cast<size_t>(series.step / kHour);
        const size_t n = (series.size() - 1) * ratio + 1;
        out.start = series.start;
        out.values.assign(n, kNaN);
        out.flags.assign(n, SampleFlag::kMissing);
        for (size_t i = 0; i < series.size(); ++i) {
            if (series.flags[i] == SampleFlag::kMissing) continue;
            out.values[i * ratio] = series.values[i];
            out.flags[i * ratio] = SampleFlag::kPresent;
        }
    }

    fill_short_gaps(out);
    return out;
}

ClimateDataset resample_climate_hourly(const ClimateDataset& climate) {
    ClimateDataset out;
    out.t_e = resample_hourly(climate.t_e);
    out.irr_n = resample_hourly(climate.irr_n);
    out.irr_e = resample_hourly(climate.irr_e);
    out.irr_s = resample_hourly(climate.irr_s);
    out.irr_w = resample_hourly(climate.irr_w);
    out.p_e = resample_hourly(climate.p_e);
    validate_climate(out);
    return out;
}

Alignment align_hourly(const ClimateDataset& climate, const TimeSeries& measured) {
    validate_climate(climate);
    if (climate.step() != kHour) throw DataError("climate grid is not hourly; resample first");
    if (measured.step != kHour)
        throw DataError("measurement grid is not hourly; resample first");
    if (measured.values.empty()) throw DataError("measurement series is empty");
    const int64_t phase = (measured.start - climate.start()) % kHour;
    if (phase != 0) throw DataError("hourly grids are phase-shifted; cannot align");

    const int64_t begin = std::max(climate.start(), measured.start);
    const int64_t end = std::min(climate.start() + static_cast<int64_t>(climate.size()) * kHour,
                                 measured.start + static_cast<int64_t>(measured.size()) * kHour);
    if (begin >= end) throw DataError("climate and measurement series do not overlap");

    Alignment a;
    a.climate_offset = static_cast<size_t>((begin - climate.start()) / kHour);
    a.measured_offset = static_cast<size_t>((begin - measured.start) / kHour);
    a.length = static_cast<size_t>((end - begin) / kHour);
    return a;
}

int64_t parse_iso8601(const std::string& text) {
    int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    char sep = '\0';
    char tail[8] = {0};
    const int matched = std::sscanf(text.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d%7s", &year, &month,
                                    &day, &sep, &hour, &minute, &second, tail);
    if (matched < 7 || (sep != 'T' && sep != ' '))
        throw DataError("malformed timestamp '" + text + "' (expected YYYY-MM-DDThh:mm:ssZ)");
    if (matched == 8 && std::string(tail) != "Z")
        throw DataError("malformed timestamp '" + text + "' (only UTC 'Z' suffix supported)");
    if (month < 1 || month > 12 || day < 1 ||
        day > static_cast<int>(days_in_month(year, static_cast<unsigned>(month))) || hour < 0 ||
        hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 60)
        throw DataError("timestamp '" + text + "' has out-of-range fields");

    const int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                         static_cast<unsigned>(day));
    return days * 86400 + hour * 3600 + minute * 60 + second;
}

std::string format_iso8601(int64_t epoch_seconds) {
    int64_t days = epoch_seconds / 86400;
    int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    int64_t year = 0;
    unsigned month = 0, day = 0;
    civil_from_days(days, year, month, day);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(year), month, day,
                  static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

}  // namespace greybox
