#include "greybox/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "greybox/errors.hpp"

namespace greybox {

namespace {

constexpr long kHour = 3600;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void fail_at(const std::string& path, size_t line, const std::string& what) {
    std::ostringstream os;
    os << path << ":" << line << ": " << what;
    throw DataError(os.str());
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    if (lines.empty()) throw DataError(path + ": file is empty");
    return lines;
}

// Empty cell means missing; otherwise the cell must parse fully as one double.
bool parse_cell(const std::string& cell, double& value) {
    if (cell.empty()) {
        value = kNaN;
        return true;
    }
    char* end = nullptr;
    value = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') return false;
    if (std::isnan(value)) value = kNaN;
    return true;
}

struct RawRows {
    std::vector<int64_t> times;
    std::vector<size_t> source_lines;
    std::vector<std::vector<double>> values;  // one vector per value column
};

RawRows parse_rows(const std::string& path, const std::vector<std::string>& lines,
                   size_t n_value_columns) {
    RawRows raw;
    raw.values.resize(n_value_columns);
    for (size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const auto fields = split_csv_line(lines[li]);
        if (fields.size() != n_value_columns + 1) {
            std::ostringstream os;
            os << "expected " << n_value_columns + 1 << " fields, got " << fields.size();
            fail_at(path, li + 1, os.str());
        }
        int64_t t = 0;
        try {
            t = parse_iso8601(fields[0]);
        } catch (const DataError& e) {
            fail_at(path, li + 1, e.what());
        }
        if (!raw.times.empty() && t <= raw.times.back())
            fail_at(path, li + 1, "timestamps are not strictly increasing");
        raw.times.push_back(t);
        raw.source_lines.push_back(li + 1);
        for (size_t c = 0; c < n_value_columns; ++c) {
            double v = 0.0;
            if (!parse_cell(fields[c + 1], v))
                fail_at(path, li + 1, "cannot parse value '" + fields[c + 1] + "'");
            raw.values[c].push_back(v);
        }
    }
    if (raw.times.empty()) throw DataError(path + ": no data rows");
    return raw;
}

// Expand parsed rows onto a uniform grid, flagging skipped steps as missing.
TimeSeries to_grid(const std::string& path, const std::vector<int64_t>& times,
                   const std::vector<double>& values, long step) {
    const int64_t span = times.back() - times.front();
    const auto n = static_cast<size_t>(span / step) + 1;
    TimeSeries s;
    s.start = times.front();
    s.step = step;
    s.values.assign(n, kNaN);
    s.flags.assign(n, SampleFlag::kMissing);
    for (size_t i = 0; i < times.size(); ++i) {
        const int64_t offset = times[i] - times.front();
        if (offset % step != 0) {
            std::ostringstream os;
            os << "timestamp " << format_iso8601(times[i]) << " is off the " << step
               << " s grid";
            throw DataError(path + ": " + os.str());
        }
        const auto idx = static_cast<size_t>(offset / step);
        if (std::isfinite(values[i])) {
            s.values[idx] = values[i];
            s.flags[idx] = SampleFlag::kPresent;
        }
    }
    return s;
}

long infer_step(const std::vector<int64_t>& times) {
    if (times.size() < 2) return kHour;
    int64_t step = std::numeric_limits<int64_t>::max();
    for (size_t i = 1; i < times.size(); ++i) step = std::min(step, times[i] - times[i - 1]);
    return static_cast<long>(step);
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

ClimateDataset load_climate_csv(const std::string& path) {
    const auto lines = read_lines(path);
    static const std::string kHeader = "timestamp,t_e,irr_n,irr_e,irr_s,irr_w,p_e";
    if (lines[0] != kHeader)
        throw DataError(path + ": header mismatch, expected '" + kHeader + "'");

    const auto raw = parse_rows(path, lines, 6);
    for (size_t i = 1; i < raw.times.size(); ++i) {
        if ((raw.times[i] - raw.times[i - 1]) % kHour != 0) {
            std::ostringstream os;
            os << path << ": timestamp " << format_iso8601(raw.times[i])
               << " breaks the hourly grid";
            throw DataError(os.str());
        }
    }

    static const char* kColumns[] = {"t_e", "irr_n", "irr_e", "irr_s", "irr_w", "p_e"};
    for (int c = 1; c <= 5; ++c) {
        for (size_t i = 0; i < raw.values[c].size(); ++i) {
            const double v = raw.values[c][i];
            if (std::isfinite(v) && v < 0.0) {
                std::ostringstream os;
                os << "column " << kColumns[c] << " is negative (" << v << ")";
                fail_at(path, raw.source_lines[i], os.str());
            }
        }
    }

    ClimateDataset ds;
    TimeSeries* out[] = {&ds.t_e, &ds.irr_n, &ds.irr_e, &ds.irr_s, &ds.irr_w, &ds.p_e};
    const char* units[] = {"degC", "W/m2", "W/m2", "W/m2", "W/m2", "Pa"};
    for (int c = 0; c < 6; ++c) {
        *out[c] = to_grid(path, raw.times, raw.values[c], kHour);
        out[c]->unit = units[c];
    }
    validate_climate(ds);
    return ds;
}

TimeSeries load_measurements_csv(const std::string& path, const std::string& column) {
    const auto lines = read_lines(path);
    const auto header = split_csv_line(lines[0]);
    if (header.empty() || header[0] != "timestamp")
        throw DataError(path + ": first header column must be 'timestamp'");
    static const char* kAllowed[] = {"t_i", "rh_i", "p_i"};
    for (size_t c = 1; c < header.size(); ++c) {
        if (std::find(std::begin(kAllowed), std::end(kAllowed), header[c]) ==
            std::end(kAllowed))
            throw DataError(path + ": unexpected column '" + header[c] + "'");
    }
    size_t col = 0;
    for (size_t c = 1; c < header.size(); ++c)
        if (header[c] == column) col = c;
    if (col == 0) throw DataError(path + ": column '" + column + "' absent");

    const auto raw = parse_rows(path, lines, header.size() - 1);
    const auto& values = raw.values[col - 1];
    if (column == "rh_i") {
        for (size_t i = 0; i < values.size(); ++i) {
            if (std::isfinite(values[i]) && (values[i] < 0.0 || values[i] > 100.0)) {
                std::ostringstream os;
                os << "rh_i = " << values[i] << " outside [0, 100]";
                fail_at(path, raw.source_lines[i], os.str());
            }
        }
    }
    if (column == "p_i") {
        for (size_t i = 0; i < values.size(); ++i) {
            if (std::isfinite(values[i]) && values[i] < 0.0) {
                std::ostringstream os;
                os << "p_i = " << values[i] << " is negative";
                fail_at(path, raw.source_lines[i], os.str());
            }
        }
    }

    const long step = infer_step(raw.times);
    if (step <= 0) throw DataError(path + ": cannot infer a positive step");
    if (kHour % step != 0 && step % kHour != 0)
        throw DataError(path + ": step " + std::to_string(step) +
                        " s neither divides nor is divided by 3600 s");
    TimeSeries s = to_grid(path, raw.times, values, step);
    s.unit = column == "t_i" ? "degC" : (column == "rh_i" ? "%" : "Pa");
    return s;
}

std::vector<std::string> measurement_columns(const std::string& path) {
    const auto lines = read_lines(path);
    const auto header = split_csv_line(lines[0]);
    if (header.empty() || header[0] != "timestamp")
        throw DataError(path + ": first header column must be 'timestamp'");
    return {header.begin() + 1, header.end()};
}

NamedSeries load_series_csv(const std::string& path) {
    const auto lines = read_lines(path);
    const auto header = split_csv_line(lines[0]);
    if (header.size() != 2 || header[0] != "timestamp")
        throw DataError(path + ": expected header 'timestamp,<value>'");

    const auto raw = parse_rows(path, lines, 1);
    const long step = infer_step(raw.times);
    if (step <= 0) throw DataError(path + ": cannot infer a positive step");
    NamedSeries out;
    out.name = header[1];
    out.series = to_grid(path, raw.times, raw.values[0], step);
    return out;
}

void write_timeseries_csv(const std::string& path, const TimeSeries& series,
                          const std::string& value_header) {
    std::ostringstream os;
    os << "timestamp," << value_header << "\n";
    for (size_t i = 0; i < series.size(); ++i) {
        os << format_iso8601(series.time_at(i)) << ",";
        if (series.flags[i] != SampleFlag::kMissing) os << format_value(series.values[i]);
        os << "\n";
    }
    write_file_atomic(path, os.str());
}

void write_climate_csv(const std::string& path, const ClimateDataset& climate) {
    validate_climate(climate);
    std::ostringstream os;
    os << "timestamp,t_e,irr_n,irr_e,irr_s,irr_w,p_e\n";
    const TimeSeries* series[] = {&climate.t_e,   &climate.irr_n, &climate.irr_e,
                                  &climate.irr_s, &climate.irr_w, &climate.p_e};
    for (size_t i = 0; i < climate.size(); ++i) {
        os << format_iso8601(climate.t_e.time_at(i));
        for (const TimeSeries* s : series) {
            os << ",";
            if (s->flags[i] != SampleFlag::kMissing) os << format_value(s->values[i]);
        }
        os << "\n";
    }
    write_file_atomic(path, os.str());
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw DataError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        throw DataError("cannot rename " + tmp.string() + " to " + target.string() + ": " +
                        ec.message());
    }
}

}  // namespace greybox
