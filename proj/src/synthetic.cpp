#include "greybox/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "greybox/errors.hpp"
#include "greybox/psychro.hpp"

namespace greybox {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Daytime envelope peaking at `peak_hour`, zero outside a 12 h window.
double irradiation(double hour_of_day, double peak_hour, double amplitude) {
    const double phase = (hour_of_day - (peak_hour - 6.0)) / 12.0;
    if (phase <= 0.0 || phase >= 1.0) return 0.0;
    return amplitude * std::sin(std::numbers::pi * phase);
}

}  // namespace

ClimateDataset make_synthetic_climate(size_t hours, uint64_t seed, int64_t start) {
    if (hours == 0) throw ConfigError("synthetic climate needs at least one hour");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<double> t_e(hours), irr[4], p_e(hours);
    for (auto& v : irr) v.resize(hours);

    double weather = 0.0;  // slow AR(1) temperature disturbance
    double humid = 0.0;
    for (size_t k = 0; k < hours; ++k) {
        const double hour_of_day = static_cast<double>(k % 24);
        const double year_phase = static_cast<double>(k) / 8760.0;
        weather = 0.98 * weather + 0.35 * gauss(rng);
        humid = 0.95 * humid + 20.0 * gauss(rng);

        t_e[k] = 10.0 + 8.0 * std::sin(kTwoPi * (year_phase - 0.25)) +
                 4.0 * std::sin(kTwoPi * (hour_of_day - 9.0) / 24.0) + weather;
        t_e[k] = std::clamp(t_e[k], -30.0, 45.0);

        const double season = 0.6 + 0.4 * std::sin(kTwoPi * (year_phase - 0.25));
        const double cloud = std::clamp(1.0 + 0.1 * gauss(rng), 0.0, 1.2);
        irr[0][k] = irradiation(hour_of_day, 12.0, 90.0) * season * cloud;
        irr[1][k] = irradiation(hour_of_day, 9.0, 320.0) * season * cloud;
        irr[2][k] = irradiation(hour_of_day, 12.0, 480.0) * season * cloud;
        irr[3][k] = irradiation(hour_of_day, 15.0, 320.0) * season * cloud;

        const double p_base = 1150.0 + 420.0 * std::sin(kTwoPi * (year_phase - 0.3)) +
                              60.0 * std::sin(kTwoPi * (hour_of_day - 4.0) / 24.0) + humid;
        p_e[k] = std::clamp(p_base, 80.0, saturation_vapour_pressure(t_e[k]));
    }

    ClimateDataset ds;
    ds.t_e = make_series(start, 3600, std::move(t_e), "degC");
    ds.irr_n = make_series(start, 3600, std::move(irr[0]), "W/m2");
    ds.irr_e = make_series(start, 3600, std::move(irr[1]), "W/m2");
    ds.irr_s = make_series(start, 3600, std::move(irr[2]), "W/m2");
    ds.irr_w = make_series(start, 3600, std::move(irr[3]), "W/m2");
    ds.p_e = make_series(start, 3600, std::move(p_e), "Pa");
    validate_climate(ds);
    return ds;
}

ThermalParams demo_thermal_params() {
    ThermalParams p;
    p.g_w = 60.0;
    p.g_i = 300.0;
    p.g_int = 180.0;
    p.g_f = 20.0;
    p.g_fast = 45.0;
    p.c_w = 2.5e7;
    p.c_i = 1.0e6;
    p.c_int = 8.0e6;
    p.f_irr = {0.8, 1.5, 2.5, 1.2};
    p.t_fixed = 12.0;
    return p;
}

HygricParams demo_hygric_params() {
    HygricParams p;
    p.g_w = 0.04;
    p.g_i = 0.06;
    p.g_fast = 0.05;
    p.g_f = 0.03;
    p.c_w = 3.5e4;
    p.c_i = 1.0e3;
    p.p_fixed = 1400.0;
    return p;
}

}  // namespace greybox
