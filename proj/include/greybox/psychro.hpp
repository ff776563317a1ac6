#pragma once

namespace greybox {

// Magnus saturation vapour pressure over water, valid for t in [-40, 60] degC.
double saturation_vapour_pressure(double t_celsius);

double rh_to_vapour_pressure(double t_celsius, double rh_percent);

struct RhConversion {
    double rh_percent = 0.0;
    bool clamped = false;  // true when p fell outside [0, p_sat(t)]
};

RhConversion vapour_pressure_to_rh(double t_celsius, double p_pascal);

}  // namespace greybox
