#include "greybox/psychro.hpp"

#include <cmath>
#include <sstream>

#include "greybox/errors.hpp"

namespace greybox {

namespace {

void check_temperature(double t) {
    if (!std::isfinite(t) || t < -40.0 || t > 60.0) {
        std::ostringstream os;
        os << "temperature " << t << " degC outside Magnus validity range [-40, 60]";
        throw DataError(os.str());
    }
}

}  // namespace

double saturation_vapour_pressure(double t_celsius) {
    check_temperature(t_celsius);
    return 611.2 * std::exp(17.62 * t_celsius / (243.12 + t_celsius));
}

double rh_to_vapour_pressure(double t_celsius, double rh_percent) {
    check_temperature(t_celsius);
    if (!std::isfinite(rh_percent) || rh_percent < 0.0 || rh_percent > 100.0) {
        std::ostringstream os;
        os << "relative humidity " << rh_percent << " outside [0, 100]";
        throw DataError(os.str());
    }
    return rh_percent / 100.0 * saturation_vapour_pressure(t_celsius);
}

RhConversion vapour_pressure_to_rh(double t_celsius, double p_pascal) {
    check_temperature(t_celsius);
    if (!std::isfinite(p_pascal)) throw DataError("vapour pressure is not finite");
    const double p_sat = saturation_vapour_pressure(t_celsius);
    RhConversion out;
    if (p_pascal < 0.0) {
        out.rh_percent = 0.0;
        out.clamped = true;
    } else if (p_pascal > p_sat) {
        out.rh_percent = 100.0;
        out.clamped = true;
    } else {
        out.rh_percent = 100.0 * p_pascal / p_sat;
    }
    return out;
}

}  // namespace greybox
