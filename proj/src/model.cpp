#include "greybox/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace greybox {

namespace {

bool finite(double v) { return std::isfinite(v); }

void require_valid(const std::vector<std::string>& violations, const char* which) {
    if (violations.empty()) return;
    std::ostringstream os;
    os << which << " parameters rejected: ";
    for (size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i];
    }
    throw std::invalid_argument(os.str());
}

void check_positive(std::vector<std::string>& out, const char* name, double v) {
    if (!finite(v)) {
        out.push_back(std::string(name) + " must be finite");
    } else if (v <= 0.0) {
        out.push_back(std::string(name) + " must be > 0");
    }
}

void check_non_negative(std::vector<std::string>& out, const char* name, double v) {
    if (!finite(v)) {
        out.push_back(std::string(name) + " must be finite");
    } else if (v < 0.0) {
        out.push_back(std::string(name) + " must be >= 0");
    }
}

void check_finite(std::vector<std::string>& out, const char* name, double v) {
    if (!finite(v)) out.push_back(std::string(name) + " must be finite");
}

}  // namespace

std::vector<std::string> validate_params(const ThermalParams& p) {
    std::vector<std::string> v;
    check_positive(v, "g_w", p.g_w);
    check_positive(v, "g_i", p.g_i);
    check_positive(v, "g_int", p.g_int);
    check_positive(v, "g_f", p.g_f);
    check_positive(v, "g_fast", p.g_fast);
    check_positive(v, "c_w", p.c_w);
    check_positive(v, "c_i", p.c_i);
    check_positive(v, "c_int", p.c_int);
    static const char* kIrrNames[4] = {"f_irr_n", "f_irr_e", "f_irr_s", "f_irr_w"};
    for (int i = 0; i < 4; ++i) check_non_negative(v, kIrrNames[i], p.f_irr[static_cast<size_t>(i)]);
    check_finite(v, "t_fixed", p.t_fixed);
    return v;
}

std::vector<std::string> validate_params(const HygricParams& p) {
    std::vector<std::string> v;
    check_positive(v, "g_w", p.g_w);
    check_positive(v, "g_i", p.g_i);
    check_positive(v, "g_fast", p.g_fast);
    check_non_negative(v, "g_f", p.g_f);
    check_positive(v, "c_w", p.c_w);
    check_positive(v, "c_i", p.c_i);
    check_non_negative(v, "p_fixed", p.p_fixed);
    return v;
}

StateSpaceModel build_thermal_model(const ThermalParams& p) {
    require_valid(validate_params(p), "thermal");

    StateSpaceModel m;
    m.a = Eigen::MatrixXd::Zero(3, 3);
    m.b = Eigen::MatrixXd::Zero(3, 6);
    m.c = Eigen::MatrixXd::Zero(1, 3);
    m.d = Eigen::MatrixXd::Zero(1, 6);

    // Envelope node: exchange with outdoor air and indoor air.
    m.a(0, 0) = (-p.g_w - p.g_i) / p.c_w;
    m.a(0, 1) = p.g_i / p.c_w;

    // Indoor-air node: wall, fixed node, interior, ventilation; all solar
    // gain enters here.
    m.a(1, 0) = p.g_i / p.c_i;
    m.a(1, 1) = (-p.g_i - p.g_f - p.g_int - p.g_fast) / p.c_i;
    m.a(1, 2) = p.g_int / p.c_i;

    // Interior node: coupled to indoor air only.
    m.a(2, 1) = p.g_int / p.c_int;
    m.a(2, 2) = -p.g_int / p.c_int;

    m.b(0, 0) = p.g_w / p.c_w;
    m.b(1, 0) = p.g_fast / p.c_i;
    for (int i = 0; i < 4; ++i) m.b(1, 1 + i) = p.f_irr[static_cast<size_t>(i)] / p.c_i;
    m.b(1, 5) = p.g_f / p.c_i;

    m.c(0, 1) = 1.0;  // observe T_i

    m.state_labels = {"T_w", "T_i", "T_int"};
    m.input_labels = {"T_e", "I_N", "I_E", "I_S", "I_W", "T_f"};
    m.output_labels = {"T_i"};
    return m;
}

StateSpaceModel build_hygric_model(const HygricParams& p) {
    require_valid(validate_params(p), "hygric");

    StateSpaceModel m;
    m.a = Eigen::MatrixXd::Zero(2, 2);
    m.b = Eigen::MatrixXd::Zero(2, 2);
    m.c = Eigen::MatrixXd::Zero(1, 2);
    m.d = Eigen::MatrixXd::Zero(1, 2);

    m.a(0, 0) = (-p.g_w - p.g_i) / p.c_w;
    m.a(0, 1) = p.g_i / p.c_w;
    m.a(1, 0) = p.g_i / p.c_i;
    m.a(1, 1) = (-p.g_i - p.g_fast - p.g_f) / p.c_i;

    m.b(0, 0) = p.g_w / p.c_w;
    m.b(1, 0) = p.g_fast / p.c_i;
    m.b(1, 1) = p.g_f / p.c_i;

    m.c(0, 1) = 1.0;  // observe P_i

    m.state_labels = {"P_w", "P_i"};
    m.input_labels = {"P_e", "P_f"};
    m.output_labels = {"P_i"};
    return m;
}

Eigen::VectorXd steady_state(const StateSpaceModel& model, const Eigen::VectorXd& u) {
    if (u.size() != model.n_inputs())
        throw std::invalid_argument("steady_state: input vector size mismatch");
    return model.a.partialPivLu().solve(-(model.b * u));
}

}  // namespace greybox
