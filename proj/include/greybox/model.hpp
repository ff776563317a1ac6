#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace greybox {

// Lumped-capacitance network parameters for the unheated thermal zone:
// three capacitive nodes (envelope T_w, indoor air T_i, interior mass T_int)
// coupled by conductances, driven by outdoor air, four orientation-resolved
// irradiation signals and one fixed-temperature boundary node.
struct ThermalParams {
    double g_w = 0.0;     // conductance wall <-> outdoor air        [W/K]
    double g_i = 0.0;     // conductance wall <-> indoor air         [W/K]
    double g_int = 0.0;   // conductance indoor air <-> interior     [W/K]
    double g_f = 0.0;     // conductance indoor air <-> fixed node   [W/K]
    double g_fast = 0.0;  // ventilation/infiltration conductance    [W/K]
    double c_w = 0.0;     // envelope capacitance                    [J/K]
    double c_i = 0.0;     // indoor-air capacitance                  [J/K]
    double c_int = 0.0;   // interior capacitance                    [J/K]
    std::array<double, 4> f_irr{0.0, 0.0, 0.0, 0.0};  // solar gain N,E,S,W [m2]
    double t_fixed = 0.0;  // fixed-node temperature                 [degC]
};

// Vapour-pressure analog with two capacitive nodes (envelope P_w, indoor
// air P_i). g_f couples the indoor node to a fixed vapour-pressure source;
// g_f = 0 disables that node and recovers the plain two-node model.
// Hygric conductance/capacitance units are abstract but must be consistent.
struct HygricParams {
    double g_w = 0.0;
    double g_i = 0.0;
    double g_fast = 0.0;
    double g_f = 0.0;
    double c_w = 0.0;
    double c_i = 0.0;
    double p_fixed = 0.0;  // fixed-node vapour pressure [Pa]
};

// Continuous-time LTI system xdot = A x + B u, y = C x + D u.
struct StateSpaceModel {
    Eigen::MatrixXd a;  // n x n
    Eigen::MatrixXd b;  // n x m
    Eigen::MatrixXd c;  // p x n
    Eigen::MatrixXd d;  // p x m
    std::vector<std::string> state_labels;
    std::vector<std::string> input_labels;
    std::vector<std::string> output_labels;

    Eigen::Index n_states() const { return a.rows(); }
    Eigen::Index n_inputs() const { return b.cols(); }
    Eigen::Index n_outputs() const { return c.rows(); }
};

// Returns one message per violated bound; empty means the parameter set is
// admissible for model construction.
std::vector<std::string> validate_params(const ThermalParams& p);
std::vector<std::string> validate_params(const HygricParams& p);

// 3-state thermal network. States [T_w, T_i, T_int], inputs
// [T_e, I_N, I_E, I_S, I_W, T_f], single output T_i. Throws
// std::invalid_argument when validate_params reports violations.
StateSpaceModel build_thermal_model(const ThermalParams& p);

// 2-state hygric network. States [P_w, P_i], inputs [P_e, P_f],
// single output P_i.
StateSpaceModel build_hygric_model(const HygricParams& p);

// Steady state -A^-1 B u for a constant input vector.
Eigen::VectorXd steady_state(const StateSpaceModel& model, const Eigen::VectorXd& u);

}  // namespace greybox
