#pragma once

#include <Eigen/Dense>

#include "greybox/model.hpp"

namespace greybox {

// Exact zero-order-hold discretization of a continuous LTI system:
// x[k+1] = ad x[k] + bd u[k] with u held constant over each step.
struct DiscreteModel {
    Eigen::MatrixXd ad;
    Eigen::MatrixXd bd;
    Eigen::MatrixXd c;
    Eigen::MatrixXd d;
    double dt = 0.0;  // step [s]

    Eigen::Index n_states() const { return ad.rows(); }
    Eigen::Index n_inputs() const { return bd.cols(); }
    Eigen::Index n_outputs() const { return c.rows(); }
};

// exp(m) by scaling-and-squaring with a [13/13] Pade core.
// Throws std::invalid_argument on non-square or non-finite input.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m);

// ad = exp(A dt); bd from the upper-right block of the augmented
// exponential exp([[A, B], [0, 0]] dt), so singular A needs no inverse.
DiscreteModel discretize_zoh(const StateSpaceModel& model, double dt);

}  // namespace greybox
