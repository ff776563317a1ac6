#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "greybox/discretize.hpp"
#include "greybox/model.hpp"

namespace greybox {

struct SimulationResult {
    std::vector<double> times;  // seconds from start, one per input column
    Eigen::MatrixXd outputs;    // p x N
    Eigen::MatrixXd states;     // n x N when recorded, otherwise 0 x 0
};

// Recurrence x[k+1] = ad x[k] + bd u[k], y[k] = c x[k] + d u[k].
// inputs is m x N; the k-th column is held over step k. No per-step heap
// allocation beyond the result storage.
SimulationResult simulate_discrete(const DiscreteModel& dmodel,
                                   const Eigen::MatrixXd& inputs,
                                   const Eigen::VectorXd& x0,
                                   bool record_states = false);

// Adaptive embedded Runge-Kutta 2(3) pair (Bogacki-Shampine) integrating
// the continuous model under the same zero-order-hold inputs, sampled at
// the grid points k*dt. Cross-validation reference for the discrete path.
// Throws NumericError on step-size underflow, reporting the failure time.
SimulationResult simulate_ode_reference(const StateSpaceModel& model,
                                        const Eigen::MatrixXd& inputs,
                                        const Eigen::VectorXd& x0,
                                        double rtol, double atol,
                                        double dt = 3600.0,
                                        bool record_states = false);

struct BenchmarkRow {
    double horizon_hours = 0.0;
    std::string integrator;  // "state-space" or "ode23"
    double wall_seconds = 0.0;
    bool skipped = false;
};

// Times both integrators over the given horizons on synthetic inputs.
// ODE rows above ode_cap_hours are emitted as skipped.
std::vector<BenchmarkRow> benchmark(const StateSpaceModel& model,
                                    const std::vector<double>& horizons_hours,
                                    double ode_cap_hours = 8760.0,
                                    double dt = 3600.0);

// Deterministic waveform inputs for benchmarking, m rows by n_steps columns.
Eigen::MatrixXd make_benchmark_inputs(Eigen::Index m, Eigen::Index n_steps);

}  // namespace greybox
