#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "greybox/metrics.hpp"
#include "greybox/model.hpp"
#include "greybox/optimize.hpp"
#include "greybox/simulate.hpp"
#include "greybox/timeseries.hpp"

namespace greybox {

enum class ModelKind { kThermal, kHygric };

enum class Solver { kMultistartSimplex, kGenetic };

struct FitConfig {
    Solver solver = Solver::kMultistartSimplex;
    int n_starts = 8;
    long max_evals = 20000;  // per start for multistart, total for genetic
    double f_tol = 1e-10;
    double x_tol = 1e-9;
    uint64_t seed = 1;
    int warmup_samples = 720;
    // Hygric only: include the fixed vapour pressure source node (g_f, p_fixed)
    // in the parameter vector; false fits the reduced model with g_f = 0.
    bool fixed_node = true;
    int population = 64;
    int generations = 200;
    int polish_rounds = 2;  // simplex restarts from the incumbent after the solver
    bool parallel = true;   // evaluate multistart runs concurrently
    Bounds bounds;                // empty: default_bounds(kind, fixed_node)
    std::vector<double> initial;  // empty: default_initial(kind, fixed_node)
};

struct FitResult {
    std::vector<std::string> param_names;
    std::vector<double> params;
    double objective = 0.0;  // SSE over the post-warm-up window
    FitMetrics metrics;
    long evals = 0;
    std::vector<StartSummary> starts;
    bool converged = false;
    uint64_t seed = 0;
    std::vector<std::string> warnings;
    double elapsed_seconds = 0.0;
};

// Parameter vector layout. Only ratios are identifiable: the I/O map is
// invariant under uniform scaling of all conductances, capacitances and
// irradiance factors, so default bounds pin c_i to a tight band.
std::vector<std::string> param_names(ModelKind kind, bool fixed_node = true);
Bounds default_bounds(ModelKind kind, bool fixed_node = true);
std::vector<double> default_initial(ModelKind kind, bool fixed_node = true);

ThermalParams unpack_thermal(const std::vector<double>& x);
std::vector<double> pack_thermal(const ThermalParams& p);
HygricParams unpack_hygric(const std::vector<double>& x, bool fixed_node = true);
std::vector<double> pack_hygric(const HygricParams& p, bool fixed_node = true);

// Aligned hourly fit window shared by every objective evaluation. The last
// input row is a placeholder for the fitted fixed-source value.
struct FitData {
    Eigen::MatrixXd inputs;
    std::vector<double> measured;
    std::vector<uint8_t> mask;  // 1 = sample enters the objective
    double dt = 3600.0;
    int64_t start = 0;
};

FitData prepare_fit_data(const ClimateDataset& climate, const TimeSeries& measured,
                         ModelKind kind);

// Sum of squared output errors over usable post-warm-up samples; any failure
// (invalid draw, numeric blow-up) yields kObjectiveSentinel so solvers stay total.
double objective(const std::vector<double>& params, const ClimateDataset& climate,
                 const TimeSeries& measured, ModelKind kind, bool fixed_node = true,
                 int warmup_samples = 720);

double objective_on(const FitData& data, const std::vector<double>& params, ModelKind kind,
                    bool fixed_node, int warmup_samples);

ObjectiveFn make_objective(std::shared_ptr<const FitData> data, ModelKind kind,
                           bool fixed_node, int warmup_samples);

enum class X0Policy { kSteadyState, kZero };

// Simulate a packed parameter vector over a climate record.
SimulationResult simulate_params(const std::vector<double>& params,
                                 const ClimateDataset& climate, ModelKind kind,
                                 bool fixed_node = true, double dt = 3600.0,
                                 X0Policy x0 = X0Policy::kSteadyState);

FitResult fit(const FitConfig& config, const ClimateDataset& climate,
              const TimeSeries& measured, ModelKind kind);

}  // namespace greybox
