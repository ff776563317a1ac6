// Times sequential vs OpenMP-parallel multistart on a synthetic thermal
// identification problem and verifies both return the same incumbent.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <memory>

#include "greybox/identify.hpp"
#include "greybox/synthetic.hpp"

using namespace greybox;

namespace {

double time_run(const ObjectiveFn& obj, const std::vector<double>& initial, const Bounds& bounds,
                int n_starts, long max_evals, uint64_t seed, bool parallel,
                MultistartResult& result) {
    const auto t0 = std::chrono::steady_clock::now();
    result = multistart(obj, initial, bounds, n_starts, max_evals, 1e-10, 1e-9, seed, parallel);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const size_t hours = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 2160;
    const int n_starts = argc > 2 ? std::atoi(argv[2]) : 8;
    const long max_evals = argc > 3 ? std::atol(argv[3]) : 2000;
    const uint64_t seed = 20240601;

    const ClimateDataset climate = make_synthetic_climate(hours, seed);
    const ThermalParams truth = demo_thermal_params();
    const SimulationResult truth_sim =
        simulate_params(pack_thermal(truth), climate, ModelKind::kThermal);
    std::vector<double> measured_values(hours);
    for (size_t k = 0; k < hours; ++k)
        measured_values[k] = truth_sim.outputs(0, static_cast<Eigen::Index>(k));
    const TimeSeries measured =
        make_series(climate.start(), 3600, std::move(measured_values), "degC");

    const auto data =
        std::make_shared<const FitData>(prepare_fit_data(climate, measured, ModelKind::kThermal));
    const ObjectiveFn obj = make_objective(data, ModelKind::kThermal, true, 720);
    const Bounds bounds = default_bounds(ModelKind::kThermal);
    const std::vector<double> initial = default_initial(ModelKind::kThermal);

    MultistartResult serial, parallel;
    const double t_serial =
        time_run(obj, initial, bounds, n_starts, max_evals, seed, false, serial);
    const double t_parallel =
        time_run(obj, initial, bounds, n_starts, max_evals, seed, true, parallel);

    std::cout << "mode,starts,max_evals_per_start,total_evals,best_objective,wall_seconds\n";
    std::cout << "serial," << n_starts << "," << max_evals << "," << serial.total_evals << ","
              << serial.value << "," << t_serial << "\n";
    std::cout << "parallel," << n_starts << "," << max_evals << "," << parallel.total_evals << ","
              << parallel.value << "," << t_parallel << "\n";

    const bool identical =
        serial.value == parallel.value && serial.params == parallel.params &&
        serial.total_evals == parallel.total_evals;
    std::cout << "identical_incumbent," << (identical ? "yes" : "no") << "\n";
    std::cout << "speedup," << (t_parallel > 0.0 ? t_serial / t_parallel : 0.0) << "\n";
    return identical ? 0 : 1;
}
