#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace greybox {

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

// Sentinel returned by objectives for draws that cannot be simulated;
// large but finite so simplex and GA arithmetic stay total.
inline constexpr double kObjectiveSentinel = 1e30;

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    size_t size() const { return lower.size(); }
};

// Throws ConfigError unless lower.size() == upper.size() and
// lower[i] < upper[i] with finite entries.
void check_bounds(const Bounds& bounds);

// Clamp a point into the box, coordinate by coordinate.
void clamp_to_bounds(std::vector<double>& x, const Bounds& bounds);

struct LocalResult {
    std::vector<double> params;
    double value = 0.0;
    long evals = 0;
    bool converged = false;
};

// Bounded Nelder-Mead simplex descent. Trial points are clamped into the
// box before evaluation. Terminates when the simplex diameter (max-norm)
// drops below x_tol, the value spread below f_tol, or the evaluation
// budget runs out (best-so-far returned with converged = false).
LocalResult local_search(const ObjectiveFn& objective, const std::vector<double>& start,
                         const Bounds& bounds, double f_tol, double x_tol, long max_evals);

// Real-coded genetic algorithm: tournament selection (k = 2), blend
// crossover, Gaussian mutation clipped to bounds, elitism of 1. Fully
// reproducible for a given seed. If best_per_generation is non-null it
// receives the incumbent value after every generation.
LocalResult genetic_search(const ObjectiveFn& objective, const Bounds& bounds, int population,
                           int generations, uint64_t seed,
                           long max_evals = std::numeric_limits<long>::max(),
                           std::vector<double>* best_per_generation = nullptr);

struct StartSummary {
    int index = 0;
    double objective = 0.0;
    long evals = 0;
    bool converged = false;
};

struct MultistartResult {
    std::vector<double> params;
    double value = 0.0;
    long total_evals = 0;
    bool converged = false;
    std::vector<StartSummary> starts;
};

// Start 1 is the caller's initial point; starts 2..n are sampled within
// bounds from the seed, log-uniformly for strictly positive ranges wider
// than two decades. Runs local_search from every start and returns the
// argmin, ties broken by lowest start index. With parallel = true the
// starts are evaluated concurrently (OpenMP); the result is identical to
// the sequential path because every start is deterministic and the argmin
// reduction is ordered.
MultistartResult multistart(const ObjectiveFn& objective, const std::vector<double>& initial,
                            const Bounds& bounds, int n_starts, long max_evals_per_start,
                            double f_tol, double x_tol, uint64_t seed, bool parallel = false);

// Start-point sampling used by multistart, exposed for tests.
std::vector<double> sample_start(const Bounds& bounds, std::mt19937_64& rng);

}  // namespace greybox
