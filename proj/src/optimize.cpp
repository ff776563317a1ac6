#include "greybox/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "greybox/errors.hpp"

namespace greybox {

void check_bounds(const Bounds& bounds) {
    if (bounds.lower.size() != bounds.upper.size())
        throw ConfigError("bounds: lower/upper size mismatch");
    if (bounds.lower.empty()) throw ConfigError("bounds: empty");
    for (size_t i = 0; i < bounds.lower.size(); ++i) {
        if (!std::isfinite(bounds.lower[i]) || !std::isfinite(bounds.upper[i])) {
            std::ostringstream os;
            os << "bounds: non-finite bound at index " << i;
            throw ConfigError(os.str());
        }
        if (!(bounds.lower[i] < bounds.upper[i])) {
            std::ostringstream os;
            os << "bounds: lower must be < upper at index " << i;
            throw ConfigError(os.str());
        }
    }
}

void clamp_to_bounds(std::vector<double>& x, const Bounds& bounds) {
    for (size_t i = 0; i < x.size(); ++i)
        x[i] = std::clamp(x[i], bounds.lower[i], bounds.upper[i]);
}

namespace {

// Nelder-Mead coefficients (Nelder & Mead 1965): reflection, expansion,
// outside/inside contraction, shrink.
constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

struct Vertex {
    std::vector<double> x;
    double f = 0.0;
};

double simplex_diameter(const std::vector<Vertex>& simplex) {
    double diam = 0.0;
    const auto& best = simplex.front().x;
    for (size_t j = 1; j < simplex.size(); ++j)
        for (size_t i = 0; i < best.size(); ++i)
            diam = std::max(diam, std::abs(simplex[j].x[i] - best[i]));
    return diam;
}

}  // namespace

LocalResult local_search(const ObjectiveFn& objective, const std::vector<double>& start,
                         const Bounds& bounds, double f_tol, double x_tol, long max_evals) {
    check_bounds(bounds);
    const size_t dim = bounds.size();
    if (start.size() != dim) throw ConfigError("local_search: start size mismatch");
    for (size_t i = 0; i < dim; ++i)
        if (start[i] < bounds.lower[i] || start[i] > bounds.upper[i])
            throw ConfigError("local_search: start outside bounds");
    if (max_evals < 1) throw ConfigError("local_search: max_evals must be >= 1");

    long evals = 0;
    auto eval = [&](std::vector<double>& x) {
        clamp_to_bounds(x, bounds);
        ++evals;
        return objective(x);
    };

    // Initial simplex: 5% displacement per nonzero coordinate, a small
    // box fraction for zero coordinates, flipped inward at a bound.
    std::vector<Vertex> simplex(dim + 1);
    simplex[0].x = start;
    simplex[0].f = eval(simplex[0].x);
    for (size_t i = 0; i < dim; ++i) {
        Vertex v;
        v.x = simplex[0].x;
        double step = v.x[i] != 0.0 ? 0.05 * std::abs(v.x[i])
                                    : 0.00025 * (bounds.upper[i] - bounds.lower[i]);
        step = std::min(step, bounds.upper[i] - bounds.lower[i]);
        if (v.x[i] + step > bounds.upper[i]) step = -step;
        v.x[i] += step;
        v.f = eval(v.x);
        simplex[i + 1] = std::move(v);
    }

    auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    std::stable_sort(simplex.begin(), simplex.end(), by_value);

    std::vector<double> centroid(dim), trial(dim), trial2(dim);
    bool converged = false;
    while (evals < max_evals) {
        const double spread = simplex.back().f - simplex.front().f;
        if (spread < f_tol || simplex_diameter(simplex) < x_tol) {
            converged = true;
            break;
        }

        // Centroid of all vertices but the worst.
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (size_t j = 0; j < dim; ++j)
            for (size_t i = 0; i < dim; ++i) centroid[i] += simplex[j].x[i];
        for (double& c : centroid) c /= static_cast<double>(dim);

        const Vertex& worst = simplex.back();
        for (size_t i = 0; i < dim; ++i)
            trial[i] = centroid[i] + kReflect * (centroid[i] - worst.x[i]);
        const double f_reflect = eval(trial);

        if (f_reflect < simplex.front().f) {
            // Try expanding past the reflection.
            for (size_t i = 0; i < dim; ++i)
                trial2[i] = centroid[i] + kExpand * (centroid[i] - worst.x[i]);
            const double f_expand = evals < max_evals ? eval(trial2) : f_reflect;
            if (f_expand < f_reflect) {
                simplex.back().x = trial2;
                simplex.back().f = f_expand;
            } else {
                simplex.back().x = trial;
                simplex.back().f = f_reflect;
            }
        } else if (f_reflect < simplex[dim - 1].f) {
            simplex.back().x = trial;
            simplex.back().f = f_reflect;
        } else {
            const bool outside = f_reflect < worst.f;
            if (outside) {
                for (size_t i = 0; i < dim; ++i)
                    trial2[i] = centroid[i] + kContract * (trial[i] - centroid[i]);
            } else {
                for (size_t i = 0; i < dim; ++i)
                    trial2[i] = centroid[i] - kContract * (centroid[i] - worst.x[i]);
            }
            const double f_contract = evals < max_evals ? eval(trial2) : f_reflect;
            if (f_contract < std::min(f_reflect, worst.f)) {
                simplex.back().x = trial2;
                simplex.back().f = f_contract;
            } else {
                // Shrink all vertices toward the best.
                for (size_t j = 1; j < simplex.size() && evals < max_evals; ++j) {
                    for (size_t i = 0; i < dim; ++i)
                        simplex[j].x[i] = simplex[0].x[i] +
                                          kShrink * (simplex[j].x[i] - simplex[0].x[i]);
                    simplex[j].f = eval(simplex[j].x);
                }
            }
        }
        std::stable_sort(simplex.begin(), simplex.end(), by_value);
    }

    LocalResult res;
    res.params = simplex.front().x;
    res.value = simplex.front().f;
    res.evals = evals;
    res.converged = converged;
    return res;
}

LocalResult genetic_search(const ObjectiveFn& objective, const Bounds& bounds, int population,
                           int generations, uint64_t seed, long max_evals,
                           std::vector<double>* best_per_generation) {
    check_bounds(bounds);
    if (population < 8 || population % 2 != 0)
        throw ConfigError("genetic_search: population must be even and >= 8");
    if (generations < 1) throw ConfigError("genetic_search: generations must be >= 1");

    const size_t dim = bounds.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const double blend_alpha = 0.5;
    const double mutate_prob = 1.0 / static_cast<double>(dim);

    long evals = 0;
    std::vector<std::vector<double>> pop(static_cast<size_t>(population));
    std::vector<double> fitness(static_cast<size_t>(population));
    for (auto& ind : pop) ind = sample_start(bounds, rng);
    for (size_t i = 0; i < pop.size(); ++i) {
        fitness[i] = objective(pop[i]);
        ++evals;
    }

    auto best_index = [&]() {
        size_t bi = 0;
        for (size_t i = 1; i < pop.size(); ++i)
            if (fitness[i] < fitness[bi]) bi = i;
        return bi;
    };

    auto tournament = [&]() {
        std::uniform_int_distribution<size_t> pick(0, pop.size() - 1);
        const size_t a = pick(rng);
        const size_t b = pick(rng);
        return fitness[a] <= fitness[b] ? a : b;
    };

    std::vector<std::vector<double>> next(pop.size());
    std::vector<double> next_fitness(pop.size());
    for (int gen = 0; gen < generations; ++gen) {
        if (evals + static_cast<long>(pop.size()) - 1 > max_evals) break;

        const size_t elite = best_index();
        next[0] = pop[elite];
        next_fitness[0] = fitness[elite];

        // Offspring are generated sequentially from the master RNG, so the
        // stream is independent of how fitness gets evaluated afterwards.
        for (size_t slot = 1; slot < pop.size(); ++slot) {
            const auto& pa = pop[tournament()];
            const auto& pb = pop[tournament()];
            std::vector<double> child(dim);
            for (size_t i = 0; i < dim; ++i) {
                const double lo = std::min(pa[i], pb[i]);
                const double hi = std::max(pa[i], pb[i]);
                const double spread = hi - lo;
                std::uniform_real_distribution<double> blend(lo - blend_alpha * spread,
                                                             hi + blend_alpha * spread);
                child[i] = blend(rng);
                if (unit(rng) < mutate_prob)
                    child[i] += 0.1 * (bounds.upper[i] - bounds.lower[i]) * gauss(rng);
                child[i] = std::clamp(child[i], bounds.lower[i], bounds.upper[i]);
            }
            next[slot] = std::move(child);
        }

        // Pure fitness evaluations; safe to run concurrently.
#pragma omp parallel for schedule(dynamic)
        for (long slot = 1; slot < static_cast<long>(pop.size()); ++slot)
            next_fitness[static_cast<size_t>(slot)] = objective(next[static_cast<size_t>(slot)]);
        evals += static_cast<long>(pop.size()) - 1;

        pop.swap(next);
        fitness.swap(next_fitness);
        if (best_per_generation) best_per_generation->push_back(fitness[best_index()]);
    }

    const size_t bi = best_index();
    LocalResult res;
    res.params = pop[bi];
    res.value = fitness[bi];
    res.evals = evals;
    res.converged = fitness[bi] < kObjectiveSentinel;
    return res;
}

std::vector<double> sample_start(const Bounds& bounds, std::mt19937_64& rng) {
    std::vector<double> x(bounds.size());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (size_t i = 0; i < x.size(); ++i) {
        const double lo = bounds.lower[i];
        const double hi = bounds.upper[i];
        if (lo > 0.0 && hi / lo > 100.0) {
            // Log-uniform over ranges wider than two decades.
            x[i] = std::exp(std::log(lo) + unit(rng) * (std::log(hi) - std::log(lo)));
            x[i] = std::clamp(x[i], lo, hi);
        } else {
            x[i] = lo + unit(rng) * (hi - lo);
        }
    }
    return x;
}

MultistartResult multistart(const ObjectiveFn& objective, const std::vector<double>& initial,
                            const Bounds& bounds, int n_starts, long max_evals_per_start,
                            double f_tol, double x_tol, uint64_t seed,
                            [[maybe_unused]] bool parallel) {
    check_bounds(bounds);
    if (n_starts < 1) throw ConfigError("multistart: n_starts must be >= 1");

    // All starts are drawn up front so parallel execution sees the same
    // points as the sequential path.
    std::vector<std::vector<double>> starts(static_cast<size_t>(n_starts));
    starts[0] = initial;
    clamp_to_bounds(starts[0], bounds);
    std::mt19937_64 rng(seed);
    for (size_t s = 1; s < starts.size(); ++s) starts[s] = sample_start(bounds, rng);

    std::vector<LocalResult> results(starts.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long s = 0; s < static_cast<long>(starts.size()); ++s) {
        results[static_cast<size_t>(s)] =
            local_search(objective, starts[static_cast<size_t>(s)], bounds, f_tol, x_tol,
                         max_evals_per_start);
    }

    MultistartResult out;
    size_t best = 0;
    for (size_t s = 0; s < results.size(); ++s) {
        StartSummary sum;
        sum.index = static_cast<int>(s);
        sum.objective = results[s].value;
        sum.evals = results[s].evals;
        sum.converged = results[s].converged;
        out.starts.push_back(sum);
        out.total_evals += results[s].evals;
        if (results[s].value < results[best].value) best = s;  // ties keep lowest index
    }
    out.params = results[best].params;
    out.value = results[best].value;
    out.converged = results[best].converged && results[best].value < kObjectiveSentinel;
    return out;
}

}  // namespace greybox
