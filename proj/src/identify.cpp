#include "greybox/identify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "greybox/discretize.hpp"
#include "greybox/errors.hpp"

namespace greybox {

namespace {

constexpr double kCiNominalThermal = 1.0e6;
constexpr double kCiNominalHygric = 1.0e3;
constexpr double kCiPin = 0.05;  // +/- band that fixes the scale degree of freedom

size_t dim_of(ModelKind kind, bool fixed_node) {
    if (kind == ModelKind::kThermal) return 13;
    return fixed_node ? 7 : 5;
}

void require_dim(const std::vector<double>& x, ModelKind kind, bool fixed_node,
                 const char* who) {
    if (x.size() != dim_of(kind, fixed_node)) {
        std::ostringstream os;
        os << who << ": expected " << dim_of(kind, fixed_node) << " parameters, got "
           << x.size();
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

std::vector<std::string> param_names(ModelKind kind, bool fixed_node) {
    if (kind == ModelKind::kThermal) {
        return {"g_w",     "g_i",     "g_int",   "g_f",     "g_fast", "c_w",    "c_i",
                "c_int",   "f_irr_n", "f_irr_e", "f_irr_s", "f_irr_w", "t_fixed"};
    }
    if (fixed_node) return {"g_w", "g_i", "g_fast", "g_f", "c_w", "c_i", "p_fixed"};
    return {"g_w", "g_i", "g_fast", "c_w", "c_i"};
}

Bounds default_bounds(ModelKind kind, bool fixed_node) {
    Bounds b;
    const auto names = param_names(kind, fixed_node);
    const double ci_nominal =
        kind == ModelKind::kThermal ? kCiNominalThermal : kCiNominalHygric;
    for (const auto& name : names) {
        if (name == "c_i") {
            b.lower.push_back((1.0 - kCiPin) * ci_nominal);
            b.upper.push_back((1.0 + kCiPin) * ci_nominal);
        } else if (name.rfind("f_irr", 0) == 0) {
            b.lower.push_back(0.0);
            b.upper.push_back(1.0e3);
        } else if (name == "t_fixed") {
            b.lower.push_back(-10.0);
            b.upper.push_back(30.0);
        } else if (name == "p_fixed") {
            b.lower.push_back(0.0);
            b.upper.push_back(4000.0);
        } else {
            b.lower.push_back(1.0e-6);
            b.upper.push_back(1.0e9);
        }
    }
    return b;
}

namespace {

// Geometric centre for wide positive ranges, arithmetic midpoint otherwise.
std::vector<double> centre_of(const Bounds& b) {
    std::vector<double> x(b.size());
    for (size_t i = 0; i < b.size(); ++i) {
        if (b.lower[i] > 0.0 && b.upper[i] / b.lower[i] > 100.0)
            x[i] = std::sqrt(b.lower[i] * b.upper[i]);
        else
            x[i] = 0.5 * (b.lower[i] + b.upper[i]);
    }
    return x;
}

}  // namespace

std::vector<double> default_initial(ModelKind kind, bool fixed_node) {
    return centre_of(default_bounds(kind, fixed_node));
}

ThermalParams unpack_thermal(const std::vector<double>& x) {
    require_dim(x, ModelKind::kThermal, true, "unpack_thermal");
    ThermalParams p;
    p.g_w = x[0];
    p.g_i = x[1];
    p.g_int = x[2];
    p.g_f = x[3];
    p.g_fast = x[4];
    p.c_w = x[5];
    p.c_i = x[6];
    p.c_int = x[7];
    p.f_irr[0] = x[8];
    p.f_irr[1] = x[9];
    p.f_irr[2] = x[10];
    p.f_irr[3] = x[11];
    p.t_fixed = x[12];
    return p;
}

std::vector<double> pack_thermal(const ThermalParams& p) {
    return {p.g_w,      p.g_i,      p.g_int,    p.g_f,      p.g_fast,  p.c_w,  p.c_i,
            p.c_int,    p.f_irr[0], p.f_irr[1], p.f_irr[2], p.f_irr[3], p.t_fixed};
}

HygricParams unpack_hygric(const std::vector<double>& x, bool fixed_node) {
    require_dim(x, ModelKind::kHygric, fixed_node, "unpack_hygric");
    HygricParams p;
    p.g_w = x[0];
    p.g_i = x[1];
    p.g_fast = x[2];
    if (fixed_node) {
        p.g_f = x[3];
        p.c_w = x[4];
        p.c_i = x[5];
        p.p_fixed = x[6];
    } else {
        p.g_f = 0.0;
        p.c_w = x[3];
        p.c_i = x[4];
        p.p_fixed = 0.0;
    }
    return p;
}

std::vector<double> pack_hygric(const HygricParams& p, bool fixed_node) {
    if (fixed_node) return {p.g_w, p.g_i, p.g_fast, p.g_f, p.c_w, p.c_i, p.p_fixed};
    return {p.g_w, p.g_i, p.g_fast, p.c_w, p.c_i};
}

FitData prepare_fit_data(const ClimateDataset& climate, const TimeSeries& measured,
                         ModelKind kind) {
    const Alignment align = align_hourly(climate, measured);
    const size_t n = align.length;

    const TimeSeries* rows[5] = {&climate.t_e, &climate.irr_n, &climate.irr_e,
                                 &climate.irr_s, &climate.irr_w};
    int n_rows = 6;
    if (kind == ModelKind::kHygric) {
        rows[0] = &climate.p_e;
        n_rows = 2;
    }

    FitData data;
    data.dt = 3600.0;
    data.start = climate.start() + static_cast<int64_t>(align.climate_offset) * 3600;
    data.inputs.setZero(n_rows, static_cast<Eigen::Index>(n));
    for (int r = 0; r + 1 < n_rows; ++r) {
        const TimeSeries& s = *rows[r];
        for (size_t k = 0; k < n; ++k) {
            const size_t idx = align.climate_offset + k;
            if (s.flags[idx] == SampleFlag::kMissing) {
                std::ostringstream os;
                os << "climate gap at " << format_iso8601(s.time_at(idx))
                   << "; in-fill or trim before fitting";
                throw DataError(os.str());
            }
            data.inputs(r, static_cast<Eigen::Index>(k)) = s.values[idx];
        }
    }

    data.measured.resize(n);
    data.mask.resize(n);
    size_t usable = 0;
    for (size_t k = 0; k < n; ++k) {
        const size_t idx = align.measured_offset + k;
        const bool ok = measured.flags[idx] != SampleFlag::kMissing;
        data.measured[k] = ok ? measured.values[idx] : 0.0;
        data.mask[k] = ok ? 1 : 0;
        usable += ok;
    }
    if (usable == 0) throw DataError("measurement series has no usable samples");
    return data;
}

double objective_on(const FitData& data, const std::vector<double>& params, ModelKind kind,
                    bool fixed_node, int warmup_samples) {
    try {
        StateSpaceModel model;
        double fixed_value = 0.0;
        if (kind == ModelKind::kThermal) {
            const ThermalParams p = unpack_thermal(params);
            model = build_thermal_model(p);
            fixed_value = p.t_fixed;
        } else {
            const HygricParams p = unpack_hygric(params, fixed_node);
            model = build_hygric_model(p);
            fixed_value = p.p_fixed;
        }
        const DiscreteModel dmodel = discretize_zoh(model, data.dt);

        Eigen::MatrixXd u = data.inputs;
        u.row(u.rows() - 1).setConstant(fixed_value);
        const Eigen::VectorXd x0 = steady_state(model, u.col(0));
        if (!x0.allFinite()) return kObjectiveSentinel;

        const SimulationResult sim = simulate_discrete(dmodel, u, x0, false);
        const auto n = static_cast<size_t>(sim.outputs.cols());
        double sse = 0.0;
        for (size_t k = static_cast<size_t>(std::max(warmup_samples, 0)); k < n; ++k) {
            if (!data.mask[k]) continue;
            const double e = sim.outputs(0, static_cast<Eigen::Index>(k)) - data.measured[k];
            sse += e * e;
        }
        if (!std::isfinite(sse) || sse >= kObjectiveSentinel) return kObjectiveSentinel;
        return sse;
    } catch (const std::exception&) {
        return kObjectiveSentinel;
    }
}

double objective(const std::vector<double>& params, const ClimateDataset& climate,
                 const TimeSeries& measured, ModelKind kind, bool fixed_node,
                 int warmup_samples) {
    const FitData data = prepare_fit_data(climate, measured, kind);
    return objective_on(data, params, kind, fixed_node, warmup_samples);
}

ObjectiveFn make_objective(std::shared_ptr<const FitData> data, ModelKind kind,
                           bool fixed_node, int warmup_samples) {
    return [data, kind, fixed_node, warmup_samples](const std::vector<double>& x) {
        return objective_on(*data, x, kind, fixed_node, warmup_samples);
    };
}

SimulationResult simulate_params(const std::vector<double>& params,
                                 const ClimateDataset& climate, ModelKind kind,
                                 bool fixed_node, double dt, X0Policy x0_policy) {
    validate_climate(climate);
    StateSpaceModel model;
    double fixed_value = 0.0;
    if (kind == ModelKind::kThermal) {
        const ThermalParams p = unpack_thermal(params);
        model = build_thermal_model(p);
        fixed_value = p.t_fixed;
    } else {
        const HygricParams p = unpack_hygric(params, fixed_node);
        model = build_hygric_model(p);
        fixed_value = p.p_fixed;
    }

    const TimeSeries* rows[5] = {&climate.t_e, &climate.irr_n, &climate.irr_e,
                                 &climate.irr_s, &climate.irr_w};
    int n_rows = 6;
    if (kind == ModelKind::kHygric) {
        rows[0] = &climate.p_e;
        n_rows = 2;
    }
    const auto n = static_cast<Eigen::Index>(climate.size());
    Eigen::MatrixXd u(n_rows, n);
    for (int r = 0; r + 1 < n_rows; ++r) {
        const TimeSeries& s = *rows[r];
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto idx = static_cast<size_t>(k);
            if (s.flags[idx] == SampleFlag::kMissing)
                throw DataError("climate gap at " + format_iso8601(s.time_at(idx)) +
                                "; in-fill or trim before simulating");
            u(r, k) = s.values[idx];
        }
    }
    u.row(n_rows - 1).setConstant(fixed_value);

    const DiscreteModel dmodel = discretize_zoh(model, dt);
    const Eigen::VectorXd x0 = x0_policy == X0Policy::kSteadyState
                                   ? steady_state(model, u.col(0)).eval()
                                   : Eigen::VectorXd::Zero(model.n_states()).eval();
    return simulate_discrete(dmodel, u, x0, false);
}

FitResult fit(const FitConfig& config, const ClimateDataset& climate,
              const TimeSeries& measured, ModelKind kind) {
    const auto t_begin = std::chrono::steady_clock::now();

    FitConfig cfg = config;
    const bool node = kind == ModelKind::kHygric ? cfg.fixed_node : true;
    const auto names = param_names(kind, node);
    const size_t dim = names.size();
    if (cfg.bounds.lower.empty() && cfg.bounds.upper.empty())
        cfg.bounds = default_bounds(kind, node);
    check_bounds(cfg.bounds);
    if (cfg.initial.empty()) cfg.initial = centre_of(cfg.bounds);
    if (cfg.bounds.size() != dim) throw ConfigError("fit: bounds size does not match model");
    if (cfg.initial.size() != dim) throw ConfigError("fit: initial size does not match model");
    if (cfg.n_starts < 1) throw ConfigError("fit: n_starts must be >= 1");
    if (cfg.max_evals < static_cast<long>(dim) + 2)
        throw ConfigError("fit: max_evals too small for a single simplex");
    if (cfg.warmup_samples < 0) throw ConfigError("fit: warmup_samples must be >= 0");
    if (cfg.polish_rounds < 0) throw ConfigError("fit: polish_rounds must be >= 0");
    if (!(cfg.f_tol > 0.0) || !(cfg.x_tol > 0.0))
        throw ConfigError("fit: tolerances must be > 0");
    for (size_t i = 0; i < dim; ++i) {
        if (names[i] != "t_fixed" && cfg.bounds.lower[i] < 0.0)
            throw ConfigError("fit: lower bound for " + names[i] + " must be >= 0");
    }

    FitResult out;
    out.param_names = names;
    out.seed = cfg.seed;

    const auto data = std::make_shared<const FitData>(prepare_fit_data(climate, measured, kind));
    long usable = 0;
    for (size_t k = static_cast<size_t>(cfg.warmup_samples); k < data->mask.size(); ++k)
        usable += data->mask[k];
    if (usable == 0)
        throw DataError("no usable measurement samples after the warm-up window");
    if (usable < 1000) {
        std::ostringstream os;
        os << "only " << usable << " post-warm-up samples; >= 1000 recommended";
        out.warnings.push_back(os.str());
    }

    const ObjectiveFn obj = make_objective(data, kind, node, cfg.warmup_samples);

    std::vector<double> best;
    double best_value = kObjectiveSentinel;
    if (cfg.solver == Solver::kGenetic) {
        const LocalResult g = genetic_search(obj, cfg.bounds, cfg.population, cfg.generations,
                                             cfg.seed, cfg.max_evals);
        best = g.params;
        best_value = g.value;
        out.evals = g.evals;
        out.starts.push_back({0, g.value, g.evals, g.converged});
        out.converged = g.converged;
    } else {
        const MultistartResult m =
            multistart(obj, cfg.initial, cfg.bounds, cfg.n_starts, cfg.max_evals, cfg.f_tol,
                       cfg.x_tol, cfg.seed, cfg.parallel);
        best = m.params;
        best_value = m.value;
        out.evals = m.total_evals;
        out.starts = m.starts;
        out.converged = m.converged;
    }
    if (best_value >= kObjectiveSentinel)
        throw NoFeasibleStartError("no start produced a stable simulation within budget");

    for (int round = 0; round < cfg.polish_rounds; ++round) {
        const LocalResult p =
            local_search(obj, best, cfg.bounds, cfg.f_tol, cfg.x_tol, cfg.max_evals);
        out.evals += p.evals;
        if (p.value < best_value) {
            best = p.params;
            best_value = p.value;
            out.converged = p.converged;
        }
    }

    // The reported objective is a fresh evaluation at the returned point.
    out.params = best;
    out.objective = obj(best);
    ++out.evals;

    const SimulationResult sim = simulate_params(best, climate, kind, node, data->dt);
    std::vector<double> meas_w, sim_w;
    meas_w.reserve(static_cast<size_t>(usable));
    sim_w.reserve(static_cast<size_t>(usable));
    const Alignment align = align_hourly(climate, measured);
    for (size_t k = static_cast<size_t>(cfg.warmup_samples); k < data->mask.size(); ++k) {
        if (!data->mask[k]) continue;
        meas_w.push_back(data->measured[k]);
        sim_w.push_back(sim.outputs(0, static_cast<Eigen::Index>(align.climate_offset + k)));
    }
    out.metrics.mse = mse(meas_w, sim_w);
    out.metrics.mae = mae(meas_w, sim_w);
    out.metrics.fit_percent = goodness_of_fit(meas_w, sim_w);

    out.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return out;
}

}  // namespace greybox
