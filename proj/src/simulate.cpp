#include "greybox/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "greybox/errors.hpp"

namespace greybox {

namespace {

void check_sim_args(Eigen::Index n, Eigen::Index m, const Eigen::MatrixXd& inputs,
                    const Eigen::VectorXd& x0) {
    if (inputs.rows() != m) {
        std::ostringstream os;
        os << "simulate: input matrix has " << inputs.rows() << " rows, model expects " << m;
        throw std::invalid_argument(os.str());
    }
    if (inputs.cols() < 1) throw std::invalid_argument("simulate: need at least one input column");
    if (x0.size() != n) throw std::invalid_argument("simulate: x0 size mismatch");
    if (!x0.allFinite()) throw std::invalid_argument("simulate: x0 has non-finite entries");
}

}  // namespace

SimulationResult simulate_discrete(const DiscreteModel& dmodel, const Eigen::MatrixXd& inputs,
                                   const Eigen::VectorXd& x0, bool record_states) {
    const Eigen::Index n = dmodel.n_states();
    const Eigen::Index m = dmodel.n_inputs();
    const Eigen::Index p = dmodel.n_outputs();
    const Eigen::Index steps = inputs.cols();
    check_sim_args(n, m, inputs, x0);

    SimulationResult res;
    res.times.resize(static_cast<size_t>(steps));
    res.outputs.resize(p, steps);
    if (record_states) res.states.resize(n, steps);

    // Row-major copies keep the hot loop on contiguous reads.
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> ad = dmodel.ad;
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> bd = dmodel.bd;
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> c = dmodel.c;
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> d = dmodel.d;
    const bool has_d = !d.isZero(0.0);

    Eigen::VectorXd x = x0;
    Eigen::VectorXd xn(n);
    for (Eigen::Index k = 0; k < steps; ++k) {
        res.times[static_cast<size_t>(k)] = static_cast<double>(k) * dmodel.dt;
        const auto u = inputs.col(k);
        for (Eigen::Index i = 0; i < p; ++i) {
            double acc = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) acc += c(i, j) * x(j);
            if (has_d)
                for (Eigen::Index j = 0; j < m; ++j) acc += d(i, j) * u(j);
            res.outputs(i, k) = acc;
        }
        if (record_states) res.states.col(k) = x;
        if (k + 1 < steps) {
            for (Eigen::Index i = 0; i < n; ++i) {
                double acc = 0.0;
                for (Eigen::Index j = 0; j < n; ++j) acc += ad(i, j) * x(j);
                for (Eigen::Index j = 0; j < m; ++j) acc += bd(i, j) * u(j);
                xn(i) = acc;
            }
            x.swap(xn);
        }
    }
    return res;
}

SimulationResult simulate_ode_reference(const StateSpaceModel& model, const Eigen::MatrixXd& inputs,
                                        const Eigen::VectorXd& x0, double rtol, double atol,
                                        double dt, bool record_states) {
    if (!(rtol > 0.0) || !(atol > 0.0))
        throw std::invalid_argument("simulate_ode_reference: rtol and atol must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("simulate_ode_reference: dt must be > 0");

    const Eigen::Index n = model.n_states();
    const Eigen::Index m = model.n_inputs();
    const Eigen::Index p = model.n_outputs();
    const Eigen::Index steps = inputs.cols();
    check_sim_args(n, m, inputs, x0);
    const bool has_d = !model.d.isZero(0.0);

    SimulationResult res;
    res.times.resize(static_cast<size_t>(steps));
    res.outputs.resize(p, steps);
    if (record_states) res.states.resize(n, steps);

    const double h_min = dt * 1e-12;
    Eigen::VectorXd x = x0;
    Eigen::VectorXd bu(n), k1(n), k2(n), k3(n), k4(n), x3(n), err(n), xt(n);
    double h = dt / 8.0;  // carried across segments

    for (Eigen::Index k = 0; k < steps; ++k) {
        res.times[static_cast<size_t>(k)] = static_cast<double>(k) * dt;
        res.outputs.col(k).noalias() = model.c * x;
        if (has_d) res.outputs.col(k).noalias() += model.d * inputs.col(k);
        if (record_states) res.states.col(k) = x;
        if (k + 1 == steps) break;

        // Integrate one hold interval; the RHS constant term changes at
        // segment boundaries, so FSAL does not carry across them.
        bu.noalias() = model.b * inputs.col(k);
        double t = 0.0;
        k1.noalias() = model.a * x + bu;
        while (t < dt) {
            // The final step of a segment is clamped to land exactly on the
            // grid point; that clamp must not feed back into the controller.
            const bool last = h >= dt - t;
            const double h_eff = last ? dt - t : h;
            if (!last && h_eff < h_min) {
                std::ostringstream os;
                os << "ode reference: step size underflow at t = "
                   << (static_cast<double>(k) * dt + t) << " s";
                throw NumericError(os.str());
            }

            // Bogacki-Shampine 2(3)
            xt.noalias() = x + (0.5 * h_eff) * k1;
            k2.noalias() = model.a * xt + bu;
            xt.noalias() = x + (0.75 * h_eff) * k2;
            k3.noalias() = model.a * xt + bu;
            x3.noalias() =
                x + h_eff * ((2.0 / 9.0) * k1 + (1.0 / 3.0) * k2 + (4.0 / 9.0) * k3);
            k4.noalias() = model.a * x3 + bu;
            err.noalias() = h_eff * ((5.0 / 72.0) * k1 - (1.0 / 12.0) * k2 -
                                     (1.0 / 9.0) * k3 + (1.0 / 8.0) * k4);

            double err_norm = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double scale = atol + rtol * std::max(std::abs(x(i)), std::abs(x3(i)));
                err_norm = std::max(err_norm, std::abs(err(i)) / scale);
            }

            const bool accept = err_norm <= 1.0;
            if (accept) {
                t = last ? dt : t + h_eff;
                x = x3;
                k1 = k4;  // FSAL within the segment
                if (!x.allFinite()) {
                    std::ostringstream os;
                    os << "ode reference: non-finite state at t = "
                       << (static_cast<double>(k) * dt + t) << " s";
                    throw NumericError(os.str());
                }
            }
            const double factor = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -1.0 / 3.0) : 5.0;
            if (!(last && accept)) h = h_eff * std::clamp(factor, 0.2, 5.0);
        }
    }
    return res;
}

Eigen::MatrixXd make_benchmark_inputs(Eigen::Index m, Eigen::Index n_steps) {
    constexpr double pi = std::numbers::pi;
    Eigen::MatrixXd u(m, n_steps);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double phase = 0.7 * static_cast<double>(j);
        const double daily = 2.0 * pi / 24.0;
        const double annual = 2.0 * pi / 8760.0;
        for (Eigen::Index k = 0; k < n_steps; ++k) {
            const double hk = static_cast<double>(k);
            u(j, k) = 10.0 + 5.0 * std::sin(daily * hk + phase) +
                      3.0 * std::sin(annual * hk + 0.3 * phase);
        }
    }
    return u;
}

namespace {

double time_once(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

double time_median(const std::function<void()>& fn, int reps) {
    std::vector<double> samples;
    samples.reserve(static_cast<size_t>(reps));
    for (int i = 0; i < reps; ++i) samples.push_back(time_once(fn));
    std::sort(samples.begin(), samples.end());
    return samples[samples.size() / 2];
}

}  // namespace

std::vector<BenchmarkRow> benchmark(const StateSpaceModel& model,
                                    const std::vector<double>& horizons_hours,
                                    double ode_cap_hours, double dt) {
    if (horizons_hours.empty()) throw std::invalid_argument("benchmark: horizons empty");

    const DiscreteModel dmodel = discretize_zoh(model, dt);
    std::vector<BenchmarkRow> rows;
    for (const double horizon : horizons_hours) {
        const auto n_steps = static_cast<Eigen::Index>(std::llround(horizon));
        if (n_steps < 1) throw std::invalid_argument("benchmark: horizon below one step");
        const Eigen::MatrixXd inputs = make_benchmark_inputs(model.n_inputs(), n_steps);
        const Eigen::VectorXd x0 = steady_state(model, inputs.col(0));

        // Median over repeats keeps the short horizons clear of timer noise.
        const int reps = n_steps <= 10000 ? 9 : (n_steps <= 100000 ? 5 : 3);
        BenchmarkRow ss;
        ss.horizon_hours = horizon;
        ss.integrator = "state-space";
        ss.wall_seconds = time_median([&] { simulate_discrete(dmodel, inputs, x0); }, reps);
        rows.push_back(ss);

        BenchmarkRow ode;
        ode.horizon_hours = horizon;
        ode.integrator = "ode23";
        if (horizon > ode_cap_hours) {
            ode.skipped = true;
            ode.wall_seconds = std::numeric_limits<double>::quiet_NaN();
        } else {
            ode.wall_seconds = time_median(
                [&] { simulate_ode_reference(model, inputs, x0, 1e-6, 1e-9, dt); },
                std::max(1, reps / 3));
        }
        rows.push_back(ode);
    }
    return rows;
}

}  // namespace greybox
