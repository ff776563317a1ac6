#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "greybox/csv_io.hpp"
#include "greybox/errors.hpp"
#include "greybox/identify.hpp"
#include "greybox/metrics.hpp"
#include "greybox/psychro.hpp"
#include "greybox/simulate.hpp"
#include "greybox/synthetic.hpp"
#include "greybox/version.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace greybox;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    bool quiet = false;
    std::optional<uint64_t> seed;
};

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw ConfigError(path + ": invalid JSON: " + e.what());
    }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config field '" + key + "': " + e.what());
    }
}

ModelKind parse_kind(const std::string& s) {
    if (s == "thermal") return ModelKind::kThermal;
    if (s == "hygric") return ModelKind::kHygric;
    throw ConfigError("model_kind must be 'thermal' or 'hygric', got '" + s + "'");
}

std::string kind_name(ModelKind kind) {
    return kind == ModelKind::kThermal ? "thermal" : "hygric";
}

// Provenance contract: equal blocks imply equal numeric outputs, so the hash
// covers the whole effective config after any --seed override.
json make_provenance(const json& effective_config, uint64_t seed) {
    json p;
    p["tool"] = kToolName;
    p["version"] = kVersion;
    p["seed"] = seed;
    p["config_hash"] = hex64(fnv1a64(effective_config.dump()));
    return p;
}

fs::path out_path(const CommonOpts& opts, const std::string& name) {
    fs::create_directories(opts.out_dir);
    return fs::path(opts.out_dir) / name;
}

void write_json_atomic(const fs::path& path, const json& j) {
    write_file_atomic(path.string(), j.dump(2) + "\n");
}

FitConfig parse_fit_config(const json& cfg, ModelKind kind) {
    FitConfig fc;
    const json fit = cfg.value("fit", json::object());

    const std::string solver = get_or<std::string>(fit, "solver", "multistart-simplex");
    if (solver == "multistart-simplex")
        fc.solver = Solver::kMultistartSimplex;
    else if (solver == "genetic")
        fc.solver = Solver::kGenetic;
    else
        throw ConfigError("fit.solver must be 'multistart-simplex' or 'genetic'");

    fc.n_starts = get_or(fit, "n_starts", fc.n_starts);
    fc.max_evals = get_or(fit, "max_evals", fc.max_evals);
    fc.f_tol = get_or(fit, "f_tol", fc.f_tol);
    fc.x_tol = get_or(fit, "x_tol", fc.x_tol);
    fc.seed = get_or(fit, "seed", fc.seed);
    fc.warmup_samples = get_or(fit, "warmup_samples", fc.warmup_samples);
    fc.fixed_node = get_or(fit, "fixed_node", fc.fixed_node);
    fc.population = get_or(fit, "population", fc.population);
    fc.generations = get_or(fit, "generations", fc.generations);
    fc.polish_rounds = get_or(fit, "polish_rounds", fc.polish_rounds);
    fc.parallel = get_or(fit, "parallel", fc.parallel);

    const bool node = kind == ModelKind::kHygric ? fc.fixed_node : true;
    const auto names = param_names(kind, node);
    fc.bounds = default_bounds(kind, node);
    fc.initial = default_initial(kind, node);

    auto index_of = [&](const std::string& name) -> size_t {
        const auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
            throw ConfigError("unknown parameter '" + name + "' for " + kind_name(kind) +
                              " model");
        return static_cast<size_t>(it - names.begin());
    };

    if (fit.contains("bounds")) {
        const json& b = fit.at("bounds");
        if (!b.is_object()) throw ConfigError("fit.bounds must be an object of name: [lo, hi]");
        for (const auto& [name, range] : b.items()) {
            const size_t i = index_of(name);
            if (!range.is_array() || range.size() != 2)
                throw ConfigError("fit.bounds." + name + " must be [lower, upper]");
            fc.bounds.lower[i] = range.at(0).get<double>();
            fc.bounds.upper[i] = range.at(1).get<double>();
        }
    }
    if (fit.contains("initial")) {
        const json& ini = fit.at("initial");
        if (!ini.is_object()) throw ConfigError("fit.initial must be an object of name: value");
        for (const auto& [name, v] : ini.items())
            fc.initial[index_of(name)] = v.get<double>();
    }
    return fc;
}

std::vector<double> params_from_json(const json& file, ModelKind kind, bool& fixed_node) {
    const json& obj = file.contains("params") ? file.at("params") : file;
    if (!obj.is_object()) throw ConfigError("params file must hold an object of name: value");
    fixed_node = kind == ModelKind::kThermal || obj.contains("p_fixed");
    const auto names = param_names(kind, fixed_node);
    std::vector<double> x(names.size());
    for (size_t i = 0; i < names.size(); ++i) {
        if (!obj.contains(names[i])) throw ConfigError("params file missing '" + names[i] + "'");
        x[i] = obj.at(names[i]).get<double>();
    }
    for (const auto& [key, v] : obj.items()) {
        (void)v;
        if (std::find(names.begin(), names.end(), key) == names.end())
            throw ConfigError("params file has unknown parameter '" + key + "'");
    }
    return x;
}

TimeSeries load_fit_measurements(const std::string& path, ModelKind kind) {
    const auto cols = measurement_columns(path);
    auto has = [&](const char* c) {
        return std::find(cols.begin(), cols.end(), c) != cols.end();
    };
    if (kind == ModelKind::kThermal) {
        if (!has("t_i")) throw DataError(path + ": thermal fitting needs column t_i");
        return resample_hourly(load_measurements_csv(path, "t_i"));
    }
    if (has("p_i")) return resample_hourly(load_measurements_csv(path, "p_i"));
    if (!has("rh_i"))
        throw DataError(path + ": hygric fitting needs column p_i or rh_i");
    if (!has("t_i"))
        throw DataError(path +
                        ": rh_i without paired t_i cannot be converted to vapour pressure");

    const TimeSeries rh = load_measurements_csv(path, "rh_i");
    const TimeSeries t = load_measurements_csv(path, "t_i");
    TimeSeries p = rh;
    p.unit = "Pa";
    for (size_t i = 0; i < p.size(); ++i) {
        if (rh.flags[i] == SampleFlag::kMissing || t.flags[i] == SampleFlag::kMissing) {
            p.values[i] = std::numeric_limits<double>::quiet_NaN();
            p.flags[i] = SampleFlag::kMissing;
        } else {
            p.values[i] = rh_to_vapour_pressure(t.values[i], rh.values[i]);
            p.flags[i] = rh.flags[i] == SampleFlag::kFilled || t.flags[i] == SampleFlag::kFilled
                             ? SampleFlag::kFilled
                             : SampleFlag::kPresent;
        }
    }
    return resample_hourly(p);
}

TimeSeries outputs_to_series(const SimulationResult& sim, int64_t start) {
    std::vector<double> values(static_cast<size_t>(sim.outputs.cols()));
    for (Eigen::Index k = 0; k < sim.outputs.cols(); ++k)
        values[static_cast<size_t>(k)] = sim.outputs(0, k);
    return make_series(start, 3600, std::move(values));
}

int run_simulate(const CommonOpts& opts) {
    if (opts.config_path.empty()) throw ConfigError("simulate requires --config");
    json cfg = load_json_file(opts.config_path);
    const ModelKind kind = parse_kind(get_or<std::string>(cfg, "model_kind", ""));

    const json paths = cfg.value("paths", json::object());
    const auto climate_path = get_or<std::string>(paths, "climate", "");
    const auto params_path = get_or<std::string>(paths, "params", "");
    if (climate_path.empty()) throw ConfigError("paths.climate is required");
    if (params_path.empty()) throw ConfigError("paths.params is required");

    const json sim_cfg = cfg.value("sim", json::object());
    const double dt = get_or(sim_cfg, "dt", 3600.0);
    if (!(dt > 0.0)) throw ConfigError("sim.dt must be > 0");
    const auto x0_name = get_or<std::string>(sim_cfg, "x0", "steady_state");
    X0Policy x0 = X0Policy::kSteadyState;
    if (x0_name == "zero")
        x0 = X0Policy::kZero;
    else if (x0_name != "steady_state")
        throw ConfigError("sim.x0 must be 'steady_state' or 'zero'");

    bool fixed_node = true;
    const std::vector<double> params = params_from_json(load_json_file(params_path), kind,
                                                        fixed_node);

    if (!fs::exists(climate_path)) throw DataError("climate file not found: " + climate_path);
    const ClimateDataset climate = resample_climate_hourly(load_climate_csv(climate_path));
    if (dt != static_cast<double>(climate.step()))
        throw ConfigError("sim.dt must match the hourly climate grid (3600 s)");

    const SimulationResult sim = simulate_params(params, climate, kind, fixed_node, dt, x0);

    const std::string column = kind == ModelKind::kThermal ? "t_i" : "p_i";
    const fs::path csv_path = out_path(opts, "simulate_output.csv");
    write_timeseries_csv(csv_path.string(), outputs_to_series(sim, climate.start()), column);

    json result;
    result["provenance"] = make_provenance(cfg, opts.seed.value_or(0));
    result["model_kind"] = kind_name(kind);
    result["rows"] = sim.outputs.cols();
    result["output_csv"] = csv_path.filename().string();
    write_json_atomic(out_path(opts, "simulate_result.json"), result);

    if (!opts.quiet)
        std::cout << "simulated " << sim.outputs.cols() << " hourly steps -> " << csv_path.string()
                  << "\n";
    return 0;
}

int run_fit(const CommonOpts& opts) {
    if (opts.config_path.empty()) throw ConfigError("fit requires --config");
    json cfg = load_json_file(opts.config_path);
    if (opts.seed) cfg["fit"]["seed"] = *opts.seed;

    const ModelKind kind = parse_kind(get_or<std::string>(cfg, "model_kind", ""));
    const json paths = cfg.value("paths", json::object());
    const auto climate_path = get_or<std::string>(paths, "climate", "");
    const auto measurements_path = get_or<std::string>(paths, "measurements", "");
    if (climate_path.empty()) throw ConfigError("paths.climate is required");
    if (measurements_path.empty()) throw ConfigError("paths.measurements is required");

    const FitConfig fc = parse_fit_config(cfg, kind);

    if (!fs::exists(climate_path)) throw DataError("climate file not found: " + climate_path);
    if (!fs::exists(measurements_path))
        throw DataError("measurements file not found: " + measurements_path);
    const ClimateDataset climate = resample_climate_hourly(load_climate_csv(climate_path));
    const TimeSeries measured = load_fit_measurements(measurements_path, kind);

    const FitResult r = fit(fc, climate, measured, kind);

    const bool node = kind == ModelKind::kHygric ? fc.fixed_node : true;
    const SimulationResult sim = simulate_params(r.params, climate, kind, node);
    const fs::path output_csv = out_path(opts, "fit_output.csv");
    const std::string column = kind == ModelKind::kThermal ? "t_i" : "p_i";
    write_timeseries_csv(output_csv.string(), outputs_to_series(sim, climate.start()), column);

    const Alignment align = align_hourly(climate, measured);
    TimeSeries residual;
    residual.start = climate.start() + static_cast<int64_t>(align.climate_offset) * 3600;
    residual.step = 3600;
    residual.values.assign(align.length, std::numeric_limits<double>::quiet_NaN());
    residual.flags.assign(align.length, SampleFlag::kMissing);
    for (size_t k = 0; k < align.length; ++k) {
        const size_t mi = align.measured_offset + k;
        if (measured.flags[mi] == SampleFlag::kMissing) continue;
        residual.values[k] =
            measured.values[mi] -
            sim.outputs(0, static_cast<Eigen::Index>(align.climate_offset + k));
        residual.flags[k] = SampleFlag::kPresent;
    }
    const fs::path residual_csv = out_path(opts, "fit_residual.csv");
    write_timeseries_csv(residual_csv.string(), residual, "residual");

    json result;
    result["provenance"] = make_provenance(cfg, fc.seed);
    result["model_kind"] = kind_name(kind);
    result["config"] = cfg;
    json params_obj;
    for (size_t i = 0; i < r.params.size(); ++i) params_obj[r.param_names[i]] = r.params[i];
    result["params"] = params_obj;
    result["objective_sse"] = r.objective;
    result["metrics"] = {{"mse", r.metrics.mse},
                         {"mae", r.metrics.mae},
                         {"fit_percent", r.metrics.fit_percent}};
    result["evals"] = r.evals;
    result["converged"] = r.converged;
    result["seed"] = r.seed;
    result["warnings"] = r.warnings;
    json starts = json::array();
    for (const auto& s : r.starts)
        starts.push_back({{"index", s.index},
                          {"objective", s.objective},
                          {"evals", s.evals},
                          {"converged", s.converged}});
    result["starts"] = starts;
    result["outputs"] = {{"fit_output_csv", output_csv.filename().string()},
                         {"fit_residual_csv", residual_csv.filename().string()}};
    result["timing"] = {{"elapsed_seconds", r.elapsed_seconds}};
    write_json_atomic(out_path(opts, "fit_result.json"), result);

    if (!opts.quiet) {
        std::cout << "fit " << kind_name(kind) << ": sse=" << r.objective
                  << " fit=" << r.metrics.fit_percent << "% evals=" << r.evals
                  << " converged=" << (r.converged ? "yes" : "no") << "\n";
        for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
    }
    return 0;
}

int run_bench(const CommonOpts& opts) {
    json cfg = opts.config_path.empty() ? json::object() : load_json_file(opts.config_path);
    const json bench_cfg = cfg.value("bench", json::object());
    const auto horizons = get_or<std::vector<double>>(bench_cfg, "horizons_hours",
                                                      {720.0, 8760.0, 87600.0, 876000.0});
    const double ode_cap = get_or(bench_cfg, "ode_cap_hours", 8760.0);

    const StateSpaceModel model = build_thermal_model(demo_thermal_params());
    const auto rows = benchmark(model, horizons, ode_cap);

    std::ostringstream csv;
    csv << "horizon_hours,integrator,wall_seconds,status\n";
    json jrows = json::array();
    for (const auto& row : rows) {
        csv << row.horizon_hours << "," << row.integrator << ",";
        if (!row.skipped) csv << row.wall_seconds;
        csv << "," << (row.skipped ? "skipped" : "ok") << "\n";
        json jr;
        jr["horizon_hours"] = row.horizon_hours;
        jr["integrator"] = row.integrator;
        jr["skipped"] = row.skipped;
        if (!row.skipped) jr["wall_seconds"] = row.wall_seconds;
        jrows.push_back(jr);
    }
    const fs::path csv_path = out_path(opts, "bench.csv");
    write_file_atomic(csv_path.string(), csv.str());

    std::optional<double> wall_100yr;
    bool monotone = true;
    double prev = -1.0;
    for (const auto& row : rows) {
        if (row.integrator != "state-space" || row.skipped) continue;
        if (row.horizon_hours == 876000.0) wall_100yr = row.wall_seconds;
        if (row.wall_seconds < prev) monotone = false;
        prev = row.wall_seconds;
    }

    json result;
    result["provenance"] = make_provenance(cfg, opts.seed.value_or(0));
    result["rows"] = jrows;
    result["bench_csv"] = csv_path.string();
    result["monotone_state_space"] = monotone;
    if (wall_100yr)
        result["pass_100yr_under_1s"] = *wall_100yr < 1.0;
    else
        result["pass_100yr_under_1s"] = nullptr;
    write_json_atomic(out_path(opts, "bench_result.json"), result);

    if (!opts.quiet) {
        std::cout << csv.str();
        if (wall_100yr)
            std::cout << "100-year state-space < 1 s: " << (*wall_100yr < 1.0 ? "PASS" : "FAIL")
                      << " (" << *wall_100yr << " s)\n";
    }
    return 0;
}

int run_metrics(const CommonOpts& opts, const std::string& measured_path,
                const std::string& simulated_path, int warmup) {
    if (warmup < 0) throw ConfigError("--warmup must be >= 0");
    if (!fs::exists(measured_path)) throw DataError("file not found: " + measured_path);
    if (!fs::exists(simulated_path)) throw DataError("file not found: " + simulated_path);
    const NamedSeries measured = load_series_csv(measured_path);
    const NamedSeries simulated = load_series_csv(simulated_path);

    const TimeSeries& m = measured.series;
    const TimeSeries& s = simulated.series;
    if (m.start != s.start || m.step != s.step || m.size() != s.size()) {
        std::ostringstream os;
        os << "series are not aligned: " << measured_path << " starts "
           << format_iso8601(m.start) << " step " << m.step << " n " << m.size() << ", "
           << simulated_path << " starts " << format_iso8601(s.start) << " step " << s.step
           << " n " << s.size();
        throw DataError(os.str());
    }

    std::vector<double> mv, sv;
    for (size_t k = static_cast<size_t>(warmup); k < m.size(); ++k) {
        if (m.flags[k] == SampleFlag::kMissing || s.flags[k] == SampleFlag::kMissing) continue;
        mv.push_back(m.values[k]);
        sv.push_back(s.values[k]);
    }
    if (mv.empty()) throw DataError("no overlapping usable samples after warm-up");

    json effective;
    effective["measured"] = measured_path;
    effective["simulated"] = simulated_path;
    effective["warmup_samples"] = warmup;

    json result;
    result["provenance"] = make_provenance(effective, opts.seed.value_or(0));
    result["mse"] = mse(mv, sv);
    result["mae"] = mae(mv, sv);
    result["fit_percent"] = goodness_of_fit(mv, sv);
    result["n_samples"] = mv.size();
    result["warmup_samples"] = warmup;
    write_json_atomic(out_path(opts, "metrics.json"), result);

    std::cout << result.dump(2) << "\n";
    return 0;
}

int run_convert(const CommonOpts& opts, const std::string& input_path, std::string direction) {
    if (!fs::exists(input_path)) throw DataError("file not found: " + input_path);
    const auto cols = measurement_columns(input_path);
    auto has = [&](const char* c) {
        return std::find(cols.begin(), cols.end(), c) != cols.end();
    };
    if (direction == "auto") direction = has("rh_i") ? "rh-to-pa" : "pa-to-rh";
    if (direction != "rh-to-pa" && direction != "pa-to-rh")
        throw ConfigError("--direction must be rh-to-pa, pa-to-rh or auto");
    if (!has("t_i"))
        throw DataError(input_path + ": conversion needs the paired t_i column");
    const char* source = direction == "rh-to-pa" ? "rh_i" : "p_i";
    if (!has(source))
        throw DataError(input_path + ": column '" + source + "' absent");

    const TimeSeries t = load_measurements_csv(input_path, "t_i");
    const TimeSeries src = load_measurements_csv(input_path, source);
    TimeSeries out = src;
    size_t clamped = 0;
    for (size_t i = 0; i < out.size(); ++i) {
        if (src.flags[i] == SampleFlag::kMissing || t.flags[i] == SampleFlag::kMissing) {
            out.values[i] = std::numeric_limits<double>::quiet_NaN();
            out.flags[i] = SampleFlag::kMissing;
            continue;
        }
        if (direction == "rh-to-pa") {
            out.values[i] = rh_to_vapour_pressure(t.values[i], src.values[i]);
        } else {
            const RhConversion conv = vapour_pressure_to_rh(t.values[i], src.values[i]);
            out.values[i] = conv.rh_percent;
            clamped += conv.clamped;
        }
    }
    out.unit = direction == "rh-to-pa" ? "Pa" : "%";

    const std::string column = direction == "rh-to-pa" ? "p_i" : "rh_i";
    const fs::path csv_path = out_path(opts, "convert_output.csv");
    write_timeseries_csv(csv_path.string(), out, column);

    json effective;
    effective["input"] = input_path;
    effective["direction"] = direction;
    json result;
    result["provenance"] = make_provenance(effective, opts.seed.value_or(0));
    result["direction"] = direction;
    result["rows"] = out.size();
    result["clamped"] = clamped;
    result["output_csv"] = csv_path.filename().string();
    write_json_atomic(out_path(opts, "convert_result.json"), result);

    if (!opts.quiet) {
        std::cout << "converted " << out.size() << " rows (" << direction << ") -> "
                  << csv_path.string() << "\n";
        if (clamped > 0)
            std::cerr << "warning: " << clamped << " values clamped to the RH range [0, 100]\n";
    }
    return 0;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON configuration file");
    cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    cmd->add_flag("--quiet", opts.quiet, "suppress progress output");
    cmd->add_option("--seed", opts.seed, "RNG seed, overrides the config");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grey-box thermal/hygric building models: simulate, fit, benchmark"};
    app.require_subcommand(1);

    CommonOpts sim_opts, fit_opts, bench_opts, metrics_opts, convert_opts;

    auto* cmd_sim = app.add_subcommand("simulate", "simulate a parameter set over a climate record");
    add_common(cmd_sim, sim_opts);

    auto* cmd_fit = app.add_subcommand("fit", "identify parameters from measurements");
    add_common(cmd_fit, fit_opts);

    auto* cmd_bench = app.add_subcommand("bench", "time both integrators over horizon ladder");
    add_common(cmd_bench, bench_opts);

    auto* cmd_metrics = app.add_subcommand("metrics", "MSE / MAE / FIT between two series");
    std::string measured_path, simulated_path;
    int warmup = 0;
    cmd_metrics->add_option("--measured", measured_path, "measured series CSV")->required();
    cmd_metrics->add_option("--simulated", simulated_path, "simulated series CSV")->required();
    cmd_metrics->add_option("--warmup", warmup, "samples to exclude")->capture_default_str();
    add_common(cmd_metrics, metrics_opts);

    auto* cmd_convert = app.add_subcommand("convert", "convert RH to vapour pressure or back");
    std::string input_path, direction = "auto";
    cmd_convert->add_option("--input", input_path, "measurement CSV with t_i")->required();
    cmd_convert->add_option("--direction", direction, "rh-to-pa | pa-to-rh | auto")
        ->capture_default_str();
    add_common(cmd_convert, convert_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_sim->parsed()) return run_simulate(sim_opts);
        if (cmd_fit->parsed()) return run_fit(fit_opts);
        if (cmd_bench->parsed()) return run_bench(bench_opts);
        if (cmd_metrics->parsed())
            return run_metrics(metrics_opts, measured_path, simulated_path, warmup);
        if (cmd_convert->parsed()) return run_convert(convert_opts, input_path, direction);
    } catch (const ConfigError& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error (data): " << e.what() << "\n";
        return 2;
    } catch (const NoFeasibleStartError& e) {
        std::cerr << "error (no feasible start): " << e.what() << "\n";
        return 4;
    } catch (const NumericError& e) {
        std::cerr << "error (numeric): " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
