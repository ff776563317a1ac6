#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <greybox/errors.hpp>
#include <greybox/identify.hpp>
#include <greybox/synthetic.hpp>

#include <cmath>
#include <vector>

#include "synth.hpp"

using greybox::ClimateDataset;
using greybox::FitConfig;
using greybox::FitResult;
using greybox::ModelKind;
using greybox::TimeSeries;

namespace {

std::vector<double> scaled_except_fixed(const std::vector<double>& x, ModelKind kind,
                                        double k) {
    std::vector<double> out = x;
    const size_t fixed_idx = kind == ModelKind::kThermal ? 12 : 6;
    for (size_t i = 0; i < out.size(); ++i)
        if (i != fixed_idx) out[i] *= k;
    return out;
}

}  // namespace

TEST_CASE("parameter vectors pack and unpack losslessly") {
    const auto t = synth::thermal_truth();
    REQUIRE(t.size() == 13);
    CHECK(greybox::pack_thermal(greybox::unpack_thermal(t)) == t);

    const auto h = synth::hygric_truth();
    REQUIRE(h.size() == 7);
    CHECK(greybox::pack_hygric(greybox::unpack_hygric(h, true), true) == h);

    const std::vector<double> h5{0.04, 0.06, 0.05, 3.5e4, 1e3};
    const greybox::HygricParams p = greybox::unpack_hygric(h5, false);
    CHECK(p.g_f == 0.0);
    CHECK(greybox::pack_hygric(p, false) == h5);

    CHECK_THROWS_AS((void)greybox::unpack_thermal(h), std::invalid_argument);
}

TEST_CASE("names, default bounds and default starts are mutually consistent") {
    for (const bool node : {true, false}) {
        for (const ModelKind kind : {ModelKind::kThermal, ModelKind::kHygric}) {
            const auto names = greybox::param_names(kind, node);
            const auto bounds = greybox::default_bounds(kind, node);
            const auto start = greybox::default_initial(kind, node);
            REQUIRE(names.size() == bounds.size());
            REQUIRE(names.size() == start.size());
            CHECK_NOTHROW(greybox::check_bounds(bounds));
            for (size_t i = 0; i < names.size(); ++i) {
                CHECK(start[i] >= bounds.lower[i]);
                CHECK(start[i] <= bounds.upper[i]);
            }
        }
    }
    CHECK(greybox::param_names(ModelKind::kThermal).size() == 13);
    CHECK(greybox::param_names(ModelKind::kHygric, true).size() == 7);
    CHECK(greybox::param_names(ModelKind::kHygric, false).size() == 5);

    // The indoor-air capacitance is pinned to a tight band; everything else
    // spans decades.
    const auto tb = greybox::default_bounds(ModelKind::kThermal);
    CHECK(tb.upper[6] / tb.lower[6] < 1.5);
    CHECK(tb.upper[5] / tb.lower[5] > 100.0);
}

TEST_CASE("fit data preparation aligns series and propagates missing samples") {
    const ClimateDataset climate = greybox::make_synthetic_climate(400, 9);
    TimeSeries measured = synth::measured_from_truth(climate, synth::thermal_truth(),
                                                     ModelKind::kThermal, true, 0.0, 0);
    measured.values[50] = std::nan("");
    measured.flags[50] = greybox::SampleFlag::kMissing;

    const greybox::FitData data =
        greybox::prepare_fit_data(climate, measured, ModelKind::kThermal);
    CHECK(data.inputs.rows() == 6);
    CHECK(data.inputs.cols() == 400);
    CHECK(data.measured.size() == 400);
    CHECK(data.mask[49] == 1);
    CHECK(data.mask[50] == 0);
    CHECK(data.inputs(0, 7) == climate.t_e.values[7]);
    CHECK(data.inputs(3, 7) == climate.irr_s.values[7]);

    ClimateDataset gappy = climate;
    gappy.t_e.values[100] = std::nan("");
    gappy.t_e.flags[100] = greybox::SampleFlag::kMissing;
    try {
        (void)greybox::prepare_fit_data(gappy, measured, ModelKind::kThermal);
        FAIL("expected DataError");
    } catch (const greybox::DataError& e) {
        CHECK(std::string(e.what()).find("gap") != std::string::npos);
    }
}

TEST_CASE("the objective is zero at the truth and grows under perturbation") {
    const ClimateDataset climate = greybox::make_synthetic_climate(1500, 10);
    const auto truth = synth::thermal_truth();
    const TimeSeries measured =
        synth::measured_from_truth(climate, truth, ModelKind::kThermal, true, 0.0, 0);

    const double at_truth =
        greybox::objective(truth, climate, measured, ModelKind::kThermal);
    CHECK(at_truth < 1e-8);

    auto bumped = truth;
    bumped[0] *= 1.1;
    const double off_truth =
        greybox::objective(bumped, climate, measured, ModelKind::kThermal);
    CHECK(off_truth > at_truth);
    CHECK(off_truth > 1e-6);
}

TEST_CASE("the objective is invariant under doubling of the scale group") {
    const ClimateDataset climate = greybox::make_synthetic_climate(1200, 11);
    const auto truth = synth::thermal_truth();
    const TimeSeries measured =
        synth::measured_from_truth(climate, truth, ModelKind::kThermal, true, 0.0, 0);

    auto base = truth;
    base[0] *= 1.05;  // move off the optimum so the value is informative
    const double v = greybox::objective(base, climate, measured, ModelKind::kThermal);
    const double v2 = greybox::objective(scaled_except_fixed(base, ModelKind::kThermal, 2.0),
                                         climate, measured, ModelKind::kThermal);
    REQUIRE(v > 0.0);
    CHECK(v == v2);

    const auto htruth = synth::hygric_truth();
    const TimeSeries hmeas =
        synth::measured_from_truth(climate, htruth, ModelKind::kHygric, true, 0.0, 0);
    auto hbase = htruth;
    hbase[1] *= 1.07;
    const double hv = greybox::objective(hbase, climate, hmeas, ModelKind::kHygric);
    const double hv2 = greybox::objective(scaled_except_fixed(hbase, ModelKind::kHygric, 2.0),
                                          climate, hmeas, ModelKind::kHygric);
    REQUIRE(hv > 0.0);
    CHECK(hv == hv2);
}

TEST_CASE("invalid or hopeless draws return the sentinel instead of throwing") {
    const ClimateDataset climate = greybox::make_synthetic_climate(800, 12);
    const auto truth = synth::thermal_truth();
    const TimeSeries measured =
        synth::measured_from_truth(climate, truth, ModelKind::kThermal, true, 0.0, 0);

    auto bad = truth;
    bad[5] = -1.0;  // negative capacitance
    CHECK(greybox::objective(bad, climate, measured, ModelKind::kThermal) ==
          greybox::kObjectiveSentinel);

    auto nan_draw = truth;
    nan_draw[2] = std::nan("");
    CHECK(greybox::objective(nan_draw, climate, measured, ModelKind::kThermal) ==
          greybox::kObjectiveSentinel);
}

TEST_CASE("objective wrappers agree with each other") {
    const ClimateDataset climate = greybox::make_synthetic_climate(900, 13);
    const auto truth = synth::hygric_truth();
    TimeSeries measured =
        synth::measured_from_truth(climate, truth, ModelKind::kHygric, true, 0.3, 21);

    auto data = std::make_shared<const greybox::FitData>(
        greybox::prepare_fit_data(climate, measured, ModelKind::kHygric));
    const auto fn = greybox::make_objective(data, ModelKind::kHygric, true, 720);

    auto probe = truth;
    probe[0] *= 1.2;
    const double direct = greybox::objective(probe, climate, measured, ModelKind::kHygric);
    CHECK(fn(probe) == direct);
    CHECK(greybox::objective_on(*data, probe, ModelKind::kHygric, true, 720) == direct);
}

TEST_CASE("simulate_params honours the initial-state policy") {
    const ClimateDataset climate = greybox::make_synthetic_climate(300, 14);
    const auto truth = synth::thermal_truth();
    const auto steady = greybox::simulate_params(truth, climate, ModelKind::kThermal, true,
                                                 3600.0, greybox::X0Policy::kSteadyState);
    const auto cold = greybox::simulate_params(truth, climate, ModelKind::kThermal, true,
                                               3600.0, greybox::X0Policy::kZero);
    CHECK(std::abs(steady.outputs(0, 0) - cold.outputs(0, 0)) > 0.5);
    const Eigen::Index last = steady.outputs.cols() - 1;
    CHECK(std::abs(steady.outputs(0, last) - cold.outputs(0, last)) < 0.05);
}

TEST_CASE("fit configuration errors are rejected up front") {
    const ClimateDataset climate = greybox::make_synthetic_climate(400, 15);
    const TimeSeries measured = synth::measured_from_truth(
        climate, synth::hygric_truth(), ModelKind::kHygric, true, 0.0, 0);

    FitConfig cfg;
    cfg.bounds = greybox::Bounds{{0.0}, {1.0}};
    CHECK_THROWS_AS((void)greybox::fit(cfg, climate, measured, ModelKind::kHygric),
                    greybox::ConfigError);

    cfg = FitConfig{};
    cfg.n_starts = 0;
    CHECK_THROWS_AS((void)greybox::fit(cfg, climate, measured, ModelKind::kHygric),
                    greybox::ConfigError);

    cfg = FitConfig{};
    cfg.warmup_samples = 400;
    CHECK_THROWS_AS((void)greybox::fit(cfg, climate, measured, ModelKind::kHygric),
                    greybox::DataError);

    cfg = FitConfig{};
    cfg.f_tol = 0.0;
    CHECK_THROWS_AS((void)greybox::fit(cfg, climate, measured, ModelKind::kHygric),
                    greybox::ConfigError);
}

TEST_CASE("a hopeless target raises the no-feasible-start error") {
    const ClimateDataset climate = greybox::make_synthetic_climate(750, 16);
    TimeSeries absurd = greybox::make_series(climate.start(), climate.step(),
                                             std::vector<double>(750, 1e200), "Pa");
    FitConfig cfg;
    cfg.n_starts = 2;
    cfg.max_evals = 200;
    cfg.polish_rounds = 0;
    cfg.warmup_samples = 24;
    CHECK_THROWS_AS((void)greybox::fit(cfg, climate, absurd, ModelKind::kHygric),
                    greybox::NoFeasibleStartError);
}

TEST_CASE("a short hygric round trip recovers the measured response") {
    const ClimateDataset climate = greybox::make_synthetic_climate(1440, 17);
    const TimeSeries measured = synth::measured_from_truth(
        climate, synth::hygric_truth(), ModelKind::kHygric, true, 0.0, 0);

    FitConfig cfg;
    cfg.n_starts = 3;
    cfg.max_evals = 4000;
    cfg.seed = 4;
    cfg.warmup_samples = 240;
    cfg.bounds = synth::hygric_fit_bounds(true);
    const FitResult r = greybox::fit(cfg, climate, measured, ModelKind::kHygric);

    CHECK(r.converged);
    CHECK(r.metrics.fit_percent > 90.0);
    CHECK(r.param_names.size() == 7);
    REQUIRE(r.params.size() == 7);
    for (size_t i = 0; i < r.params.size(); ++i) {
        CHECK(r.params[i] >= cfg.bounds.lower[i]);
        CHECK(r.params[i] <= cfg.bounds.upper[i]);
    }
    CHECK(r.evals > 0);
    CHECK(r.starts.size() == 3);
    CHECK(r.seed == 4);
    CHECK(r.elapsed_seconds > 0.0);
}

TEST_CASE("genetic fits are reproducible seed for seed") {
    const ClimateDataset climate = greybox::make_synthetic_climate(720, 18);
    const TimeSeries measured = synth::measured_from_truth(
        climate, synth::hygric_truth(), ModelKind::kHygric, true, 0.5, 3);

    FitConfig cfg;
    cfg.solver = greybox::Solver::kGenetic;
    cfg.population = 24;
    cfg.generations = 20;
    cfg.max_evals = 100000;
    cfg.polish_rounds = 1;
    cfg.seed = 99;
    cfg.warmup_samples = 120;
    cfg.bounds = synth::hygric_fit_bounds(true);

    const FitResult a = greybox::fit(cfg, climate, measured, ModelKind::kHygric);
    const FitResult b = greybox::fit(cfg, climate, measured, ModelKind::kHygric);
    CHECK(a.params == b.params);
    CHECK(a.objective == b.objective);
    CHECK(a.evals == b.evals);
    CHECK(a.metrics.fit_percent == b.metrics.fit_percent);
}

TEST_CASE("parallel and sequential multistart fits are identical") {
    const ClimateDataset climate = greybox::make_synthetic_climate(1000, 19);
    const TimeSeries measured = synth::measured_from_truth(
        climate, synth::hygric_truth(), ModelKind::kHygric, true, 0.2, 5);

    FitConfig cfg;
    cfg.n_starts = 4;
    cfg.max_evals = 1500;
    cfg.seed = 7;
    cfg.warmup_samples = 168;
    cfg.bounds = synth::hygric_fit_bounds(true);
    cfg.parallel = false;
    const FitResult seq = greybox::fit(cfg, climate, measured, ModelKind::kHygric);
    cfg.parallel = true;
    const FitResult par = greybox::fit(cfg, climate, measured, ModelKind::kHygric);

    CHECK(seq.params == par.params);
    CHECK(seq.objective == par.objective);
    CHECK(seq.evals == par.evals);
}

TEST_CASE("short series fits carry a warning about the thin scoring window") {
    const ClimateDataset climate = greybox::make_synthetic_climate(900, 20);
    const TimeSeries measured = synth::measured_from_truth(
        climate, synth::hygric_truth(), ModelKind::kHygric, true, 0.0, 0);

    FitConfig cfg;
    cfg.n_starts = 1;
    cfg.max_evals = 400;
    cfg.warmup_samples = 720;
    cfg.polish_rounds = 0;
    cfg.bounds = synth::hygric_fit_bounds(true);
    const FitResult r = greybox::fit(cfg, climate, measured, ModelKind::kHygric);
    bool warned = false;
    for (const auto& w : r.warnings) warned = warned || w.find("post-warm-up") != std::string::npos;
    CHECK(warned);
}
