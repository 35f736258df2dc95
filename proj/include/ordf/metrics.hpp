// Error functionals and the experiment harness: a scenario co-evolves drive,
// clouds, and the selected observer variant from a single master seed and
// records globally-averaged relative errors at a fixed cadence; sweeps rerun
// one scenario across an axis (hidden fraction, observation noise, cloud
// speed, sensor gap) with common initial conditions. Runs are bitwise
// deterministic per seed.
#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ordf/clouds.hpp"
#include "ordf/config.hpp"
#include "ordf/core.hpp"
#include "ordf/ecology.hpp"
#include "ordf/grid.hpp"
#include "ordf/io.hpp"
#include "ordf/observer.hpp"

namespace ordf {

// Globally-averaged relative error: sum |truth - estimate| / sum |truth|.
inline double global_relative_error(const Field& truth, const Field& estimate) {
    require_same_grid(truth, estimate, "global_relative_error");
    double num = 0.0, den = 0.0;
    for (int idx = 0; idx < truth.size(); ++idx) {
        num += std::fabs(truth[idx] - estimate[idx]);
        den += std::fabs(truth[idx]);
    }
    if (!(den > 0.0))
        throw std::invalid_argument("global_relative_error: truth is identically zero");
    return num / den;
}

// Per-cell alternative: mean of |truth - estimate| / (|truth| + eps).
inline double percell_relative_error(const Field& truth, const Field& estimate,
                                     double eps = 1e-8) {
    require_same_grid(truth, estimate, "percell_relative_error");
    double acc = 0.0;
    for (int idx = 0; idx < truth.size(); ++idx)
        acc += std::fabs(truth[idx] - estimate[idx]) / (std::fabs(truth[idx]) + eps);
    return acc / truth.size();
}

enum class ErrorMode { l1rel, percell };

inline double field_error(const Field& truth, const Field& estimate, ErrorMode mode) {
    return mode == ErrorMode::l1rel ? global_relative_error(truth, estimate)
                                    : percell_relative_error(truth, estimate);
}

// Relative errors over time. Parameter errors come in two flavors: vs the
// clean generator output (err_k / err_m) and vs the actual, noise-injected
// fields the drive integrates (err_k_actual / err_m_actual). They coincide
// when parameter noise is off.
struct ErrorSeries {
    std::vector<double> times;
    std::vector<double> err_P, err_Z;
    std::vector<double> err_k, err_m;
    std::vector<double> err_k_actual, err_m_actual;

    std::size_t size() const { return times.size(); }
};

inline std::string error_series_csv(const ErrorSeries& s) {
    std::string out = "time,err_P,err_Z,err_k,err_m,err_k_actual,err_m_actual\n";
    for (std::size_t r = 0; r < s.size(); ++r) {
        out += fmt17(s.times[r]) + ',' + fmt17(s.err_P[r]) + ',' + fmt17(s.err_Z[r]) + ',' +
               fmt17(s.err_k[r]) + ',' + fmt17(s.err_m[r]) + ',' + fmt17(s.err_k_actual[r]) +
               ',' + fmt17(s.err_m_actual[r]) + '\n';
    }
    return out;
}

struct ScenarioResult {
    ErrorSeries series;
    bool failed = false;
    std::string fail_reason;
    double fail_time = 0.0;
    DriveState drive;
    ObserverState observer;
    Field k_clean, m_clean;    // generator output
    Field k_actual, m_actual;  // fields the drive integrates
    CloudMask clouds;
    double realized_coverage = 0.0;

    double terminal_total_error() const {
        if (series.size() == 0) return std::numeric_limits<double>::quiet_NaN();
        const std::size_t r = series.size() - 1;
        return series.err_P[r] + series.err_Z[r] + series.err_k_actual[r] +
               series.err_m_actual[r];
    }
};

namespace detail {

inline Field floor_zero(Field f) {
    for (auto& v : f.values()) v = std::max(0.0, v);
    return f;
}

// Drive snapshot the swirl parameters are cut from: the default constant-
// parameter ecology evolved from the planar initial condition.
inline Field swirl_snapshot(const GridSpec& g, double time) {
    DriveParams p = DriveParams::constant(g);
    DriveState s = initial_conditions(g, InitialKind::planar_perturbation);
    const int n = static_cast<int>(std::llround(time / g.dt));
    for (int i = 0; i < n; ++i) s = drive_step(s, p, g);
    return s.P;
}

inline Field build_param_field(const ScenarioConfig& cfg, const GridSpec& g, bool is_k,
                               const Field* swirl_snap) {
    const std::string& form = is_k ? cfg.k_form : cfg.m_form;
    if (form == "constant") return Field(g, is_k ? cfg.k : cfg.m);
    if (form == "gaussian") {
        DriveParams p = gen_gaussian_params(g, cfg.gauss_a, cfg.gauss_c, 2.0 * cfg.gauss_cy,
                                            2.0 * cfg.gauss_cx, cfg.gauss_sigma);
        return is_k ? p.k : p.m;
    }
    if (form == "sinusoidal") {
        DriveParams p = gen_sinusoidal_params(g, cfg.sine_a, cfg.sine_b, cfg.sine_c,
                                              cfg.sine_d, cfg.sine_s, cfg.sine_t);
        return is_k ? p.k : p.m;
    }
    if (form == "swirl") {
        return is_k ? gen_swirl_params(*swirl_snap, cfg.swirl_k_lo, cfg.swirl_k_hi)
                    : gen_swirl_params(*swirl_snap, cfg.swirl_m_lo, cfg.swirl_m_hi);
    }
    if (form == "file") {
        Field f = read_snapshot(is_k ? cfg.param_file_k : cfg.param_file_m, g.dx, g.dt);
        if (f.nx() != g.nx || f.ny() != g.ny)
            throw error("parameter file grid does not match the configured grid");
        return Field(g, f.values());
    }
    throw std::invalid_argument("unknown parameter form: " + form);
}

}  // namespace detail

// Clean (generator) parameter fields for a config.
inline std::pair<Field, Field> scenario_parameters(const ScenarioConfig& cfg) {
    const GridSpec g = cfg.grid();
    Field snap;
    if (cfg.k_form == "swirl" || cfg.m_form == "swirl")
        snap = detail::swirl_snapshot(g, cfg.swirl_time);
    Field k = detail::build_param_field(cfg, g, true, &snap);
    Field m = detail::build_param_field(cfg, g, false, &snap);
    return {std::move(k), std::move(m)};
}

// Run one scenario to its epoch. Blow-ups do not throw; they mark the result
// failed and keep everything recorded up to the failure.
inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    const GridSpec g = cfg.grid();
    g.validate();

    ScenarioResult res;
    auto [k_clean, m_clean] = scenario_parameters(cfg);
    res.k_clean = k_clean;
    res.m_clean = m_clean;
    res.k_actual = cfg.noise_param > 0.0
                       ? detail::floor_zero(add_field_noise(
                             k_clean, cfg.noise_param, mix_seed(cfg.seed, seed_tag::param_noise_k)))
                       : k_clean;
    res.m_actual = cfg.noise_param > 0.0
                       ? detail::floor_zero(add_field_noise(
                             m_clean, cfg.noise_param, mix_seed(cfg.seed, seed_tag::param_noise_m)))
                       : m_clean;
    const DriveParams params{res.k_actual, res.m_actual, cfg.h};

    const InitialKind kind = cfg.ic == "planar" ? InitialKind::planar_perturbation
                                                : InitialKind::seeded_random;
    DriveState d = initial_conditions(g, kind, cfg.ic_eps, mix_seed(cfg.seed, seed_tag::ic));

    const ObserverVariant variant = cfg.observer_variant();
    ObserverState o = ObserverState::uniform(g, cfg.phat0, cfg.zhat0, cfg.khat0, cfg.mhat0);
    if (variant == ObserverVariant::occluded_sync) {
        o.khat = res.k_actual;
        o.mhat = res.m_actual;
    }

    res.clouds = cfg.cloud_coverage > 0.0
                     ? gen_clouds(g, cfg.cloud_count, cfg.cloud_coverage,
                                  mix_seed(cfg.seed, seed_tag::clouds), cfg.cloud_speed,
                                  cfg.sentinel)
                     : CloudMask::empty(g, cfg.cloud_speed, cfg.sentinel);
    res.realized_coverage = coverage(res.clouds);

    const ObserverConfig ocfg = cfg.observer_config();
    const SensorSpec sensors = cfg.sensor_spec();
    const ErrorMode emode = cfg.error_mode == "percell" ? ErrorMode::percell : ErrorMode::l1rel;
    const std::uint64_t obs_base = mix_seed(cfg.seed, seed_tag::obs_noise);

    auto record = [&](double t) {
        res.series.times.push_back(t);
        res.series.err_P.push_back(field_error(d.P, o.Phat, emode));
        res.series.err_Z.push_back(field_error(d.Z, o.Zhat, emode));
        res.series.err_k.push_back(field_error(res.k_clean, o.khat, emode));
        res.series.err_m.push_back(field_error(res.m_clean, o.mhat, emode));
        res.series.err_k_actual.push_back(field_error(res.k_actual, o.khat, emode));
        res.series.err_m_actual.push_back(field_error(res.m_actual, o.mhat, emode));
    };
    record(0.0);

    const int steps = cfg.steps();
    try {
        for (int n = 0; n < steps; ++n) {
            const double t = n * g.dt;
            // Noisy observations are clamped into the physical range so the
            // response denominators H + h stay bounded away from zero.
            const Field Pobs = cfg.noise_obs > 0.0
                                   ? clamp_range(add_field_noise(
                                                     d.P, cfg.noise_obs,
                                                     mix_seed(obs_base, static_cast<std::uint64_t>(n))),
                                                 cfg.clamp_lo, cfg.clamp_hi)
                                   : d.P;
            switch (variant) {
                case ObserverVariant::full:
                    o = response_step_full(o, Pobs, ocfg, g);
                    break;
                case ObserverVariant::occluded_sync:
                    o = response_step_occluded(o, Pobs, res.clouds.snapshot_at(t), ocfg, g);
                    break;
                case ObserverVariant::occluded_autosync:
                    o = response_step_autosync(o, Pobs, res.clouds.snapshot_at(t), ocfg, g);
                    break;
                case ObserverVariant::coarse: {
                    const Field H = switch_H(Pobs, res.clouds.snapshot_at(t), o.Phat);
                    o = response_step_coarse(o, H, sensors, ocfg, g);
                    break;
                }
            }
            d = drive_step(d, params, g);
            if ((n + 1) % cfg.record_every == 0) record((n + 1) * g.dt);
        }
    } catch (const blowup_error& e) {
        res.failed = true;
        res.fail_reason = e.what();
        res.fail_time = e.t;
    }
    res.drive = std::move(d);
    res.observer = std::move(o);
    return res;
}

enum class SweepAxis { hidden_fraction, noise_amplitude, cloud_speed, sensor_gap };

inline const char* sweep_axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::hidden_fraction: return "hidden_fraction";
        case SweepAxis::noise_amplitude: return "noise_amplitude";
        case SweepAxis::cloud_speed: return "cloud_speed";
        case SweepAxis::sensor_gap: return "sensor_gap";
    }
    return "?";
}

inline SweepAxis sweep_axis_from_name(const std::string& name) {
    if (name == "hidden_fraction") return SweepAxis::hidden_fraction;
    if (name == "noise_amplitude") return SweepAxis::noise_amplitude;
    if (name == "cloud_speed") return SweepAxis::cloud_speed;
    if (name == "sensor_gap") return SweepAxis::sensor_gap;
    throw std::invalid_argument("unknown sweep axis: " + name);
}

inline ScenarioConfig apply_sweep_axis(ScenarioConfig cfg, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::hidden_fraction: cfg.cloud_coverage = value; break;
        case SweepAxis::noise_amplitude: cfg.noise_obs = value; break;
        case SweepAxis::cloud_speed: cfg.cloud_speed = value; break;
        case SweepAxis::sensor_gap: cfg.sensor_gap = static_cast<int>(std::llround(value)); break;
    }
    return cfg;
}

struct SweepRow {
    double value = 0.0;
    bool ok = false;
    std::string status;  // "ok" or the failure reason
    double err_P = 0.0, err_Z = 0.0, err_k = 0.0, err_m = 0.0;
    double err_k_actual = 0.0, err_m_actual = 0.0;

    double total() const { return err_P + err_Z + err_k_actual + err_m_actual; }
};

struct SweepTable {
    SweepAxis axis = SweepAxis::hidden_fraction;
    std::vector<SweepRow> rows;
};

// One scenario per axis value; rows are independent (each point re-derives
// everything from the base config and master seed, so initial conditions are
// common across the sweep). A blown-up point becomes a failure row and the
// sweep continues.
inline SweepTable sweep(const ScenarioConfig& cfg, SweepAxis axis,
                        const std::vector<double>& values) {
    SweepTable table;
    table.axis = axis;
    for (double v : values) {
        const ScenarioResult r = run_scenario(apply_sweep_axis(cfg, axis, v));
        SweepRow row;
        row.value = v;
        row.ok = !r.failed;
        row.status = r.failed ? r.fail_reason : "ok";
        if (r.series.size() > 0) {
            const std::size_t e = r.series.size() - 1;
            row.err_P = r.series.err_P[e];
            row.err_Z = r.series.err_Z[e];
            row.err_k = r.series.err_k[e];
            row.err_m = r.series.err_m[e];
            row.err_k_actual = r.series.err_k_actual[e];
            row.err_m_actual = r.series.err_m_actual[e];
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline std::string sweep_csv(const SweepTable& t) {
    std::string out = std::string(sweep_axis_name(t.axis)) +
                      ",status,err_P,err_Z,err_k,err_m,err_k_actual,err_m_actual\n";
    for (const auto& r : t.rows) {
        out += fmt17(r.value) + ',' + (r.ok ? "ok" : r.status) + ',' + fmt17(r.err_P) + ',' +
               fmt17(r.err_Z) + ',' + fmt17(r.err_k) + ',' + fmt17(r.err_m) + ',' +
               fmt17(r.err_k_actual) + ',' + fmt17(r.err_m_actual) + '\n';
    }
    return out;
}

// The two printed adaptation laws disagree on the sign of the shared error
// term, so convergence on a reduced replica of the scenario is the ground
// truth: try all four sign combinations on a small grid and return the pair
// with the smallest terminal total error (the variant's literal form wins
// ties).
inline std::pair<int, int> probe_adaptation_signs(const ScenarioConfig& cfg,
                                                  int probe_nx = 48, int probe_ny = 24,
                                                  double probe_epoch = 400.0) {
    ScenarioConfig small = cfg;
    small.nx = probe_nx;
    small.ny = probe_ny;
    small.epoch = std::min(cfg.epoch, probe_epoch);
    small.record_every = small.steps();

    const ObserverConfig lit = ObserverConfig::defaults_for(cfg.observer_variant());
    std::vector<std::pair<int, int>> combos = {{lit.sign_k, lit.sign_m}};
    for (int sk : {+1, -1})
        for (int sm : {+1, -1})
            if (!(sk == lit.sign_k && sm == lit.sign_m)) combos.emplace_back(sk, sm);

    std::pair<int, int> best = combos.front();
    double best_score = std::numeric_limits<double>::infinity();
    for (auto [sk, sm] : combos) {
        small.sign_k = sk;
        small.sign_m = sm;
        const ScenarioResult r = run_scenario(small);
        const double score = r.failed ? std::numeric_limits<double>::infinity()
                                      : r.terminal_total_error();
        if (score < best_score) {
            best_score = score;
            best = {sk, sm};
        }
    }
    return best;
}

}  // namespace ordf
