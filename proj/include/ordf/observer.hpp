// Response systems and parameter-adaptation laws. Four variants:
//
//   full              diffusive coupling kappa (P - Phat) everywhere; Zhat
//                     equation keeps the observed P in its denominator
//                     (direct replacement); adaptation
//                     khat' = -s (P - Phat), mhat' = -s (P - Phat) Phat.
//   occluded-sync     coupling through the switching function H[P] (Phat on
//                     occluded cells, P elsewhere); parameters held at their
//                     true values; Zhat denominator uses Phat.
//   occluded-autosync H[P] coupling plus adaptation
//                     khat' = +s1 (H - Phat), mhat' = +s2 (H - Phat) Phat;
//                     Zhat denominator uses H[P].
//   coarse            coupling kappa G_n on sensor patches (zero between
//                     sensors), Zhat denominator uses the piecewise-constant
//                     sensor average Ptilde (Phat off-sensor), adaptation
//                     driven by (Ptilde - Phat) with optional diffusion on
//                     khat, mhat.
//
// The two printed adaptation laws disagree on sign for the same error term,
// so the sign is a per-variant configuration defaulting to each law's literal
// form; convergence on a probe run is the ground truth for choosing.
//
// After every step Phat and Zhat are clamped to [clamp_lo, clamp_hi] and
// khat, mhat are floored at zero. All updates are simultaneous (Jacobi style)
// from time-level-n values.
#pragma once

#include <cstdint>
#include <vector>

#include "ordf/clouds.hpp"
#include "ordf/core.hpp"
#include "ordf/ecology.hpp"
#include "ordf/grid.hpp"
#include "ordf/sensing.hpp"

namespace ordf {

enum class ObserverVariant { full, occluded_sync, occluded_autosync, coarse };

struct ObserverConfig {
    ObserverVariant variant = ObserverVariant::full;
    double kappa = 2.4;
    double s = 30.0;   // shared adaptation gain of the full variant
    double s1 = 0.2;   // khat gain (autosync / coarse)
    double s2 = 0.6;   // mhat gain (autosync / coarse)
    double h = 0.4;    // half-saturation, assumed known
    int sign_k = -1;   // adaptation sign for khat
    int sign_m = -1;   // adaptation sign for mhat
    bool param_diffusion = false;
    double clamp_lo = 0.0;
    double clamp_hi = 2.0;
    InnovationNorm innov_norm = InnovationNorm::patch;

    // Literal gains and signs of each variant's printed form.
    static ObserverConfig defaults_for(ObserverVariant v) {
        ObserverConfig c;
        c.variant = v;
        switch (v) {
            case ObserverVariant::full:
                c.kappa = 2.4;
                c.sign_k = -1;
                c.sign_m = -1;
                break;
            case ObserverVariant::occluded_sync:
                c.kappa = 2.6;
                c.sign_k = -1;
                c.sign_m = -1;
                break;
            case ObserverVariant::occluded_autosync:
                c.kappa = 0.625;
                c.sign_k = +1;
                c.sign_m = +1;
                break;
            case ObserverVariant::coarse:
                c.kappa = 0.625;
                c.sign_k = +1;
                c.sign_m = +1;
                c.param_diffusion = true;
                break;
        }
        return c;
    }
};

struct ObserverState {
    Field Phat;
    Field Zhat;
    Field khat;
    Field mhat;
    double t = 0.0;

    static ObserverState uniform(const GridSpec& g, double p0 = 2.0, double z0 = 2.0,
                                 double k0 = 5.0, double m0 = 5.0) {
        return ObserverState{Field(g, p0), Field(g, z0), Field(g, k0), Field(g, m0), 0.0};
    }
};

// Switching function: the observer's own estimate where occluded, the
// observation where visible.
inline Field switch_H(const Field& Pobs, const std::vector<std::uint8_t>& occluded,
                      const Field& Phat) {
    require_same_grid(Pobs, Phat, "switch_H");
    if (occluded.size() != static_cast<std::size_t>(Pobs.size()))
        throw std::invalid_argument("switch_H: mask size mismatch");
    Field out(Pobs.grid());
    for (int idx = 0; idx < Pobs.size(); ++idx)
        out[idx] = occluded[static_cast<std::size_t>(idx)] ? Phat[idx] : Pobs[idx];
    return out;
}

inline Field switch_H(const Field& Pobs, const CloudMask& mask, const Field& Phat) {
    return switch_H(Pobs, mask.snapshot(), Phat);
}

namespace detail {

inline double clamped(double v, double lo, double hi) {
    return std::min(hi, std::max(lo, v));
}

inline void finish_observer_step(ObserverState& o, const ObserverConfig& cfg) {
    check_observer_sane(o.Phat, "Phat", o.t);
    check_observer_sane(o.Zhat, "Zhat", o.t);
    check_observer_sane(o.khat, "khat", o.t);
    check_observer_sane(o.mhat, "mhat", o.t);
    o.Phat = clamp_range(o.Phat, cfg.clamp_lo, cfg.clamp_hi);
    o.Zhat = clamp_range(o.Zhat, cfg.clamp_lo, cfg.clamp_hi);
}

}  // namespace detail

// Full-observation variant. The driving field enters the Phat coupling and
// the Zhat denominator; khat and mhat adapt with the shared gain s.
inline ObserverState response_step_full(const ObserverState& o, const Field& Pobs,
                                        const ObserverConfig& cfg, const GridSpec& g) {
    require_same_grid(o.Phat, Pobs, "response_step_full");
    const double dt = g.dt;
    const double h = cfg.h;
    const double kap = cfg.kappa;
    const double gk = cfg.sign_k * cfg.s;
    const double gm = cfg.sign_m * cfg.s;
    const Field lapP = laplacian_zero_flux(o.Phat);
    const Field lapZ = laplacian_zero_flux(o.Zhat);
    ObserverState out{Field(g), Field(g), Field(g), Field(g), o.t + dt};
    const double* P = o.Phat.data();
    const double* Z = o.Zhat.data();
    const double* K = o.khat.data();
    const double* M = o.mhat.data();
    const double* O = Pobs.data();
    const double* lp = lapP.data();
    const double* lz = lapZ.data();
    for (int idx = 0; idx < g.cells(); ++idx) {
        const double pv = P[idx];
        const double zv = Z[idx];
        const double e = O[idx] - pv;
        out.Phat[idx] = pv + dt * (lp[idx] + pv * (1.0 - pv) - pv * zv / (pv + h) + kap * e);
        out.Zhat[idx] = zv + dt * (lz[idx] + K[idx] * pv * zv / (O[idx] + h) - M[idx] * zv);
        out.khat[idx] = std::max(0.0, K[idx] + dt * (gk * e));
        out.mhat[idx] = std::max(0.0, M[idx] + dt * (gm * e * pv));
    }
    detail::finish_observer_step(out, cfg);
    return out;
}

// State-synchronization variant under occlusion: parameters are carried in
// the state (set to the true fields) and left untouched.
inline ObserverState response_step_occluded(const ObserverState& o, const Field& Pobs,
                                            const std::vector<std::uint8_t>& occluded,
                                            const ObserverConfig& cfg, const GridSpec& g) {
    require_same_grid(o.Phat, Pobs, "response_step_occluded");
    if (occluded.size() != static_cast<std::size_t>(Pobs.size()))
        throw std::invalid_argument("response_step_occluded: mask size mismatch");
    const double dt = g.dt;
    const double h = cfg.h;
    const double kap = cfg.kappa;
    const Field lapP = laplacian_zero_flux(o.Phat);
    const Field lapZ = laplacian_zero_flux(o.Zhat);
    ObserverState out{Field(g), Field(g), o.khat, o.mhat, o.t + dt};
    const double* P = o.Phat.data();
    const double* Z = o.Zhat.data();
    const double* K = o.khat.data();
    const double* M = o.mhat.data();
    const double* O = Pobs.data();
    const double* lp = lapP.data();
    const double* lz = lapZ.data();
    for (int idx = 0; idx < g.cells(); ++idx) {
        const double pv = P[idx];
        const double zv = Z[idx];
        const double hv = occluded[static_cast<std::size_t>(idx)] ? pv : O[idx];
        const double e = hv - pv;  // exactly zero on occluded cells
        out.Phat[idx] = pv + dt * (lp[idx] + pv * (1.0 - pv) - pv * zv / (pv + h) + kap * e);
        out.Zhat[idx] = zv + dt * (lz[idx] + K[idx] * pv * zv / (pv + h) - M[idx] * zv);
    }
    detail::finish_observer_step(out, cfg);
    return out;
}

// Autosynchronization under occlusion: H[P] drives the coupling, the Zhat
// denominator, and both adaptation laws. param_diffusion optionally adds
// lap(khat), lap(mhat) to the adaptation (the averaged-observation law's
// mechanism for carrying information into poorly driven cells).
inline ObserverState response_step_autosync(const ObserverState& o, const Field& Pobs,
                                            const std::vector<std::uint8_t>& occluded,
                                            const ObserverConfig& cfg, const GridSpec& g) {
    require_same_grid(o.Phat, Pobs, "response_step_autosync");
    if (occluded.size() != static_cast<std::size_t>(Pobs.size()))
        throw std::invalid_argument("response_step_autosync: mask size mismatch");
    const double dt = g.dt;
    const double h = cfg.h;
    const double kap = cfg.kappa;
    const double gk = cfg.sign_k * cfg.s1;
    const double gm = cfg.sign_m * cfg.s2;
    const Field lapP = laplacian_zero_flux(o.Phat);
    const Field lapZ = laplacian_zero_flux(o.Zhat);
    Field lapK, lapM;
    if (cfg.param_diffusion) {
        lapK = laplacian_zero_flux(o.khat);
        lapM = laplacian_zero_flux(o.mhat);
    }
    ObserverState out{Field(g), Field(g), Field(g), Field(g), o.t + dt};
    const double* P = o.Phat.data();
    const double* Z = o.Zhat.data();
    const double* K = o.khat.data();
    const double* M = o.mhat.data();
    const double* O = Pobs.data();
    const double* lp = lapP.data();
    const double* lz = lapZ.data();
    for (int idx = 0; idx < g.cells(); ++idx) {
        const double pv = P[idx];
        const double zv = Z[idx];
        const double hv = occluded[static_cast<std::size_t>(idx)] ? pv : O[idx];
        const double e = hv - pv;
        out.Phat[idx] = pv + dt * (lp[idx] + pv * (1.0 - pv) - pv * zv / (pv + h) + kap * e);
        out.Zhat[idx] = zv + dt * (lz[idx] + K[idx] * pv * zv / (hv + h) - M[idx] * zv);
        if (cfg.param_diffusion) {
            out.khat[idx] = std::max(0.0, K[idx] + dt * (lapK[idx] + gk * e));
            out.mhat[idx] = std::max(0.0, M[idx] + dt * (lapM[idx] + gm * e * pv));
        } else {
            out.khat[idx] = std::max(0.0, K[idx] + dt * (gk * e));
            out.mhat[idx] = std::max(0.0, M[idx] + dt * (gm * e * pv));
        }
    }
    detail::finish_observer_step(out, cfg);
    return out;
}

// Averaged-observation variant. `Hfield` is the switching function's output
// (use switch_H upstream; pass the raw observation when nothing is occluded).
// Coupling acts only on sensor cells through the per-sensor innovation; the
// sensor average Ptilde is held piecewise constant on patches and falls back
// to Phat between sensors, so off-sensor adaptation is exactly zero.
inline ObserverState response_step_coarse(const ObserverState& o, const Field& Hfield,
                                          const SensorSpec& sensors,
                                          const ObserverConfig& cfg, const GridSpec& g) {
    require_same_grid(o.Phat, Hfield, "response_step_coarse");
    const double dt = g.dt;
    const double h = cfg.h;
    const double kap = cfg.kappa;
    const double gk = cfg.sign_k * cfg.s1;
    const double gm = cfg.sign_m * cfg.s2;
    const SensorValues innov = innovation(Hfield, o.Phat, sensors, cfg.innov_norm);
    const SensorValues avg = local_averages(Hfield, sensors);
    const Field G = scatter_sensors(g, sensors, innov, [](int, int) { return 0.0; });
    const Field Pt = scatter_sensors(g, sensors, avg,
                                     [&](int i, int j) { return o.Phat(i, j); });
    const Field lapP = laplacian_zero_flux(o.Phat);
    const Field lapZ = laplacian_zero_flux(o.Zhat);
    Field lapK, lapM;
    if (cfg.param_diffusion) {
        lapK = laplacian_zero_flux(o.khat);
        lapM = laplacian_zero_flux(o.mhat);
    }
    ObserverState out{Field(g), Field(g), Field(g), Field(g), o.t + dt};
    const double* P = o.Phat.data();
    const double* Z = o.Zhat.data();
    const double* K = o.khat.data();
    const double* M = o.mhat.data();
    const double* lp = lapP.data();
    const double* lz = lapZ.data();
    for (int idx = 0; idx < g.cells(); ++idx) {
        const double pv = P[idx];
        const double zv = Z[idx];
        const double et = Pt[idx] - pv;
        out.Phat[idx] = pv + dt * (lp[idx] + pv * (1.0 - pv) - pv * zv / (pv + h) + kap * G[idx]);
        out.Zhat[idx] = zv + dt * (lz[idx] + K[idx] * pv * zv / (Pt[idx] + h) - M[idx] * zv);
        if (cfg.param_diffusion) {
            out.khat[idx] = std::max(0.0, K[idx] + dt * (lapK[idx] + gk * et));
            out.mhat[idx] = std::max(0.0, M[idx] + dt * (lapM[idx] + gm * et * pv));
        } else {
            out.khat[idx] = std::max(0.0, K[idx] + dt * (gk * et));
            out.mhat[idx] = std::max(0.0, M[idx] + dt * (gm * et * pv));
        }
    }
    detail::finish_observer_step(out, cfg);
    return out;
}

}  // namespace ordf
