// The drive system: a two-species predator-prey reaction-diffusion model
// (phytoplankton P, zooplankton Z) with Holling type II grazing,
//
//   dP/dt = lap(P) + P(1 - P) - P Z / (P + h)
//   dZ/dt = lap(Z) + k P Z / (P + h) - m Z
//
// stepped with forward Euler and the zero-flux five-point Laplacian. k and m
// may vary in space; h is a scalar. This module also provides the parameter
// field generators (Gaussian bump, sinusoidal sheet, rescaled-snapshot swirl),
// seeded noise injection, and the perturbed initial-condition families.
#pragma once

#include <cmath>
#include <random>
#include <utility>

#include "ordf/core.hpp"
#include "ordf/grid.hpp"

namespace ordf {

constexpr double kBlowupThreshold = 1e6;

struct DriveParams {
    Field k;       // zooplankton growth efficiency
    Field m;       // zooplankton mortality
    double h = 0.4;  // half-saturation constant

    static DriveParams constant(const GridSpec& g, double k = 2.0, double m = 0.6,
                                double h = 0.4) {
        return DriveParams{Field(g, k), Field(g, m), h};
    }
};

struct DriveState {
    Field P;
    Field Z;
    double t = 0.0;
};

// Homogeneous coexistence state of the reaction terms: P* = m h / (k - m),
// Z* = (1 - P*)(P* + h). Requires k > m.
inline std::pair<double, double> coexistence_state(double k = 2.0, double m = 0.6,
                                                   double h = 0.4) {
    if (!(k > m))
        throw std::invalid_argument("coexistence_state: requires k > m");
    const double pstar = m * h / (k - m);
    const double zstar = (1.0 - pstar) * (pstar + h);
    return {pstar, zstar};
}

namespace detail {

inline void check_drive_sane(const Field& f, const char* name, double t) {
    for (double v : f.values()) {
        if (!(std::fabs(v) <= kBlowupThreshold))
            throw blowup_error(std::string("drive blow-up in ") + name, t);
        if (v < -1e-7)
            throw blowup_error(std::string("negative density in ") + name, t);
    }
}

inline void check_observer_sane(const Field& f, const char* name, double t) {
    for (double v : f.values())
        if (!(std::fabs(v) <= kBlowupThreshold))
            throw blowup_error(std::string("observer blow-up in ") + name, t);
}

}  // namespace detail

// One forward-Euler step. Reads only time-level-n values; reports blow-up
// (and loss of nonnegativity) via blowup_error.
inline DriveState drive_step(const DriveState& s, const DriveParams& p, const GridSpec& g) {
    require_same_grid(s.P, s.Z, "drive_step");
    if (!(s.P.grid() == g))
        throw std::invalid_argument("drive_step: state grid mismatch");
    const double dt = g.dt;
    const double h = p.h;
    const Field lapP = laplacian_zero_flux(s.P);
    const Field lapZ = laplacian_zero_flux(s.Z);
    DriveState out{Field(g), Field(g), s.t + dt};
    const double* P = s.P.data();
    const double* Z = s.Z.data();
    const double* K = p.k.data();
    const double* M = p.m.data();
    const double* lp = lapP.data();
    const double* lz = lapZ.data();
    double* Pn = out.P.data();
    double* Zn = out.Z.data();
    for (int idx = 0; idx < g.cells(); ++idx) {
        const double pv = P[idx];
        const double zv = Z[idx];
        Pn[idx] = pv + dt * (lp[idx] + pv * (1.0 - pv) - pv * zv / (pv + h));
        Zn[idx] = zv + dt * (lz[idx] + K[idx] * pv * zv / (pv + h) - M[idx] * zv);
    }
    detail::check_drive_sane(out.P, "P", out.t);
    detail::check_drive_sane(out.Z, "Z", out.t);
    return out;
}

// Gaussian parameter sheet. Coordinates are cell indices: the bump is centered
// at (ncenter/2, mcenter/2), which need not lie inside the grid (the stated
// centers exceed the stated simulation grid; both are configurable).
//   k1 = a exp(-((x - n/2)^2 + (y - m/2)^2) / (2 sigma^2)),  m1 = (c/a) k1
inline DriveParams gen_gaussian_params(const GridSpec& g, double a = 2.0, double c = 0.6,
                                       double mcenter = 300.0, double ncenter = 900.0,
                                       double sigma = 400.0) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("gen_gaussian_params: sigma must be positive");
    DriveParams out{Field(g), Field(g), 0.4};
    const double cx = ncenter / 2.0;
    const double cy = mcenter / 2.0;
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double dxc = i - cx;
            const double dyc = j - cy;
            const double e = std::exp(-(dxc * dxc + dyc * dyc) * inv2s2);
            out.k(i, j) = a * e;
            out.m(i, j) = c * e;
        }
    }
    return out;
}

// Sinusoidal parameter sheets, cell-index coordinates:
//   k2 = a cos(b x + d) sin(b y) + s,   m2 = c cos(b x + d) sin(b y) + t
inline DriveParams gen_sinusoidal_params(const GridSpec& g, double a = 0.2,
                                         double b = M_PI / 150.0, double c = 0.6,
                                         double d = M_PI / 2.0, double s = 0.5,
                                         double t = 1.5) {
    DriveParams out{Field(g), Field(g), 0.4};
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double w = std::cos(b * i + d) * std::sin(b * j);
            out.k(i, j) = a * w + s;
            out.m(i, j) = c * w + t;
        }
    }
    return out;
}

// Affine rescale of a simulation snapshot into [lo, hi], used to build
// swirl-shaped parameter fields. A constant snapshot has no structure to
// rescale; it maps to the midpoint and sets *degenerate.
inline Field gen_swirl_params(const Field& snapshot, double lo, double hi,
                              bool* degenerate = nullptr) {
    if (!(lo < hi))
        throw std::invalid_argument("gen_swirl_params: requires lo < hi");
    const double mn = field_min(snapshot);
    const double mx = field_max(snapshot);
    Field out(snapshot.grid());
    if (!(mx - mn > 0.0)) {
        if (degenerate) *degenerate = true;
        for (auto& v : out.values()) v = 0.5 * (lo + hi);
        return out;
    }
    if (degenerate) *degenerate = false;
    const double scale = (hi - lo) / (mx - mn);
    for (int idx = 0; idx < snapshot.size(); ++idx)
        out[idx] = lo + (snapshot[idx] - mn) * scale;
    return out;
}

// f + amplitude * (max f - min f) * eta with eta iid standard Gaussian from a
// seeded generator. amplitude 0 returns the input bitwise.
inline Field add_field_noise(const Field& f, double amplitude, std::uint64_t seed) {
    if (!(amplitude >= 0.0))
        throw std::invalid_argument("add_field_noise: amplitude must be >= 0");
    if (amplitude == 0.0) return f;
    const double scale = amplitude * (field_max(f) - field_min(f));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> eta(0.0, 1.0);
    Field out = f;
    for (auto& v : out.values()) v += scale * eta(rng);
    return out;
}

enum class InitialKind { planar_perturbation, seeded_random };

// Perturbed initial conditions around the scalar-default coexistence state.
// planar_perturbation: deterministic cross-gradient quadratic in P and tilted
// plane in Z (normalized coordinates), bounded by eps. seeded_random: uniform
// +-eps cell noise. Both break the symmetry needed for pattern formation.
inline DriveState initial_conditions(const GridSpec& g,
                                     InitialKind kind = InitialKind::planar_perturbation,
                                     double eps = 1e-2, std::uint64_t seed = 0) {
    g.validate();
    auto [pstar, zstar] = coexistence_state();
    DriveState s{Field(g, pstar), Field(g, zstar), 0.0};
    if (eps == 0.0) return s;
    if (kind == InitialKind::planar_perturbation) {
        for (int j = 0; j < g.ny; ++j) {
            const double v = (j + 0.5) / g.ny;
            for (int i = 0; i < g.nx; ++i) {
                const double u = (i + 0.5) / g.nx;
                const double w = u - 0.1 * v;
                s.P(i, j) = pstar + eps * (w - 0.25) * (w - 0.75);
                s.Z(i, j) = zstar + eps * ((u - 0.5) + 0.5 * (v - 0.5));
            }
        }
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> d(-eps, eps);
        for (auto& v : s.P.values()) v = pstar + d(rng);
        for (auto& v : s.Z.values()) v = zstar + d(rng);
    }
    return s;
}

}  // namespace ordf
