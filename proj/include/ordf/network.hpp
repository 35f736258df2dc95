// Moving-neighborhood-network view of the coupled drive/response lattice.
//
// Each pixel of the drive image and of the response image is a 2-component
// oscillator (P, Z); an m x n image gives 2N = 2mn nodes, drive image first,
// row-major. Two Laplacians act on the stack:
//
//   L1   block-diagonal graph Laplacian (D - A) of the five-point zero-flux
//        stencil within each image; applied negated with sigma1 = 1/dx^2 it
//        reproduces the discrete Laplacian exactly.
//   L2   switching drive->response coupling, row N+q = (+1 at q, -1 at N+q)
//        when cell q is visible, all-zero when occluded. This printed block
//        form already carries the attracting orientation, so it enters the
//        operator with +sigma2.
//
// Species coupling matrices: B1 = I2 (diffusion acts on both species),
// B2 = [1 0; 0 0] (only the observed species is driven). The linearization
// about the synchronization manifold is
//
//   d(du)/dt = (F - sigma1 L1 (x) B1 + sigma2 L2(t) (x) B2) du,
//
// with F block-diagonal in the per-node reaction Jacobians (response nodes
// take the Jacobian of their drive twin's state).
//
// The stability estimator evolves a perturbation supported on the response
// nodes. That subspace is exactly invariant (L1 is block-diagonal and L2 has
// no entries in drive rows, so the operator is block-triangular), and it is
// the synchronization-relevant transverse component: modes living on the
// drive image are untouched by any choice of sigma2, so a pattern-forming
// drive makes the full all-ones-complement exponent nonnegative regardless of
// coupling. The all-ones-complement basis W is still provided for the
// decomposition identities and the averaged-system check.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "ordf/clouds.hpp"
#include "ordf/core.hpp"
#include "ordf/ecology.hpp"
#include "ordf/grid.hpp"
#include "ordf/observer.hpp"

namespace ordf {

struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

enum class LaplacianRole { diffusion, coupling, expected };

// Compressed sparse rows; every row sums to zero.
struct SparseLaplacian {
    int n = 0;  // matrix dimension (2N)
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;
    LaplacianRole role = LaplacianRole::diffusion;

    double row_sum(int r) const {
        double s = 0.0;
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k];
        return s;
    }
};

// Graph Laplacian of the five-point stencil with mirrored-ghost boundaries,
// block-diagonal over the drive and response images. Diagonal entries hold
// the in-domain neighbor count (2 at corners, 3 at edges, 4 inside).
inline SparseLaplacian build_L1(const GridSpec& g) {
    g.validate();
    const int nx = g.nx, ny = g.ny;
    const int N = g.cells();
    SparseLaplacian L;
    L.n = 2 * N;
    L.role = LaplacianRole::diffusion;
    L.row_ptr.reserve(L.n + 1);
    L.row_ptr.push_back(0);
    for (int block = 0; block < 2; ++block) {
        const int off = block * N;
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const int q = j * nx + i;
                int deg = 0;
                // columns in ascending order
                if (j > 0) { L.col.push_back(off + q - nx); L.val.push_back(-1.0); ++deg; }
                if (i > 0) { L.col.push_back(off + q - 1); L.val.push_back(-1.0); ++deg; }
                const std::size_t diag_slot = L.col.size();
                L.col.push_back(off + q);
                L.val.push_back(0.0);
                if (i < nx - 1) { L.col.push_back(off + q + 1); L.val.push_back(-1.0); ++deg; }
                if (j < ny - 1) { L.col.push_back(off + q + nx); L.val.push_back(-1.0); ++deg; }
                L.val[diag_slot] = static_cast<double>(deg);
                L.row_ptr.push_back(static_cast<int>(L.col.size()));
            }
        }
    }
    return L;
}

// Switching coupling Laplacian for a given occlusion snapshot: drive rows are
// empty; response row N+q carries (+1, -1) when cell q is visible and is
// all-zero when occluded.
inline SparseLaplacian build_L2(const std::vector<std::uint8_t>& occluded, int N) {
    if (occluded.size() != static_cast<std::size_t>(N))
        throw std::invalid_argument("build_L2: mask size mismatch");
    SparseLaplacian L;
    L.n = 2 * N;
    L.role = LaplacianRole::coupling;
    L.row_ptr.assign(static_cast<std::size_t>(N) + 1, 0);
    L.row_ptr.reserve(L.n + 1);
    for (int q = 0; q < N; ++q) {
        if (!occluded[static_cast<std::size_t>(q)]) {
            L.col.push_back(q);
            L.val.push_back(1.0);
            L.col.push_back(N + q);
            L.val.push_back(-1.0);
        }
        L.row_ptr.push_back(static_cast<int>(L.col.size()));
    }
    return L;
}

inline SparseLaplacian build_L2(const CloudMask& mask) {
    return build_L2(mask.snapshot(), mask.grid().cells());
}

struct CouplingMatrices {
    Mat2 B1 = Mat2::identity();
    Mat2 B2 = {1.0, 0.0, 0.0, 0.0};
    double sigma1 = 0.25;  // 1/dx^2
    double sigma2 = 2.6;   // kappa

    static CouplingMatrices standard(const GridSpec& g, double kappa) {
        CouplingMatrices cm;
        cm.sigma1 = 1.0 / (g.dx * g.dx);
        cm.sigma2 = kappa;
        return cm;
    }
};

enum class JacobianMode { analytic, paper_literal };

// Jacobian of the reaction terms at one state. `analytic` is the true
// Jacobian of the drive reactions; `paper_literal` reproduces the printed
// J_i, which omits a factor of Z in entries (1,1) and (2,1).
inline Mat2 reaction_jacobian(double P, double Z, double k, double m, double h,
                              JacobianMode mode = JacobianMode::analytic) {
    const double d = P + h;
    if (std::fabs(d) < 1e-300)
        throw std::invalid_argument("reaction_jacobian: P = -h pole");
    Mat2 J;
    if (mode == JacobianMode::analytic) {
        J.a11 = 1.0 - 2.0 * P - Z * h / (d * d);
        J.a21 = k * h * Z / (d * d);
    } else {
        J.a11 = 1.0 - 2.0 * P - h / (d * d);
        J.a21 = h * k / (d * d);
    }
    J.a12 = -P / d;
    J.a22 = k * P / d - m;
    return J;
}

// Linearized network operator: matrix-vector products on 4N-vectors stored
// node-major, components (P, Z) per node.
struct NetOperator {
    int n_nodes = 0;  // 2N
    std::vector<Mat2> jac;
    const SparseLaplacian* L1 = nullptr;
    const SparseLaplacian* L2 = nullptr;
    CouplingMatrices cm;

    void apply(std::span<const double> x, std::span<double> y) const {
        const int dim = 2 * n_nodes;
        if (static_cast<int>(x.size()) != dim || static_cast<int>(y.size()) != dim)
            throw std::invalid_argument("NetOperator::apply: dimension mismatch");
        for (int q = 0; q < n_nodes; ++q) {
            const Mat2& J = jac[static_cast<std::size_t>(q)];
            const double x0 = x[2 * q], x1 = x[2 * q + 1];
            double y0 = J.a11 * x0 + J.a12 * x1;
            double y1 = J.a21 * x0 + J.a22 * x1;
            // L1 enters negated: sigma1 * (-L1) is the discrete Laplacian.
            for (int kk = L1->row_ptr[q]; kk < L1->row_ptr[q + 1]; ++kk) {
                const double w = -cm.sigma1 * L1->val[kk];
                const double c0 = x[2 * L1->col[kk]], c1 = x[2 * L1->col[kk] + 1];
                y0 += w * (cm.B1.a11 * c0 + cm.B1.a12 * c1);
                y1 += w * (cm.B1.a21 * c0 + cm.B1.a22 * c1);
            }
            if (q < static_cast<int>(L2->row_ptr.size()) - 1) {
                for (int kk = L2->row_ptr[q]; kk < L2->row_ptr[q + 1]; ++kk) {
                    const double w = cm.sigma2 * L2->val[kk];
                    const double c0 = x[2 * L2->col[kk]], c1 = x[2 * L2->col[kk] + 1];
                    y0 += w * (cm.B2.a11 * c0 + cm.B2.a12 * c1);
                    y1 += w * (cm.B2.a21 * c0 + cm.B2.a22 * c1);
                }
            }
            y[2 * q] = y0;
            y[2 * q + 1] = y1;
        }
    }
};

// F + sigma1 (-L1) (x) B1 + sigma2 L2 (x) B2, with F node-wise block-diagonal
// in the reaction Jacobians evaluated along the drive trajectory (response
// nodes take their drive twin's state: linearization about the manifold).
inline NetOperator assemble_linearized(const DriveState& s, const DriveParams& p,
                                       const SparseLaplacian& L1, const SparseLaplacian& L2,
                                       const CouplingMatrices& cm,
                                       JacobianMode mode = JacobianMode::analytic) {
    const int N = s.P.size();
    if (L1.n != 2 * N || L2.n != 2 * N)
        throw std::invalid_argument("assemble_linearized: dimension mismatch");
    NetOperator op;
    op.n_nodes = 2 * N;
    op.cm = cm;
    op.L1 = &L1;
    op.L2 = &L2;
    op.jac.resize(static_cast<std::size_t>(2 * N));
    for (int q = 0; q < N; ++q) {
        const Mat2 J = reaction_jacobian(s.P[q], s.Z[q], p.k[q], p.m[q], p.h, mode);
        op.jac[static_cast<std::size_t>(q)] = J;
        op.jac[static_cast<std::size_t>(N + q)] = J;
    }
    return op;
}

// Orthonormal basis of the complement of the all-ones direction in R^n,
// realized as columns 2..n of the Householder reflector exchanging e1 and
// ones/sqrt(n). Applications are implicit (rank-one update), O(n).
class TransverseBasis {
public:
    explicit TransverseBasis(int n) : n_(n) {
        if (n < 2) throw std::invalid_argument("TransverseBasis: n must be >= 2");
        const double inv = 1.0 / std::sqrt(static_cast<double>(n));
        u_.assign(static_cast<std::size_t>(n), inv);
        u_[0] -= 1.0;
        uu_ = 0.0;
        for (double v : u_) uu_ += v * v;
    }

    int n() const { return n_; }

    // H x with H = I - 2 u u^T / (u^T u); column 1 of H is ones/sqrt(n).
    std::vector<double> reflect(std::span<const double> x) const {
        double ux = 0.0;
        for (int i = 0; i < n_; ++i) ux += u_[static_cast<std::size_t>(i)] * x[i];
        const double f = 2.0 * ux / uu_;
        std::vector<double> y(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) y[static_cast<std::size_t>(i)] = x[i] - f * u_[static_cast<std::size_t>(i)];
        return y;
    }

    // zeta = W^T x  (length n-1)
    std::vector<double> apply_Wt(std::span<const double> x) const {
        auto y = reflect(x);
        return std::vector<double>(y.begin() + 1, y.end());
    }

    // x = W zeta  (length n)
    std::vector<double> apply_W(std::span<const double> zeta) const {
        if (static_cast<int>(zeta.size()) != n_ - 1)
            throw std::invalid_argument("TransverseBasis: coordinate length mismatch");
        std::vector<double> ext(static_cast<std::size_t>(n_), 0.0);
        for (int i = 1; i < n_; ++i) ext[static_cast<std::size_t>(i)] = zeta[i - 1];
        return reflect(ext);
    }

    // Dense W for small-n tests: n x (n-1), column-major outer vector.
    std::vector<std::vector<double>> dense() const {
        std::vector<std::vector<double>> W(static_cast<std::size_t>(n_ - 1));
        std::vector<double> e(static_cast<std::size_t>(n_), 0.0);
        for (int c = 1; c < n_; ++c) {
            e.assign(static_cast<std::size_t>(n_), 0.0);
            e[static_cast<std::size_t>(c)] = 1.0;
            W[static_cast<std::size_t>(c - 1)] = reflect(e);
        }
        return W;
    }

private:
    int n_ = 0;
    std::vector<double> u_;
    double uu_ = 0.0;
};

// Remove the synchronized direction e (x) R^2 from a node-major 4N-vector:
// subtract the across-node mean of each species component.
inline void project_out_sync(std::span<double> x) {
    const int nodes = static_cast<int>(x.size()) / 2;
    double m0 = 0.0, m1 = 0.0;
    for (int q = 0; q < nodes; ++q) {
        m0 += x[2 * q];
        m1 += x[2 * q + 1];
    }
    m0 /= nodes;
    m1 /= nodes;
    for (int q = 0; q < nodes; ++q) {
        x[2 * q] -= m0;
        x[2 * q + 1] -= m1;
    }
}

// Entrywise average of the switching Laplacian over occlusion samples;
// response row N+q carries (+p_q, -p_q) with p_q the visible fraction.
struct ExpectedLaplacian {
    SparseLaplacian L2avg;
    std::vector<double> visible_prob;
};

inline ExpectedLaplacian expected_laplacian(const std::vector<CloudMask>& samples) {
    if (samples.empty())
        throw std::invalid_argument("expected_laplacian: needs at least one sample");
    const GridSpec g = samples.front().grid();
    const int N = g.cells();
    std::vector<double> p(static_cast<std::size_t>(N), 0.0);
    for (const auto& s : samples) {
        if (!(s.grid() == g))
            throw std::invalid_argument("expected_laplacian: mixed grids");
        const auto snap = s.snapshot();
        for (int q = 0; q < N; ++q)
            if (!snap[static_cast<std::size_t>(q)]) p[static_cast<std::size_t>(q)] += 1.0;
    }
    for (auto& v : p) v /= static_cast<double>(samples.size());

    ExpectedLaplacian out;
    out.visible_prob = p;
    SparseLaplacian& L = out.L2avg;
    L.n = 2 * N;
    L.role = LaplacianRole::expected;
    L.row_ptr.assign(static_cast<std::size_t>(N) + 1, 0);
    for (int q = 0; q < N; ++q) {
        const double pq = p[static_cast<std::size_t>(q)];
        if (pq > 0.0) {
            L.col.push_back(q);
            L.val.push_back(pq);
            L.col.push_back(N + q);
            L.val.push_back(-pq);
        }
        L.row_ptr.push_back(static_cast<int>(L.col.size()));
    }
    return out;
}

// Masks advanced by k = 0..count-1 whole cells (one switching epoch apart).
inline std::vector<CloudMask> advection_samples(const CloudMask& c, int count) {
    if (count < 1) throw std::invalid_argument("advection_samples: count must be >= 1");
    std::vector<CloudMask> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        out.emplace_back(c.grid(), c.base(), c.nu(), c.sentinel(), static_cast<double>(k));
    return out;
}

struct StabilityOptions {
    int renorm_every = 10;
    std::uint64_t seed = 12345;
    bool project_sync_component = false;  // also remove e (x) R^2 at renorm points
};

// Leading exponential growth rate of a perturbation under repeated
// forward-Euler linearized steps with periodic renormalization.
// apply(x, y, step) must write y = M(step) x. If `support` is nonempty the
// initial perturbation lives on those indices only.
template <class ApplyFn>
double growth_exponent(ApplyFn&& apply, int dim, double dt, int steps,
                       const StabilityOptions& opt = {}, std::span<const int> support = {}) {
    if (steps < 100)
        throw std::invalid_argument("growth_exponent: horizon too short (< 100 steps)");
    std::vector<double> d(static_cast<std::size_t>(dim), 0.0);
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> eta(0.0, 1.0);
    if (support.empty()) {
        for (auto& v : d) v = eta(rng);
    } else {
        for (int idx : support) d[static_cast<std::size_t>(idx)] = eta(rng);
    }
    double nrm = 0.0;
    for (double v : d) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0)) throw error("growth_exponent: empty initial perturbation");
    for (auto& v : d) v /= nrm;

    std::vector<double> y(static_cast<std::size_t>(dim), 0.0);
    double acc = 0.0;
    for (int n = 0; n < steps; ++n) {
        apply(std::span<const double>(d), std::span<double>(y), n);
        for (int i = 0; i < dim; ++i) d[static_cast<std::size_t>(i)] += dt * y[static_cast<std::size_t>(i)];
        if ((n + 1) % opt.renorm_every == 0 || n == steps - 1) {
            if (opt.project_sync_component) project_out_sync(d);
            double s = 0.0;
            for (double v : d) s += v * v;
            s = std::sqrt(s);
            if (!(s > 0.0)) throw error("growth_exponent: perturbation vanished");
            acc += std::log(s);
            for (auto& v : d) v /= s;
        }
    }
    return acc / (steps * dt);
}

enum class StabilityCoupling { switching, averaged, uncoupled };

struct StabilitySetup {
    GridSpec g;
    DriveParams params;
    DriveState initial;
    double kappa = 2.6;  // sigma2
    JacobianMode jmode = JacobianMode::analytic;
    const CloudMask* clouds = nullptr;  // null: never occluded
    StabilityCoupling coupling = StabilityCoupling::switching;
    int steps = 2500;
    StabilityOptions opts;
};

// Synchronization exponent of the linearized drive/response network along a
// drive trajectory. Negative means the response-difference dynamics contract;
// with `averaged` the switching Laplacian is replaced by its expectation over
// one full advection wrap (the averaged-system stability hypothesis).
inline double sync_stability_exponent(const StabilitySetup& setup) {
    const GridSpec& g = setup.g;
    const int N = g.cells();
    const SparseLaplacian L1 = build_L1(g);
    CouplingMatrices cm = CouplingMatrices::standard(
        g, setup.coupling == StabilityCoupling::uncoupled ? 0.0 : setup.kappa);

    CloudMask clouds = setup.clouds ? *setup.clouds : CloudMask::empty(g);
    SparseLaplacian L2_fixed;
    if (setup.coupling == StabilityCoupling::averaged) {
        const int wraps = std::max(1, g.nx);
        L2_fixed = expected_laplacian(advection_samples(clouds, wraps)).L2avg;
    } else {
        L2_fixed = build_L2(clouds.snapshot(), N);
    }

    DriveState d = setup.initial;
    SparseLaplacian L2_now = L2_fixed;
    long long last_shift = 0;

    std::vector<int> support;
    support.reserve(static_cast<std::size_t>(2 * N));
    for (int q = N; q < 2 * N; ++q) {
        support.push_back(2 * q);
        support.push_back(2 * q + 1);
    }

    auto apply = [&](std::span<const double> x, std::span<double> y, int step) {
        if (setup.coupling == StabilityCoupling::switching && setup.clouds) {
            const double t = step * g.dt;
            const long long shift =
                static_cast<long long>(std::floor(clouds.nu() * t / g.dx + 1e-9));
            if (step == 0 || shift != last_shift) {
                L2_now = build_L2(clouds.snapshot_at(t), N);
                last_shift = shift;
            }
        }
        const NetOperator op = assemble_linearized(d, setup.params, L1, L2_now, cm, setup.jmode);
        op.apply(x, y);
        d = drive_step(d, setup.params, g);
    };
    return growth_exponent(apply, 4 * N, g.dt, setup.steps, setup.opts,
                           std::span<const int>(support));
}

// Steps the nonlinear 2N-oscillator network and the PDE drive/response pair
// side by side from identical states and returns the maximum absolute state
// difference seen. The two formulations are algebraically identical, so the
// result is rounding-level; this is the keystone test tying the network view
// to the PDE stepping. States must stay inside the clamp range.
inline double verify_network_equivalence(const GridSpec& g, const DriveParams& params,
                                         int steps, const CloudMask* mask = nullptr,
                                         double kappa = 2.6, double resp_p0 = 0.5,
                                         double resp_z0 = 0.5) {
    const int N = g.cells();
    if (N > 256)
        throw std::invalid_argument("verify_network_equivalence: grid too large (N > 256)");
    const std::vector<std::uint8_t> occl =
        mask ? mask->snapshot() : std::vector<std::uint8_t>(static_cast<std::size_t>(N), 0);

    // PDE path
    DriveState d = initial_conditions(g, InitialKind::planar_perturbation);
    ObserverState o{Field(g, resp_p0), Field(g, resp_z0), params.k, params.m, 0.0};
    ObserverConfig cfg = ObserverConfig::defaults_for(ObserverVariant::occluded_sync);
    cfg.kappa = kappa;
    cfg.h = params.h;

    // network path, node-major (P, Z) per node, drive image first
    std::vector<double> u(static_cast<std::size_t>(4 * N));
    for (int q = 0; q < N; ++q) {
        u[2 * q] = d.P[q];
        u[2 * q + 1] = d.Z[q];
        u[2 * (N + q)] = o.Phat[q];
        u[2 * (N + q) + 1] = o.Zhat[q];
    }
    const SparseLaplacian L1 = build_L1(g);
    const SparseLaplacian L2 = build_L2(occl, N);
    const CouplingMatrices cm = CouplingMatrices::standard(g, kappa);
    const double h = params.h;
    const double dt = g.dt;

    std::vector<double> rhs(u.size());
    double maxdiff = 0.0;
    for (int n = 0; n < steps; ++n) {
        // network right-hand side: f(u_q) per node + Laplacian terms
        for (int node = 0; node < 2 * N; ++node) {
            const int q = node % N;
            const double pv = u[2 * node];
            const double zv = u[2 * node + 1];
            double r0 = pv * (1.0 - pv) - pv * zv / (pv + h);
            double r1 = params.k[q] * pv * zv / (pv + h) - params.m[q] * zv;
            for (int kk = L1.row_ptr[node]; kk < L1.row_ptr[node + 1]; ++kk) {
                const double w = -cm.sigma1 * L1.val[kk];
                r0 += w * u[2 * L1.col[kk]];
                r1 += w * u[2 * L1.col[kk] + 1];
            }
            if (node < static_cast<int>(L2.row_ptr.size()) - 1) {
                for (int kk = L2.row_ptr[node]; kk < L2.row_ptr[node + 1]; ++kk)
                    r0 += cm.sigma2 * L2.val[kk] * u[2 * L2.col[kk]];
            }
            rhs[2 * node] = r0;
            rhs[2 * node + 1] = r1;
        }
        for (std::size_t i = 0; i < u.size(); ++i) u[i] += dt * rhs[i];

        o = response_step_occluded(o, d.P, occl, cfg, g);
        d = drive_step(d, params, g);

        for (int q = 0; q < N; ++q) {
            maxdiff = std::max(maxdiff, std::fabs(u[2 * q] - d.P[q]));
            maxdiff = std::max(maxdiff, std::fabs(u[2 * q + 1] - d.Z[q]));
            maxdiff = std::max(maxdiff, std::fabs(u[2 * (N + q)] - o.Phat[q]));
            maxdiff = std::max(maxdiff, std::fabs(u[2 * (N + q) + 1] - o.Zhat[q]));
        }
    }
    return maxdiff;
}

}  // namespace ordf
