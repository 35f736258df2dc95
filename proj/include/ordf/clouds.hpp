// Synthetic cloud cover: randomly placed elliptical blobs whose radii are
// scaled to hit a target coverage fraction, advected in x as exact integer
// circular shifts (no numerical diffusion of the mask, and the switching
// epoch between topologies is exactly dx/nu). The sentinel encoding marks
// occluded pixels with a large out-of-range value at the file boundary;
// internal code passes the boolean mask.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ordf/core.hpp"
#include "ordf/grid.hpp"

namespace ordf {

class CloudMask {
public:
    CloudMask() = default;
    CloudMask(const GridSpec& g, std::vector<std::uint8_t> base, double nu,
              double sentinel = 9999.0, double phase = 0.0)
        : grid_(g), base_(std::move(base)), nu_(nu), sentinel_(sentinel), phase_(phase) {
        g.validate();
        if (base_.size() != static_cast<std::size_t>(g.cells()))
            throw std::invalid_argument("CloudMask: mask size does not match grid");
    }

    static CloudMask empty(const GridSpec& g, double nu = 0.0, double sentinel = 9999.0) {
        return CloudMask(g, std::vector<std::uint8_t>(g.cells(), 0), nu, sentinel);
    }

    const GridSpec& grid() const { return grid_; }
    double nu() const { return nu_; }
    double sentinel() const { return sentinel_; }
    double phase() const { return phase_; }
    const std::vector<std::uint8_t>& base() const { return base_; }

    // Accumulated shift in whole cells at the stored phase.
    long long shift_cells() const {
        return static_cast<long long>(std::floor(phase_ + 1e-9));
    }

    // Materialize the occlusion pattern at the stored phase.
    std::vector<std::uint8_t> snapshot() const { return shifted(shift_cells()); }

    // Pattern at absolute time t (phase measured from t = 0), independent of
    // the stored phase. Used by stepping loops.
    std::vector<std::uint8_t> snapshot_at(double t) const {
        const double ph = (grid_.dx > 0.0) ? nu_ * t / grid_.dx : 0.0;
        return shifted(static_cast<long long>(std::floor(ph + 1e-9)));
    }

    int occluded_count() const {
        int n = 0;
        for (auto b : base_) n += (b != 0);
        return n;
    }

    bool operator==(const CloudMask&) const = default;

private:
    std::vector<std::uint8_t> shifted(long long cells) const {
        const int nx = grid_.nx;
        long long s = cells % nx;
        if (s < 0) s += nx;
        if (s == 0) return base_;
        std::vector<std::uint8_t> out(base_.size());
        for (int j = 0; j < grid_.ny; ++j) {
            const std::uint8_t* src = base_.data() + static_cast<std::size_t>(j) * nx;
            std::uint8_t* dst = out.data() + static_cast<std::size_t>(j) * nx;
            for (int i = 0; i < nx; ++i) {
                int from = i - static_cast<int>(s);
                if (from < 0) from += nx;
                dst[i] = src[from];
            }
        }
        return out;
    }

    GridSpec grid_;
    std::vector<std::uint8_t> base_;
    double nu_ = 0.0;
    double sentinel_ = 9999.0;
    double phase_ = 0.0;  // accumulated shift, in cells
};

inline double coverage(const CloudMask& c) {
    return static_cast<double>(c.occluded_count()) / c.grid().cells();
}

namespace detail {

struct CloudBlob {
    double cx, cy;   // center, cell coordinates
    double unit;     // base size factor
    double aspect;   // rx/ry ratio, in [1, 3]
};

inline void rasterize_blobs(const std::vector<CloudBlob>& blobs, double lambda,
                            const GridSpec& g, std::vector<std::uint8_t>& mask) {
    const int nx = g.nx, ny = g.ny;
    std::fill(mask.begin(), mask.end(), 0);
    for (const auto& b : blobs) {
        const double rx = lambda * b.unit * std::sqrt(b.aspect);
        const double ry = lambda * b.unit / std::sqrt(b.aspect);
        if (rx <= 0.0 || ry <= 0.0) continue;
        const int jlo = std::max(0, static_cast<int>(std::floor(b.cy - ry)) - 1);
        const int jhi = std::min(ny - 1, static_cast<int>(std::ceil(b.cy + ry)) + 1);
        const int span = std::min(nx, 2 * (static_cast<int>(std::ceil(rx)) + 2) + 1);
        const int i0 = static_cast<int>(std::floor(b.cx)) - span / 2;
        for (int j = jlo; j <= jhi; ++j) {
            const double dy = (j - b.cy) / ry;
            if (dy * dy > 1.0) continue;
            for (int k = 0; k < span; ++k) {
                const int iu = i0 + k;
                int i = iu % nx;
                if (i < 0) i += nx;
                double dxl = i - b.cx;
                // nearest periodic image in x
                if (dxl > nx / 2.0) dxl -= nx;
                if (dxl < -nx / 2.0) dxl += nx;
                const double dxr = dxl / rx;
                if (dxr * dxr + dy * dy <= 1.0) mask[static_cast<std::size_t>(j) * nx + i] = 1;
            }
        }
    }
}

inline int count_set(const std::vector<std::uint8_t>& m) {
    int n = 0;
    for (auto b : m) n += (b != 0);
    return n;
}

}  // namespace detail

// `count` randomly placed axis-aligned elliptical blobs with a common radius
// scale chosen by bisection so that realized coverage lands within +-2
// percentage points of the target. Deterministic per seed. target 0 yields an
// empty mask regardless of count.
inline CloudMask gen_clouds(const GridSpec& g, int count, double target_coverage,
                            std::uint64_t seed, double nu = 2.0, double sentinel = 9999.0) {
    g.validate();
    if (count < 0)
        throw std::invalid_argument("gen_clouds: count must be >= 0");
    if (!(target_coverage >= 0.0) || target_coverage > 0.98)
        throw std::invalid_argument("gen_clouds: target coverage must be in [0, 0.98]");
    std::vector<std::uint8_t> mask(g.cells(), 0);
    if (count == 0 || target_coverage == 0.0) {
        if (target_coverage > 0.02)
            throw std::invalid_argument("gen_clouds: cannot reach target coverage with no clouds");
        return CloudMask(g, std::move(mask), nu, sentinel);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, static_cast<double>(g.nx));
    std::uniform_real_distribution<double> uy(0.0, static_cast<double>(g.ny));
    std::uniform_real_distribution<double> uunit(0.5, 1.5);
    std::uniform_real_distribution<double> uaspect(1.0, 3.0);
    std::vector<detail::CloudBlob> blobs(count);
    for (auto& b : blobs) b = {ux(rng), uy(rng), uunit(rng), uaspect(rng)};

    double lo = 0.0, hi = 4.0 * std::max(g.nx, g.ny);
    const int total = g.cells();
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        detail::rasterize_blobs(blobs, mid, g, mask);
        const double cov = static_cast<double>(detail::count_set(mask)) / total;
        if (cov < target_coverage)
            lo = mid;
        else
            hi = mid;
    }
    detail::rasterize_blobs(blobs, hi, g, mask);
    const double realized = static_cast<double>(detail::count_set(mask)) / total;
    if (std::fabs(realized - target_coverage) > 0.02)
        throw error("gen_clouds: could not realize target coverage " +
                    std::to_string(target_coverage) + " (got " + std::to_string(realized) + ")");
    return CloudMask(g, std::move(mask), nu, sentinel);
}

// Advance the accumulated advection phase by nu * elapsed / dx cells. The
// occluded-cell count is invariant; phases compose additively, so shifts
// totaling nx cells reproduce the original mask bitwise.
inline CloudMask advect_mask(const CloudMask& c, double elapsed) {
    const double dph = (c.grid().dx > 0.0) ? c.nu() * elapsed / c.grid().dx : 0.0;
    return CloudMask(c.grid(), c.base(), c.nu(), c.sentinel(), c.phase() + dph);
}

// Copy of P with occluded cells replaced by the sentinel value I (file/ingest
// boundary only). The sentinel must sit outside the clamp range [0, 2].
inline Field apply_sentinel(const Field& P, const CloudMask& c) {
    if (!(P.grid() == c.grid()))
        throw std::invalid_argument("apply_sentinel: grid mismatch");
    if (c.sentinel() >= 0.0 && c.sentinel() <= 2.0)
        throw std::invalid_argument("apply_sentinel: sentinel must lie outside [0, 2]");
    Field out = P;
    const auto snap = c.snapshot();
    for (int idx = 0; idx < P.size(); ++idx)
        if (snap[static_cast<std::size_t>(idx)]) out[idx] = c.sentinel();
    return out;
}

// Recover the occlusion pattern from a sentinel-encoded field.
inline std::vector<std::uint8_t> detect_sentinel(const Field& f, double sentinel) {
    std::vector<std::uint8_t> mask(f.size(), 0);
    for (int idx = 0; idx < f.size(); ++idx)
        if (f[idx] == sentinel) mask[static_cast<std::size_t>(idx)] = 1;
    return mask;
}

}  // namespace ordf
