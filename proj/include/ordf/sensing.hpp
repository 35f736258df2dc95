// Coarse sensor-grid sampling: rectangular sensors tile the domain with a
// fixed gap; each provides the local average of the observable and the
// per-sensor innovation driving the averaged-observation response system.
// Sensors that would stick out past the boundary are dropped, so every
// retained sensor has full patch support.
#pragma once

#include <vector>

#include "ordf/core.hpp"
#include "ordf/grid.hpp"

namespace ordf {

struct SensorSpec {
    int patch_w = 2;
    int patch_h = 2;
    int gap = 1;       // cells between sensors, both directions
    int offset_x = 0;
    int offset_y = 0;

    void validate() const {
        if (patch_w < 1 || patch_h < 1)
            throw std::invalid_argument("SensorSpec: patch dims must be >= 1");
        if (gap < 0)
            throw std::invalid_argument("SensorSpec: gap must be >= 0");
        if (offset_x < 0 || offset_y < 0)
            throw std::invalid_argument("SensorSpec: offsets must be >= 0");
    }

    int count_x(const GridSpec& g) const {
        const int stride = patch_w + gap;
        int n = 0;
        for (int x0 = offset_x; x0 + patch_w <= g.nx; x0 += stride) ++n;
        return n;
    }
    int count_y(const GridSpec& g) const {
        const int stride = patch_h + gap;
        int n = 0;
        for (int y0 = offset_y; y0 + patch_h <= g.ny; y0 += stride) ++n;
        return n;
    }
    int origin_x(int sx) const { return offset_x + sx * (patch_w + gap); }
    int origin_y(int sy) const { return offset_y + sy * (patch_h + gap); }

    bool operator==(const SensorSpec&) const = default;
};

// Per-sensor scalars on the sensor lattice (row-major, like the grid).
struct SensorValues {
    int count_x = 0;
    int count_y = 0;
    std::vector<double> v;

    double operator()(int sx, int sy) const {
        return v[static_cast<std::size_t>(sy) * count_x + sx];
    }
    int size() const { return count_x * count_y; }
};

enum class InnovationNorm {
    patch,  // divide by patch_w * patch_h (per-sensor mean)
    grid,   // divide by dx * dx (PDE grid steps); rescales the coupling only
};

namespace detail {

template <class PerCell>
inline SensorValues reduce_sensors(const GridSpec& g, const SensorSpec& s, double norm,
                                   PerCell&& cell_value) {
    s.validate();
    SensorValues out;
    out.count_x = s.count_x(g);
    out.count_y = s.count_y(g);
    out.v.assign(static_cast<std::size_t>(out.size()), 0.0);
    for (int sy = 0; sy < out.count_y; ++sy) {
        const int y0 = s.origin_y(sy);
        for (int sx = 0; sx < out.count_x; ++sx) {
            const int x0 = s.origin_x(sx);
            double sum = 0.0;
            for (int j = y0; j < y0 + s.patch_h; ++j)
                for (int i = x0; i < x0 + s.patch_w; ++i) sum += cell_value(i, j);
            out.v[static_cast<std::size_t>(sy) * out.count_x + sx] = sum / norm;
        }
    }
    return out;
}

}  // namespace detail

// Mean of P over each sensor patch.
inline SensorValues local_averages(const Field& P, const SensorSpec& s) {
    const double norm = static_cast<double>(s.patch_w) * s.patch_h;
    return detail::reduce_sensors(P.grid(), s, norm,
                                  [&](int i, int j) { return P(i, j); });
}

// Per-sensor innovation G_n = sum over the patch of (P - Phat), divided by
// the patch cell count (default) or by dx^2.
inline SensorValues innovation(const Field& P, const Field& Phat, const SensorSpec& s,
                               InnovationNorm norm = InnovationNorm::patch) {
    require_same_grid(P, Phat, "innovation");
    const GridSpec& g = P.grid();
    const double denom = (norm == InnovationNorm::patch)
                             ? static_cast<double>(s.patch_w) * s.patch_h
                             : g.dx * g.dx;
    return detail::reduce_sensors(g, s, denom,
                                  [&](int i, int j) { return P(i, j) - Phat(i, j); });
}

// Scatter per-sensor values back onto the grid: sensor cells receive their
// sensor's value, cells between sensors receive `fill_cell(i, j)`.
template <class Fill>
inline Field scatter_sensors(const GridSpec& g, const SensorSpec& s, const SensorValues& sv,
                             Fill&& fill_cell) {
    Field out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out(i, j) = fill_cell(i, j);
    for (int sy = 0; sy < sv.count_y; ++sy) {
        const int y0 = s.origin_y(sy);
        for (int sx = 0; sx < sv.count_x; ++sx) {
            const int x0 = s.origin_x(sx);
            const double val = sv(sx, sy);
            for (int j = y0; j < y0 + s.patch_h; ++j)
                for (int i = x0; i < x0 + s.patch_w; ++i) out(i, j) = val;
        }
    }
    return out;
}

}  // namespace ordf
