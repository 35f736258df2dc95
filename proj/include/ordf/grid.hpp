// Uniform-grid scalar fields and the finite-difference primitives every other
// module builds on: the zero-flux five-point Laplacian, periodic row shifts,
// and range clamping.
//
// Layout is row-major with y as the slow index: index(i, j) = j * nx + i.
// All operations are pure; each returns a fresh output buffer so an explicit
// scheme only ever reads time-level-n values.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordf/core.hpp"

namespace ordf {

struct GridSpec {
    int nx = 864;      // cells in x
    int ny = 288;      // cells in y
    double dx = 2.0;   // spatial step (same in both directions)
    double dt = 0.2;   // time step

    int cells() const { return nx * ny; }

    void validate() const {
        if (nx < 3 || ny < 3)
            throw std::invalid_argument("GridSpec: nx and ny must be >= 3");
        if (!(dx > 0.0))
            throw std::invalid_argument("GridSpec: dx must be positive");
        if (!(dt > 0.0))
            throw std::invalid_argument("GridSpec: dt must be positive");
    }

    bool operator==(const GridSpec&) const = default;
};

class Field {
public:
    Field() = default;
    explicit Field(const GridSpec& g, double fill = 0.0)
        : grid_(g), v_(static_cast<std::size_t>(g.cells()), fill) {
        g.validate();
    }
    Field(const GridSpec& g, std::vector<double> values)
        : grid_(g), v_(std::move(values)) {
        g.validate();
        if (v_.size() != static_cast<std::size_t>(g.cells()))
            throw std::invalid_argument("Field: value count does not match grid");
    }

    const GridSpec& grid() const { return grid_; }
    int nx() const { return grid_.nx; }
    int ny() const { return grid_.ny; }
    int size() const { return grid_.cells(); }

    double& operator()(int i, int j) { return v_[static_cast<std::size_t>(j) * grid_.nx + i]; }
    double operator()(int i, int j) const { return v_[static_cast<std::size_t>(j) * grid_.nx + i]; }
    double& operator[](int idx) { return v_[static_cast<std::size_t>(idx)]; }
    double operator[](int idx) const { return v_[static_cast<std::size_t>(idx)]; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    bool operator==(const Field&) const = default;

private:
    GridSpec grid_;
    std::vector<double> v_;
};

inline void require_same_grid(const Field& a, const Field& b, const char* what) {
    if (!(a.grid() == b.grid()))
        throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

inline double field_min(const Field& f) {
    return *std::min_element(f.values().begin(), f.values().end());
}

inline double field_max(const Field& f) {
    return *std::max_element(f.values().begin(), f.values().end());
}

inline double field_abs_max(const Field& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::fabs(v));
    return m;
}

inline double field_sum(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s;
}

// Five-point Laplacian with zero-flux (Neumann) boundaries realized through
// mirrored ghost cells: an out-of-domain neighbor is replaced by the boundary
// cell itself, which makes the stencil flux-conservative (the sum over all
// cells is zero up to rounding). Canonical per-cell form, shared with every
// stepping routine and oracle in the project:
//   lap = (w + e + s + n - 4*c) * (1/dx^2)
inline Field laplacian_zero_flux(const Field& f) {
    const GridSpec& g = f.grid();
    const int nx = g.nx, ny = g.ny;
    const double inv_dx2 = 1.0 / (g.dx * g.dx);
    Field out(g);
    const double* p = f.data();
    double* q = out.data();
    for (int j = 0; j < ny; ++j) {
        const int jm = (j > 0) ? j - 1 : j;
        const int jp = (j < ny - 1) ? j + 1 : j;
        for (int i = 0; i < nx; ++i) {
            const int im = (i > 0) ? i - 1 : i;
            const int ip = (i < nx - 1) ? i + 1 : i;
            const double c = p[j * nx + i];
            const double w = p[j * nx + im];
            const double e = p[j * nx + ip];
            const double s = p[jm * nx + i];
            const double n = p[jp * nx + i];
            q[j * nx + i] = (w + e + s + n - 4.0 * c) * inv_dx2;
        }
    }
    return out;
}

// Circular shift of every row by `cells` (positive = rightward). The multiset
// of values is preserved exactly.
inline Field shift_periodic_x(const Field& f, long long cells) {
    const GridSpec& g = f.grid();
    const int nx = g.nx;
    long long s = cells % nx;
    if (s < 0) s += nx;
    if (s == 0) return f;
    Field out(g);
    for (int j = 0; j < g.ny; ++j) {
        const double* src = f.data() + static_cast<std::size_t>(j) * nx;
        double* dst = out.data() + static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            int from = i - static_cast<int>(s);
            if (from < 0) from += nx;
            dst[i] = src[from];
        }
    }
    return out;
}

inline Field clamp_range(const Field& f, double lo, double hi) {
    if (!(lo < hi))
        throw std::invalid_argument("clamp_range: requires lo < hi");
    Field out(f.grid());
    const double* p = f.data();
    double* q = out.data();
    for (int idx = 0; idx < f.size(); ++idx)
        q[idx] = std::min(hi, std::max(lo, p[idx]));
    return out;
}

}  // namespace ordf
