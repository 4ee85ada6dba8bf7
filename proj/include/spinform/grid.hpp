#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace spinform {

// Uniform grid discretizing the conformal parameter z = x + iy, with an
// optional disk mask |z| <= R (masked nodes are excluded from every residual
// norm and from mesh output).
struct PlanarGrid {
    std::complex<double> origin{};  // z at node (0,0)
    double hx = 0.0, hy = 0.0;
    int nx = 0, ny = 0;
    std::optional<double> mask_radius;  // keep |z| <= R when set

    PlanarGrid() = default;
    PlanarGrid(std::complex<double> z0, double hx_, double hy_, int nx_, int ny_,
               std::optional<double> mask = std::nullopt)
        : origin(z0), hx(hx_), hy(hy_), nx(nx_), ny(ny_), mask_radius(mask) {
        if (hx <= 0.0 || hy <= 0.0) throw std::invalid_argument("PlanarGrid: spacing must be > 0");
        if (nx < 2 || ny < 2) throw std::invalid_argument("PlanarGrid: need at least 2 nodes per axis");
    }

    // Square grid of `res` intervals per axis covering [-R,R]^2 with the disk
    // mask |z| <= R; spacing 2R/res.
    static PlanarGrid disk(double R, int res) {
        if (R <= 0.0 || res < 2) throw std::invalid_argument("PlanarGrid::disk: bad parameters");
        const double h = 2.0 * R / res;
        return PlanarGrid({-R, -R}, h, h, res + 1, res + 1, R * (1.0 + 1e-12));
    }

    static PlanarGrid rect(std::complex<double> z0, double width, double height, int nx_, int ny_) {
        return PlanarGrid(z0, width / (nx_ - 1), height / (ny_ - 1), nx_, ny_);
    }

    int count() const { return nx * ny; }
    int index(int ix, int iy) const { return iy * nx + ix; }
    int ix_of(int node) const { return node % nx; }
    int iy_of(int node) const { return node / nx; }

    std::complex<double> z(int ix, int iy) const {
        return origin + std::complex<double>(ix * hx, iy * hy);
    }
    std::complex<double> z_of(int node) const { return z(ix_of(node), iy_of(node)); }

    bool in_bounds(int ix, int iy) const { return ix >= 0 && ix < nx && iy >= 0 && iy < ny; }

    bool unmasked(int ix, int iy) const {
        if (!in_bounds(ix, iy)) return false;
        if (!mask_radius) return true;
        return std::abs(z(ix, iy)) <= *mask_radius;
    }
    bool unmasked(int node) const { return unmasked(ix_of(node), iy_of(node)); }

    int unmasked_count() const {
        int n = 0;
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix)
                if (unmasked(ix, iy)) ++n;
        return n;
    }

    // All nodes at Chebyshev distance <= ring unmasked (stencil support).
    bool interior(int ix, int iy, int ring = 1) const {
        for (int dy = -ring; dy <= ring; ++dy)
            for (int dx = -ring; dx <= ring; ++dx)
                if (!unmasked(ix + dx, iy + dy)) return false;
        return true;
    }

    // Node nearest to z0 among the unmasked ones.
    int nearest_unmasked(std::complex<double> z0) const {
        int best = -1;
        double bestd = 0.0;
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix) {
                if (!unmasked(ix, iy)) continue;
                const double d = std::abs(z(ix, iy) - z0);
                if (best < 0 || d < bestd) {
                    best = index(ix, iy);
                    bestd = d;
                }
            }
        if (best < 0) throw std::runtime_error("PlanarGrid: no unmasked node");
        return best;
    }
};

}  // namespace spinform
