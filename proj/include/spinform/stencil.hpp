#pragma once

#include <complex>
#include <vector>

#include "spinform/grid.hpp"

namespace spinform::fd {

// Mask-aware finite differences on a PlanarGrid, second order throughout:
// centered stencils in the interior, one-sided three-point forms where a
// neighbor is masked or out of bounds.

template <typename T>
T deriv1(const std::vector<T>& f, const PlanarGrid& g, int ix, int iy, int dx, int dy, double h) {
    auto ok = [&](int k) { return g.unmasked(ix + k * dx, iy + k * dy); };
    auto at = [&](int k) { return f[g.index(ix + k * dx, iy + k * dy)]; };
    if (ok(1) && ok(-1)) return (at(1) - at(-1)) / (2.0 * h);
    if (ok(1) && ok(2)) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    if (ok(-1) && ok(-2)) return (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h);
    if (ok(1)) return (at(1) - at(0)) / h;  // first-order last resort
    if (ok(-1)) return (at(0) - at(-1)) / h;
    throw std::runtime_error("fd::deriv1: isolated node");
}

template <typename T>
T deriv2(const std::vector<T>& f, const PlanarGrid& g, int ix, int iy, int dx, int dy, double h) {
    auto ok = [&](int k) { return g.unmasked(ix + k * dx, iy + k * dy); };
    auto at = [&](int k) { return f[g.index(ix + k * dx, iy + k * dy)]; };
    const double h2 = h * h;
    if (ok(1) && ok(-1)) return (at(1) - 2.0 * at(0) + at(-1)) / h2;
    if (ok(1) && ok(2) && ok(3)) return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / h2;
    if (ok(-1) && ok(-2) && ok(-3)) return (2.0 * at(0) - 5.0 * at(-1) + 4.0 * at(-2) - at(-3)) / h2;
    if (ok(1) && ok(2)) return (at(0) - 2.0 * at(1) + at(2)) / h2;  // first-order fallback
    if (ok(-1) && ok(-2)) return (at(0) - 2.0 * at(-1) + at(-2)) / h2;
    throw std::runtime_error("fd::deriv2: not enough neighbors");
}

template <typename T>
T dx(const std::vector<T>& f, const PlanarGrid& g, int ix, int iy) {
    return deriv1(f, g, ix, iy, 1, 0, g.hx);
}
template <typename T>
T dy(const std::vector<T>& f, const PlanarGrid& g, int ix, int iy) {
    return deriv1(f, g, ix, iy, 0, 1, g.hy);
}

// Wirtinger derivatives: d/dz = (dx - i dy)/2, d/dzbar = (dx + i dy)/2.
inline std::complex<double> dz(const std::vector<std::complex<double>>& f, const PlanarGrid& g,
                               int ix, int iy) {
    const std::complex<double> i(0.0, 1.0);
    return 0.5 * (dx(f, g, ix, iy) - i * dy(f, g, ix, iy));
}
inline std::complex<double> dzbar(const std::vector<std::complex<double>>& f, const PlanarGrid& g,
                                  int ix, int iy) {
    const std::complex<double> i(0.0, 1.0);
    return 0.5 * (dx(f, g, ix, iy) + i * dy(f, g, ix, iy));
}

// d^2/dz dzbar = Laplacian/4.
template <typename T>
T dzdzbar(const std::vector<T>& f, const PlanarGrid& g, int ix, int iy) {
    return 0.25 * (deriv2(f, g, ix, iy, 1, 0, g.hx) + deriv2(f, g, ix, iy, 0, 1, g.hy));
}

// Bilinear interpolation of a nodal field at an arbitrary point of the grid
// hull; clamps to the hull.
template <typename T>
T bilinear(const std::vector<T>& f, const PlanarGrid& g, std::complex<double> z) {
    double fx = (z.real() - g.origin.real()) / g.hx;
    double fy = (z.imag() - g.origin.imag()) / g.hy;
    fx = std::min(std::max(fx, 0.0), double(g.nx - 1));
    fy = std::min(std::max(fy, 0.0), double(g.ny - 1));
    int ix = std::min(int(fx), g.nx - 2);
    int iy = std::min(int(fy), g.ny - 2);
    const double tx = fx - ix, ty = fy - iy;
    return (1.0 - tx) * (1.0 - ty) * f[g.index(ix, iy)] + tx * (1.0 - ty) * f[g.index(ix + 1, iy)] +
           (1.0 - tx) * ty * f[g.index(ix, iy + 1)] + tx * ty * f[g.index(ix + 1, iy + 1)];
}

}  // namespace spinform::fd
