#include "spinform/weierstrass.hpp"

#include <cmath>
#include <limits>

#include "spinform/stencil.hpp"

namespace spinform {

using cplx = std::complex<double>;

cplx WeierstrassData::Q0(cplx z) const {
    if (Q0_fn) return Q0_fn(z);
    if (!table_grid) throw std::runtime_error("WeierstrassData: no Q0 source");
    return fd::bilinear(Q0_table, *table_grid, z);
}

double WeierstrassData::tau0(cplx z) const {
    double t;
    if (tau0_fn) {
        t = tau0_fn(z);
    } else {
        if (!table_grid) throw std::runtime_error("WeierstrassData: no tau0 source");
        t = fd::bilinear(tau0_table, *table_grid, z);
    }
    if (!(t > 0.0)) throw std::runtime_error("WeierstrassData: tau0 not positive");
    return t;
}

void WeierstrassData::validate_tables() const {
    if (!table_grid) return;
    if (Q0_table.size() != std::size_t(table_grid->count()) ||
        tau0_table.size() != std::size_t(table_grid->count()))
        throw std::invalid_argument("WeierstrassData: table size mismatch");
    for (std::size_t n = 0; n < tau0_table.size(); ++n)
        if (!(tau0_table[n] > 0.0)) {
            const int ix = table_grid->ix_of(int(n)), iy = table_grid->iy_of(int(n));
            const cplx z = table_grid->z(ix, iy);
            throw std::invalid_argument(
                "WeierstrassData: tau0 not positive at node (" + std::to_string(ix) + "," +
                std::to_string(iy) + "), z = " + std::to_string(z.real()) + "+" +
                std::to_string(z.imag()) + "i");
        }
}

WeierstrassData family_constant(double theta) {
    WeierstrassData d;
    d.name = "constant";
    d.theta = theta;
    const cplx q0 = std::polar(1.0, theta);
    d.Q0_fn = [q0](cplx) { return q0; };
    d.tau0_fn = [](cplx) { return 4.0; };
    d.dlog_sqrt_tau0_dz_fn = [](cplx) { return cplx(0.0, 0.0); };
    d.dQ0_dzbar_fn = [](cplx) { return cplx(0.0, 0.0); };
    d.vortex_lhs_fn = [](cplx) { return 0.0; };
    return d;
}

WeierstrassData family_rotational() {
    WeierstrassData d;
    d.name = "rotational";
    auto guard = [](cplx z) {
        if (std::abs(z) > 0.9)
            throw std::domain_error("family_rotational: evaluation outside |z| <= 0.9");
    };
    d.Q0_fn = [guard](cplx z) {
        guard(z);
        return cplx(0.0, 0.0);
    };
    d.tau0_fn = [guard](cplx z) {
        guard(z);
        const double w = 1.0 - std::norm(z);
        return 16.0 / (w * w);
    };
    // log sqrt(tau0) = log 4 - log(1 - z zbar)
    d.dlog_sqrt_tau0_dz_fn = [guard](cplx z) {
        guard(z);
        return std::conj(z) / (1.0 - std::norm(z));
    };
    d.dQ0_dzbar_fn = [guard](cplx z) {
        guard(z);
        return cplx(0.0, 0.0);
    };
    d.vortex_lhs_fn = [guard](cplx z) {
        guard(z);
        const double w = 1.0 - std::norm(z);
        return 1.0 / (w * w);
    };
    return d;
}

WeierstrassData tabulate(const WeierstrassData& d, const PlanarGrid& grid) {
    WeierstrassData out;
    out.name = d.name + "-tabulated";
    out.theta = d.theta;
    out.table_grid = grid;
    out.Q0_table.resize(grid.count());
    out.tau0_table.resize(grid.count());
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix) {
            const cplx z = grid.z(ix, iy);
            out.Q0_table[grid.index(ix, iy)] = d.Q0(z);
            out.tau0_table[grid.index(ix, iy)] = d.tau0(z);
        }
    return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<double> residual_holomorphic(const WeierstrassData& d, const PlanarGrid& grid,
                                         par::Exec exec) {
    if (grid.nx < 3 || grid.ny < 3)
        throw std::invalid_argument("residual_holomorphic: grid too small");
    std::vector<double> out(grid.count(), kNaN);
    if (d.has_derivative_closures()) {
        par::for_each(grid.count(), exec, [&](int node) {
            if (!grid.unmasked(node)) return;
            out[node] = std::abs(d.dQ0_dzbar_fn(grid.z_of(node)));
        });
        return out;
    }
    // grid mode: sample then differentiate
    std::vector<cplx> q(grid.count(), cplx(0.0, 0.0));
    for (int node = 0; node < grid.count(); ++node)
        if (grid.unmasked(node)) q[node] = d.Q0(grid.z_of(node));
    par::for_each(grid.count(), exec, [&](int node) {
        if (!grid.unmasked(node)) return;
        try {
            out[node] = std::abs(fd::dzbar(q, grid, grid.ix_of(node), grid.iy_of(node)));
        } catch (const std::runtime_error&) {
            // isolated cap node of the disk mask: no stencil support
        }
    });
    return out;
}

std::vector<double> residual_vortex(const WeierstrassData& d, const PlanarGrid& grid,
                                    par::Exec exec) {
    std::vector<double> out(grid.count(), kNaN);
    if (d.has_derivative_closures()) {
        par::for_each(grid.count(), exec, [&](int node) {
            if (!grid.unmasked(node)) return;
            const cplx z = grid.z_of(node);
            const double t = d.tau0(z);
            out[node] = std::abs(d.vortex_lhs_fn(z) + std::norm(d.Q0(z)) / t - t / 16.0);
        });
        return out;
    }
    std::vector<double> logsq(grid.count(), 0.0);
    for (int node = 0; node < grid.count(); ++node)
        if (grid.unmasked(node)) logsq[node] = std::log(std::sqrt(d.tau0(grid.z_of(node))));
    par::for_each(grid.count(), exec, [&](int node) {
        if (!grid.unmasked(node)) return;
        const cplx z = grid.z_of(node);
        const double t = d.tau0(z);
        try {
            const double lhs = fd::dzdzbar(logsq, grid, grid.ix_of(node), grid.iy_of(node));
            out[node] = std::abs(lhs + std::norm(d.Q0(z)) / t - t / 16.0);
        } catch (const std::runtime_error&) {
            // isolated cap node of the disk mask: no stencil support
        }
    });
    return out;
}

double max_residual(const std::vector<double>& r, const PlanarGrid& grid, bool interior_only) {
    double m = 0.0;
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix) {
            if (!grid.unmasked(ix, iy)) continue;
            if (interior_only && !grid.interior(ix, iy)) continue;
            const double v = r[grid.index(ix, iy)];
            if (std::isnan(v)) continue;
            m = std::max(m, v);
        }
    return m;
}

double mean_residual(const std::vector<double>& r, const PlanarGrid& grid) {
    double s = 0.0;
    int n = 0;
    for (int node = 0; node < grid.count(); ++node) {
        if (!grid.unmasked(node) || std::isnan(r[node])) continue;
        s += r[node];
        ++n;
    }
    return n ? s / n : 0.0;
}

double compatibility_threshold(const WeierstrassData& d, const PlanarGrid& grid) {
    double tmax = 0.0;
    for (int node = 0; node < grid.count(); ++node)
        if (grid.unmasked(node)) tmax = std::max(tmax, d.tau0(grid.z_of(node)));
    const double h = std::max(grid.hx, grid.hy);
    return 10.0 * h * h * tmax;
}

}  // namespace spinform
