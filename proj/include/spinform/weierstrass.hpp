#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spinform/grid.hpp"
#include "spinform/parallel.hpp"

namespace spinform {

// Weierstrass data (Q0, tau0): a holomorphic function and a positive function
// tied by the vortex-type equation
//     (Q0)_zbar = 0,   (log sqrt(tau0))_{z zbar} = -|Q0|^2/tau0 + tau0/16.
// Analytic closures are used exactly when present; otherwise the fields are
// tabulated on their own rectangular grid and sampled bilinearly.
struct WeierstrassData {
    using cplx = std::complex<double>;

    std::string name = "custom";
    double theta = 0.0;

    // analytic closures (all present or all absent together with the
    // derivative closures below)
    std::function<cplx(cplx)> Q0_fn;
    std::function<double(cplx)> tau0_fn;
    std::function<cplx(cplx)> dlog_sqrt_tau0_dz_fn;   // (log sqrt tau0)_z
    std::function<cplx(cplx)> dQ0_dzbar_fn;           // (Q0)_zbar
    std::function<double(cplx)> vortex_lhs_fn;        // (log sqrt tau0)_{z zbar}

    // tabulated fallback
    std::optional<PlanarGrid> table_grid;
    std::vector<cplx> Q0_table;
    std::vector<double> tau0_table;

    bool analytic() const { return static_cast<bool>(Q0_fn); }
    bool has_derivative_closures() const {
        return static_cast<bool>(dlog_sqrt_tau0_dz_fn) && static_cast<bool>(dQ0_dzbar_fn) &&
               static_cast<bool>(vortex_lhs_fn);
    }

    cplx Q0(cplx z) const;
    double tau0(cplx z) const;  // throws if not positive

    void validate_tables() const;
};

// tau0 = 4, Q0 = e^{i theta}: both compatibility residuals vanish identically.
WeierstrassData family_constant(double theta);

// Q0 = 0, tau0 = 16/(1-|z|^2)^2 on |z| <= 0.9 (throws outside).
WeierstrassData family_rotational();

// Sample closures of `d` onto `grid`, dropping the closures (grid mode).
WeierstrassData tabulate(const WeierstrassData& d, const PlanarGrid& grid);

// |(Q0)_zbar| per node; NaN at masked nodes.
std::vector<double> residual_holomorphic(const WeierstrassData& d, const PlanarGrid& grid,
                                         par::Exec exec = par::Exec::openmp);

// |(log sqrt tau0)_{z zbar} + |Q0|^2/tau0 - tau0/16| per node; NaN at masked nodes.
std::vector<double> residual_vortex(const WeierstrassData& d, const PlanarGrid& grid,
                                    par::Exec exec = par::Exec::openmp);

// Max over unmasked (optionally interior-only) nodes, ignoring NaN.
double max_residual(const std::vector<double>& r, const PlanarGrid& grid, bool interior_only = false);
double mean_residual(const std::vector<double>& r, const PlanarGrid& grid);

// Advisory compatibility threshold: 10 h^2 max(tau0). Reported, not hard-failed.
double compatibility_threshold(const WeierstrassData& d, const PlanarGrid& grid);

}  // namespace spinform
