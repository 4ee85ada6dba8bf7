#include <doctest.h>

#include <cmath>

#include "spinform/weierstrass.hpp"

using namespace spinform;
using cplx = std::complex<double>;

TEST_SUITE("weierstrass") {

TEST_CASE("constant family residuals are identically zero") {
    for (double theta : {0.0, M_PI, 1.3}) {
        const WeierstrassData d = family_constant(theta);
        const PlanarGrid g = PlanarGrid::rect({-0.5, -0.5}, 1.0, 1.0, 17, 17);
        CHECK(max_residual(residual_holomorphic(d, g), g) < 1e-15);
        CHECK(max_residual(residual_vortex(d, g), g) < 1e-15);
        CHECK(std::abs(std::abs(d.Q0(0.3)) - 1.0) < 1e-15);
        CHECK(d.tau0(cplx(0.1, 0.2)) == 4.0);
    }
    CHECK(family_constant(0.0).Q0(0.0) == cplx(1.0, 0.0));
    CHECK(std::abs(family_constant(M_PI).Q0(0.0) - cplx(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("rotational family") {
    const WeierstrassData d = family_rotational();
    CHECK(d.tau0(0.0) == doctest::Approx(16.0));
    CHECK(std::abs(d.Q0(cplx(0.3, 0.2))) == 0.0);
    CHECK(std::abs(d.vortex_lhs_fn(cplx(0.5, 0.0)) + std::norm(d.Q0(0.5)) / d.tau0(0.5) -
                   d.tau0(0.5) / 16.0) < 1e-12);
    const PlanarGrid g = PlanarGrid::rect({-0.6, -0.6}, 1.2, 1.2, 17, 17);
    CHECK(max_residual(residual_vortex(d, g), g) < 1e-12);
    CHECK_THROWS_AS(d.tau0(cplx(0.95, 0.0)), std::domain_error);
}

TEST_CASE("finite differences flag incompatible data") {
    // tau0 = 4, Q0 = 2 violates the vortex equation by 3/4 everywhere
    WeierstrassData bad;
    bad.name = "incompatible";
    const PlanarGrid g = PlanarGrid::rect({-0.5, -0.5}, 1.0, 1.0, 17, 17);
    WeierstrassData tab;
    tab.table_grid = g;
    tab.Q0_table.assign(g.count(), cplx(2.0, 0.0));
    tab.tau0_table.assign(g.count(), 4.0);
    const auto rv = residual_vortex(tab, g);
    CHECK(max_residual(rv, g) == doctest::Approx(0.75));
    CHECK(max_residual(rv, g) > compatibility_threshold(tab, g));
}

TEST_CASE("wirtinger stencils: dzbar of zbar is 1, of Q0=z^3 decays at O(h^2)") {
    // tabulated Q0 = zbar: residual 1 everywhere
    {
        const PlanarGrid g = PlanarGrid::rect({-0.5, -0.5}, 1.0, 1.0, 17, 17);
        WeierstrassData tab;
        tab.table_grid = g;
        tab.Q0_table.resize(g.count());
        tab.tau0_table.assign(g.count(), 4.0);
        for (int n = 0; n < g.count(); ++n) tab.Q0_table[n] = std::conj(g.z_of(n));
        const auto rh = residual_holomorphic(tab, g);
        CHECK(max_residual(rh, g) == doctest::Approx(1.0));
        CHECK(mean_residual(rh, g) == doctest::Approx(1.0));
    }
    // Q0 = z^3 is holomorphic: the centered stencil is exact on cubics, the
    // one-sided boundary forms are second order; refine and watch the decay
    double prev = 0.0;
    for (int k = 0; k < 3; ++k) {
        const int n = 16 * (1 << k) + 1;
        const PlanarGrid g = PlanarGrid::rect({-0.5, -0.5}, 1.0, 1.0, n, n);
        WeierstrassData tab;
        tab.table_grid = g;
        tab.Q0_table.resize(g.count());
        tab.tau0_table.assign(g.count(), 4.0);
        for (int m = 0; m < g.count(); ++m) tab.Q0_table[m] = std::pow(g.z_of(m), 3);
        const double r = max_residual(residual_holomorphic(tab, g), g);
        if (k > 0) CHECK(prev / r > 3.0);
        prev = r;
    }
}

TEST_CASE("sampled rotational family converges at second order") {
    // residual of the exact solution measures pure stencil error: O(h^2);
    // evaluate on the interior nodes of the coarsest grid, shared by all levels
    double prev = 0.0;
    for (int k = 0; k < 3; ++k) {
        const int n = 16 * (1 << k) + 1;
        const PlanarGrid g = PlanarGrid::rect({-0.6, -0.6}, 1.2, 1.2, n, n);
        const WeierstrassData tab = tabulate(family_rotational(), g);
        const auto res = residual_vortex(tab, g);
        double r = 0.0;
        const int step = 1 << k;
        for (int iy = step; iy < g.ny - step; iy += step)
            for (int ix = step; ix < g.nx - step; ix += step)
                r = std::max(r, res[g.index(ix, iy)]);
        if (k > 0) {
            CHECK(prev / r > 3.5);
            CHECK(prev / r < 4.5);
        }
        prev = r;
    }
}

TEST_CASE("vortex residual is translation invariant for constant data") {
    const WeierstrassData d = family_constant(0.7);
    const PlanarGrid g1 = PlanarGrid::rect({-0.5, -0.5}, 1.0, 1.0, 17, 17);
    const PlanarGrid g2 = PlanarGrid::rect({1.5, 2.5}, 1.0, 1.0, 17, 17);
    const WeierstrassData t1 = tabulate(d, g1), t2 = tabulate(d, g2);
    const auto r1 = residual_vortex(t1, g1), r2 = residual_vortex(t2, g2);
    for (int n = 0; n < g1.count(); ++n) CHECK(r1[n] == doctest::Approx(r2[n]).epsilon(1e-12));
}

TEST_CASE("serial and parallel residuals agree bitwise") {
    const PlanarGrid g = PlanarGrid::disk(0.5, 32);
    const WeierstrassData tab = tabulate(family_rotational(), PlanarGrid::rect({-0.6, -0.6}, 1.2, 1.2, 49, 49));
    const auto a = residual_vortex(tab, g, par::Exec::serial);
    const auto b = residual_vortex(tab, g, par::Exec::openmp);
    for (int n = 0; n < g.count(); ++n) {
        if (!g.unmasked(n)) continue;
        if (std::isnan(a[n])) {
            CHECK(std::isnan(b[n]));  // cap nodes without stencil support
        } else {
            CHECK(a[n] == b[n]);
        }
    }
}

TEST_CASE("nonpositive tau0 is rejected with a location") {
    const PlanarGrid g = PlanarGrid::rect({-0.5, -0.5}, 1.0, 1.0, 9, 9);
    WeierstrassData tab;
    tab.table_grid = g;
    tab.Q0_table.assign(g.count(), cplx(1.0, 0.0));
    tab.tau0_table.assign(g.count(), 4.0);
    tab.tau0_table[g.index(3, 2)] = -4.0;
    CHECK_THROWS_WITH_AS(tab.validate_tables(),
                         doctest::Contains("tau0 not positive at node (3,2)"),
                         std::invalid_argument);
}

}  // TEST_SUITE
