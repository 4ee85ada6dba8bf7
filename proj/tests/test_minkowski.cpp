#include <doctest.h>

#include <cmath>

#include "spinform/minkowski.hpp"

using namespace spinform;
using cplx = std::complex<double>;

TEST_SUITE("minkowski") {

TEST_CASE("default init and pattern") {
    const WeierstrassData d = family_constant(0.0);
    const ComplexQuaternion v = default_v_init(d, 0.0);
    CHECK(std::abs(cq_H(v) - cplx(2.0, 0.0)) < 1e-14);
    CHECK(spin12_pattern_drift(v) == 0.0);
}

TEST_CASE("norm law and pattern hold along the v' flow") {
    const PlanarGrid grid = PlanarGrid::disk(0.5, 64);
    for (const WeierstrassData& d : {family_constant(0.0), family_rotational()}) {
        PathPlan plan = PathPlan::column_rows(grid, 0.0);
        const SpinFrameField v = flow_v(d, grid, plan, default_v_init(d, grid.z_of(plan.seed)));
        CHECK(v.max_norm_drift < 1e-6);
        CHECK(v.max_pattern_drift < 1e-6);
    }
}

TEST_CASE("v' flow holonomy is tiny for compatible data") {
    const WeierstrassData d = family_constant(0.0);
    const PlanarGrid grid = PlanarGrid::disk(0.5, 64);
    PathPlan plan = PathPlan::column_rows(grid, 0.0);
    const SpinFrameField v = flow_v(d, grid, plan, default_v_init(d, 0.0));
    FlowField ff;
    ff.grid = grid;
    ff.dim = 8;
    ff.values.resize(std::size_t(grid.count()) * 8);
    for (int n = 0; n < grid.count(); ++n) {
        auto s = ff.at(n);
        const ComplexQuaternion& q = v.vprime[n];
        s[0] = q.w.real(); s[1] = q.w.imag();
        s[2] = q.x.real(); s[3] = q.x.imag();
        s[4] = q.y.real(); s[5] = q.y.imag();
        s[6] = q.z.real(); s[7] = q.z.imag();
    }
    CHECK(max_residual(holonomy_residual(v_flow_rhs(d), ff), grid) < 5e-7);
}

TEST_CASE("gauss map: base point, fiber invariance, hyperboloid") {
    const WeierstrassData d = family_constant(0.0);
    const PlanarGrid grid = PlanarGrid::disk(0.5, 16);
    PathPlan plan = PathPlan::column_rows(grid, 0.0);
    SpinFrameField v = flow_v(d, grid, plan, default_v_init(d, 0.0));

    // v = 1 -> i1, the base point
    SpinFrameField unit = v;
    unit.vprime.assign(grid.count(), ComplexQuaternion::one());
    const auto Gu = mink_gauss(unit);
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        CHECK(Gu[n].x0 == doctest::Approx(1.0));
        CHECK(Gu[n].x2 == doctest::Approx(0.0));
    }

    const auto G = mink_gauss(v);
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        CHECK(std::abs(G[n].constraint()) < 1e-10);
    }

    // left action by cos(t) + sin(t) I fixes G
    const double t = 0.9;
    const ComplexQuaternion rot(std::cos(t), std::sin(t), 0.0, 0.0);
    SpinFrameField vr = v;
    for (auto& q : vr.vprime) q = cq_mul(rot, q);
    const auto Gr = mink_gauss(vr);
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        CHECK(Gr[n].x0 == doctest::Approx(G[n].x0).epsilon(1e-10));
        CHECK(Gr[n].x2 == doctest::Approx(G[n].x2).epsilon(1e-10));
        CHECK(Gr[n].x3 == doctest::Approx(G[n].x3).epsilon(1e-10));
    }
}

TEST_CASE("constant frame integrates to a plane") {
    const PlanarGrid grid = PlanarGrid::rect({-0.5, -0.5}, 1.0, 1.0, 17, 17);
    PathPlan plan = PathPlan::column_rows(grid, 0.0);
    SpinFrameField v;
    v.grid = grid;
    v.vprime.assign(grid.count(), ComplexQuaternion::one());  // v = 1, mu = 1
    MinkSurface s = mink_immerse(v, plan);
    // F = F0 + x J + y JI: coordinates (x0,x2,x3) = (0, x, y)
    for (int n = 0; n < grid.count(); ++n) {
        const auto z = grid.z_of(n);
        CHECK(s.F[n][0] == doctest::Approx(0.0));
        CHECK(s.F[n][1] == doctest::Approx(z.real()).epsilon(1e-13));
        CHECK(s.F[n][2] == doctest::Approx(z.imag()).epsilon(1e-13));
    }
    mink_diagnose(s, family_constant(0.0));
    // flat plane: H_meas = 0 flags non-CMC input data
    double worst = 0.0;
    for (int n = 0; n < grid.count(); ++n)
        if (grid.interior(grid.ix_of(n), grid.iy_of(n)))
            worst = std::max(worst, std::abs(s.H_meas[n]));
    CHECK(worst < 1e-10);
}

TEST_CASE("constant family surface has H = 1/2 and conformal metric") {
    const WeierstrassData d = family_constant(0.0);
    const PlanarGrid grid = PlanarGrid::disk(0.5, 64);
    PathPlan plan = PathPlan::column_rows(grid, 0.0);
    const SpinFrameField v = flow_v(d, grid, plan, default_v_init(d, 0.0));
    MinkSurface s = mink_immerse(v, plan);
    mink_diagnose(s, d);
    CHECK(s.max_H_err < 1e-3);
    CHECK(s.max_metric_rel_err < 1e-3);
    CHECK(s.max_closedness < 1e-5);
}

TEST_CASE("correspondence to H^2 x R") {
    const WeierstrassData d = family_constant(0.0);
    const PlanarGrid grid = PlanarGrid::disk(0.5, 32);
    PathPlan plan = PathPlan::column_rows(grid, 0.0);
    const SpinFrameField v = flow_v(d, grid, plan, default_v_init(d, 0.0));

    // v' = 1 -> (1/2)(1+iI)
    SpinFrameField unit = v;
    unit.vprime.assign(grid.count(), ComplexQuaternion::one());
    const SpinorComponentField gu = correspond_to_h2r(unit, d);
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        CHECK(std::abs(gu.g1p[n].a - cplx(1.0, 0.0)) < 1e-15);
        CHECK(std::abs(gu.g1p[n].b) < 1e-15);
    }

    const SpinorComponentField g1p = correspond_to_h2r(v, d);
    // the produced g1' solves the ideal flow equation algebraically
    CHECK(correspondence_flow_residual(v, d) < 1e-8);
    // norm bookkeeping: |g1'|^2 = H(v',v') = sqrt(tau0)
    CHECK(g1p.max_norm_drift < 1e-6);

    // gauss maps agree
    const auto Gm = mink_gauss(v);
    const auto Gh = gauss_map(g1p);
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        CHECK(std::abs(Gm[n].x0 - Gh[n].x0) < 1e-8);
        CHECK(std::abs(Gm[n].x2 - Gh[n].x2) < 1e-8);
        CHECK(std::abs(Gm[n].x3 - Gh[n].x3) < 1e-8);
    }

    // round trip is the identity and the preimage solves the v' flow
    const SpinFrameField v2 = correspond_from_g1(g1p, d);
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        CHECK((v2.vprime[n] - v.vprime[n]).max_abs() < 1e-10);
    }
    CHECK(correspondence_flow_residual(g1p, d) < 1e-8);
}

TEST_CASE("correspondence is sign-equivariant") {
    const WeierstrassData d = family_constant(0.0);
    const PlanarGrid grid = PlanarGrid::disk(0.5, 16);
    PathPlan plan = PathPlan::column_rows(grid, 0.0);
    const SpinFrameField vp = flow_v(d, grid, plan, default_v_init(d, 0.0, +1));
    const SpinFrameField vm = flow_v(d, grid, plan, default_v_init(d, 0.0, -1));
    const auto gp = correspond_to_h2r(vp, d), gm = correspond_to_h2r(vm, d);
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        CHECK(gp.g1p[n].a == -gm.g1p[n].a);
        CHECK(gp.g1p[n].b == -gm.g1p[n].b);
    }
}

TEST_CASE("left H-action leaves the gauss map and induced metric unchanged") {
    const WeierstrassData d = family_constant(0.0);
    const PlanarGrid grid = PlanarGrid::disk(0.5, 32);
    PathPlan plan = PathPlan::column_rows(grid, 0.0);
    const SpinFrameField v = flow_v(d, grid, plan, default_v_init(d, 0.0));
    SpinFrameField vr = v;
    const double t = 0.37;
    const ComplexQuaternion rot(std::cos(t), std::sin(t), 0.0, 0.0);
    for (auto& q : vr.vprime) q = cq_mul(rot, q);

    MinkSurface s1 = mink_immerse(v, plan);
    MinkSurface s2 = mink_immerse(vr, plan);
    mink_diagnose(s1, d);
    mink_diagnose(s2, d);
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.interior(grid.ix_of(n), grid.iy_of(n))) continue;
        CHECK(s1.mu_meas[n] == doctest::Approx(s2.mu_meas[n]).epsilon(1e-8));
    }
    const auto G1 = mink_gauss(v), G2 = mink_gauss(vr);
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        CHECK(std::abs(G1[n].x0 - G2[n].x0) < 1e-8);
    }
}

}  // TEST_SUITE
