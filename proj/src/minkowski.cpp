#include "spinform/minkowski.hpp"

#include <cmath>
#include <limits>

#include "spinform/stencil.hpp"

namespace spinform {

using cplx = std::complex<double>;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const cplx kI(0.0, 1.0);

struct VCoeffs {
    std::function<cplx(cplx)> alpha;  // (log sqrt tau0)_z
    std::function<cplx(cplx)> q0;
    std::function<double(cplx)> tau0;
};

VCoeffs make_vcoeffs(const WeierstrassData& data) {
    if (!(data.analytic() && data.has_derivative_closures()))
        throw std::invalid_argument("minkowski flow: analytic Weierstrass data required");
    return {data.dlog_sqrt_tau0_dz_fn, data.Q0_fn, data.tau0_fn};
}

void quat_to_state(const ComplexQuaternion& q, std::span<double> s) {
    s[0] = q.w.real(); s[1] = q.w.imag();
    s[2] = q.x.real(); s[3] = q.x.imag();
    s[4] = q.y.real(); s[5] = q.y.imag();
    s[6] = q.z.real(); s[7] = q.z.imag();
}

ComplexQuaternion state_to_quat(std::span<const double> s) {
    return {cplx(s[0], s[1]), cplx(s[2], s[3]), cplx(s[4], s[5]), cplx(s[6], s[7])};
}

// Conformal scalars are complex with respect to the structure I: lambda acts
// on the Spin(1,2) frame by left multiplication by Re(lambda) + Im(lambda) I.
ComplexQuaternion embed_conformal(cplx lambda) {
    return {cplx(lambda.real(), 0.0), cplx(lambda.imag(), 0.0), 0.0, 0.0};
}

ComplexQuaternion v_rhs_value(const VCoeffs& c, cplx z, const ComplexQuaternion& v, cplx dir) {
    const double t = c.tau0(z);
    const cplx adz = c.alpha(z) * dir;
    const cplx bform = (c.q0(z) * dir + 0.25 * t * std::conj(dir)) / std::sqrt(t);
    const ComplexQuaternion iJ(0.0, 0.0, kI, 0.0);
    const ComplexQuaternion coeff =
        embed_conformal(adz) + cq_mul(embed_conformal(bform), iJ);
    return cq_mul(coeff, v);
}

}  // namespace

double spin12_pattern_drift(const ComplexQuaternion& v) {
    return std::max(std::max(std::abs(v.w.imag()), std::abs(v.x.imag())),
                    std::max(std::abs(v.y.real()), std::abs(v.z.real())));
}

FlowRhs v_flow_rhs(const WeierstrassData& data) {
    const VCoeffs c = make_vcoeffs(data);
    return [c](cplx z, std::span<const double> s, cplx dir, std::span<double> out) {
        quat_to_state(v_rhs_value(c, z, state_to_quat(s), dir), out);
    };
}

ComplexQuaternion default_v_init(const WeierstrassData& data, cplx z0, int phase_sign) {
    if (phase_sign != 1 && phase_sign != -1)
        throw std::invalid_argument("default_v_init: phase_sign must be +1 or -1");
    return ComplexQuaternion::one() * cplx(double(phase_sign) * std::pow(data.tau0(z0), 0.25), 0.0);
}

SpinFrameField flow_v(const WeierstrassData& data, const PlanarGrid& grid, const PathPlan& plan,
                      const ComplexQuaternion& init, par::Exec exec, int substeps) {
    const cplx z0 = grid.z_of(plan.seed);
    const double target = std::sqrt(data.tau0(z0));
    if (std::abs(cq_H(init) - cplx(target, 0.0)) > 1e-10)
        throw std::invalid_argument("flow_v: H(init,init) must equal sqrt(tau0(z0))");
    if (spin12_pattern_drift(init) > 1e-12)
        throw std::invalid_argument("flow_v: init violates the Spin(1,2) pattern");

    double state[8];
    quat_to_state(init, state);
    const FlowField f = integrate_flow(v_flow_rhs(data), grid, plan,
                                       std::span<const double>(state, 8), exec, substeps);

    SpinFrameField out;
    out.grid = grid;
    out.vprime.assign(grid.count(), ComplexQuaternion{});
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        out.vprime[n] = state_to_quat(f.at(n));
        out.max_norm_drift =
            std::max(out.max_norm_drift,
                     std::abs(cq_H(out.vprime[n]) - cplx(std::sqrt(data.tau0(grid.z_of(n))), 0.0)));
        out.max_pattern_drift = std::max(out.max_pattern_drift, spin12_pattern_drift(out.vprime[n]));
    }
    if (out.max_pattern_drift > 1e-6)
        throw std::runtime_error("flow_v: Spin(1,2) pattern drift beyond 1e-6");
    return out;
}

std::vector<H2Point> mink_gauss(const SpinFrameField& v, par::Exec exec) {
    const PlanarGrid& grid = v.grid;
    std::vector<H2Point> out(grid.count());
    par::for_each(grid.count(), exec, [&](int n) {
        if (!grid.unmasked(n)) return;
        const cplx h = cq_H(v.vprime[n]);
        const ComplexQuaternion vn = v.vprime[n] * (1.0 / std::sqrt(h.real()));
        const ComplexQuaternion g = cq_mul(cq_bar(vn), cq_hat(vn)) * kI;
        out[n] = decode_h2(g, 1e-8);
    });
    return out;
}

MinkSurface mink_immerse(const SpinFrameField& v, const PathPlan& plan, std::array<double, 3> F0,
                         par::Exec exec) {
    const PlanarGrid& grid = v.grid;
    // xi evaluated at the nodes; here mu = sqrt(tau0) and v = v'/tau0^{1/4},
    // so mu bar(v) X hat(v) = bar(v') X hat(v').
    std::vector<std::array<double, 3>> xi_x(grid.count()), xi_y(grid.count());
    const ComplexQuaternion J = ComplexQuaternion::J();
    const ComplexQuaternion JI = cq_mul(J, ComplexQuaternion::I());
    std::vector<double> pattern_err(grid.count(), 0.0);
    par::for_each(grid.count(), exec, [&](int n) {
        if (!grid.unmasked(n)) return;
        const ComplexQuaternion& vp = v.vprime[n];
        const ComplexQuaternion ex = cq_mul(cq_mul(cq_bar(vp), J), cq_hat(vp));
        const ComplexQuaternion ey = cq_mul(cq_mul(cq_bar(vp), JI), cq_hat(vp));
        // both lie in the span {i1, J, JI}: (x0, x2, x3) = (Im w, Re y, -Re z)
        xi_x[n] = {ex.w.imag(), ex.y.real(), -ex.z.real()};
        xi_y[n] = {ey.w.imag(), ey.y.real(), -ey.z.real()};
        pattern_err[n] = std::max({std::abs(ex.w.real()), std::abs(ex.x), std::abs(ex.y.imag()),
                                   std::abs(ex.z.imag()), std::abs(ey.w.real()), std::abs(ey.x),
                                   std::abs(ey.y.imag()), std::abs(ey.z.imag())});
    });

    double pat = 0.0;
    for (int n = 0; n < grid.count(); ++n) pat = std::max(pat, pattern_err[n]);
    if (pat > 1e-5) throw std::runtime_error("mink_immerse: xi left the R^{1,2} span");

    MinkSurface s;
    s.grid = grid;
    s.F.assign(grid.count(), {kNaN, kNaN, kNaN});
    s.F[plan.seed] = F0;
    auto edge_inc = [&](const Edge& e, int k) {
        const cplx dz = grid.z_of(e.to) - grid.z_of(e.from);
        // straight grid edge: only one of dx, dy is nonzero
        return 0.5 * ((xi_x[e.from][k] + xi_x[e.to][k]) * dz.real() +
                      (xi_y[e.from][k] + xi_y[e.to][k]) * dz.imag());
    };
    auto run = [&](const std::vector<Edge>& es) {
        for (const Edge& e : es)
            for (int k = 0; k < 3; ++k) s.F[e.to][k] = s.F[e.from][k] + edge_inc(e, k);
    };
    run(plan.trunk);
    for (const auto& b : plan.branches) run(b);
    run(plan.tail);

    // closedness of xi on plaquettes
    double loop = 0.0;
    for (int iy = 0; iy + 1 < grid.ny; ++iy)
        for (int ix = 0; ix + 1 < grid.nx; ++ix) {
            if (!grid.unmasked(ix, iy) || !grid.unmasked(ix + 1, iy) ||
                !grid.unmasked(ix, iy + 1) || !grid.unmasked(ix + 1, iy + 1))
                continue;
            for (int k = 0; k < 3; ++k) {
                const Edge e1{grid.index(ix, iy), grid.index(ix + 1, iy)};
                const Edge e2{grid.index(ix + 1, iy), grid.index(ix + 1, iy + 1)};
                const Edge e3{grid.index(ix + 1, iy + 1), grid.index(ix, iy + 1)};
                const Edge e4{grid.index(ix, iy + 1), grid.index(ix, iy)};
                loop = std::max(loop, std::abs(edge_inc(e1, k) + edge_inc(e2, k) +
                                               edge_inc(e3, k) + edge_inc(e4, k)));
            }
        }
    s.max_closedness = loop;
    if (loop > 1e-5) throw std::runtime_error("mink_immerse: closedness residual beyond 1e-5");
    return s;
}

void mink_diagnose(MinkSurface& surface, const WeierstrassData& data, par::Exec exec) {
    const PlanarGrid& grid = surface.grid;
    surface.H_meas.assign(grid.count(), kNaN);
    surface.mu_meas.assign(grid.count(), kNaN);

    std::vector<double> X0(grid.count(), kNaN), X2(grid.count(), kNaN), X3(grid.count(), kNaN);
    for (int n = 0; n < grid.count(); ++n) {
        X0[n] = surface.F[n][0];
        X2[n] = surface.F[n][1];
        X3[n] = surface.F[n][2];
    }
    std::vector<double> eH(grid.count(), 0.0), eM(grid.count(), 0.0);
    par::for_each(grid.count(), exec, [&](int n) {
        const int ix = grid.ix_of(n), iy = grid.iy_of(n);
        if (!grid.interior(ix, iy)) return;
        using Vec3 = std::array<double, 3>;
        auto dot = [](const Vec3& a, const Vec3& b) {
            return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        };
        auto d1 = [&](const std::vector<double>& f, int dx, int dy, double h) {
            return fd::deriv1(f, grid, ix, iy, dx, dy, h);
        };
        auto d2 = [&](const std::vector<double>& f, int dx, int dy, double h) {
            return fd::deriv2(f, grid, ix, iy, dx, dy, h);
        };
        const Vec3 Fx{d1(X0, 1, 0, grid.hx), d1(X2, 1, 0, grid.hx), d1(X3, 1, 0, grid.hx)};
        const Vec3 Fy{d1(X0, 0, 1, grid.hy), d1(X2, 0, 1, grid.hy), d1(X3, 0, 1, grid.hy)};
        const Vec3 Fxx{d2(X0, 1, 0, grid.hx), d2(X2, 1, 0, grid.hx), d2(X3, 1, 0, grid.hx)};
        const Vec3 Fyy{d2(X0, 0, 1, grid.hy), d2(X2, 0, 1, grid.hy), d2(X3, 0, 1, grid.hy)};

        const double E = dot(Fx, Fx), F = dot(Fx, Fy), G = dot(Fy, Fy);
        const double mu2 = 0.5 * (E + G);
        surface.mu_meas[n] = std::sqrt(std::max(mu2, 0.0));

        // upward timelike normal: Minkowski cross product of the tangents
        Vec3 N{Fx[1] * Fy[2] - Fx[2] * Fy[1],   // covector then raised:
               Fx[2] * Fy[0] - Fx[0] * Fy[2],   // time slot sign handled below
               Fx[0] * Fy[1] - Fx[1] * Fy[0]};
        N[0] = -N[0];
        const double nn = dot(N, N);  // negative for spacelike surfaces
        double scale = 1.0 / std::sqrt(std::abs(nn));
        if (N[0] * scale < 0.0) scale = -scale;  // upward
        for (double& v : N) v *= scale;

        const double l = dot(Fxx, N), nq = dot(Fyy, N);
        // S = grad(nu1): <S X, Y> = -<nu1, d^2F>; with <nu1,nu1> = -1 the
        // mean curvature of the spacelike surface is H = (l+n)/(2 mu^2)
        const double H = 0.5 * (l + nq) / mu2;
        surface.H_meas[n] = H;
        eH[n] = std::abs(H - 0.5);
        const double t = data.tau0(grid.z_of(n));
        eM[n] = std::max(std::abs(E - t), std::max(std::abs(G - t), std::abs(F))) / t;
    });
    for (int n = 0; n < grid.count(); ++n) {
        surface.max_H_err = std::max(surface.max_H_err, eH[n]);
        surface.max_metric_rel_err = std::max(surface.max_metric_rel_err, eM[n]);
    }
}

SpinorComponentField correspond_to_h2r(const SpinFrameField& v, const WeierstrassData& data) {
    SpinorComponentField out;
    out.grid = v.grid;
    out.data_name = data.name;
    out.g1p.assign(v.grid.count(), IdealElement(cplx(kNaN, kNaN), cplx(kNaN, kNaN)));
    double drift = 0.0;
    for (int n = 0; n < v.grid.count(); ++n) {
        if (!v.grid.unmasked(n)) continue;
        out.g1p[n] = IdealElement::from_quaternion(project_plus(v.vprime[n]), 1e-9);
        drift = std::max(drift,
                         std::abs(ideal_norm(out.g1p[n]) - std::sqrt(data.tau0(v.grid.z_of(n)))));
    }
    out.max_norm_drift = drift;
    return out;
}

SpinFrameField correspond_from_g1(const SpinorComponentField& g1p, const WeierstrassData& data) {
    SpinFrameField out;
    out.grid = g1p.grid;
    out.vprime.assign(g1p.grid.count(), ComplexQuaternion{});
    for (int n = 0; n < g1p.grid.count(); ++n) {
        if (!g1p.grid.unmasked(n)) continue;
        // (1/2)(1+iI)(alpha0 + alpha1 I + i alpha2 J + i alpha3 JI) has
        // a = alpha0 - i alpha1, b = i alpha2 - alpha3: invert directly
        const cplx a = g1p.g1p[n].a, b = g1p.g1p[n].b;
        const double a0 = a.real(), a1 = -a.imag();
        const double a2 = b.imag(), a3 = -b.real();
        const ComplexQuaternion v(cplx(a0, 0.0), cplx(a1, 0.0), cplx(0.0, a2),
                                  cplx(0.0, -a3));  // i a3 JI = -i a3 K
        out.vprime[n] = v;
        out.max_norm_drift = std::max(
            out.max_norm_drift,
            std::abs(cq_H(v) - cplx(std::sqrt(data.tau0(g1p.grid.z_of(n))), 0.0)));
    }
    return out;
}

namespace {

double flow_residual_impl(const PlanarGrid& grid, const std::vector<ComplexQuaternion>& vprime,
                          const WeierstrassData& data) {
    const VCoeffs c = make_vcoeffs(data);
    const FlowRhs g1rhs = g1_flow_rhs(data);
    double worst = 0.0;
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        const cplx z = grid.z_of(n);
        for (const cplx dir : {cplx(1.0, 0.0), cplx(0.0, 1.0)}) {
            const ComplexQuaternion dv = v_rhs_value(c, z, vprime[n], dir);
            const IdealElement lhs = IdealElement::from_quaternion(project_plus(dv), 1e-6);
            const IdealElement g = IdealElement::from_quaternion(project_plus(vprime[n]), 1e-6);
            double s[4] = {g.a.real(), g.a.imag(), g.b.real(), g.b.imag()};
            double o[4];
            g1rhs(z, std::span<const double>(s, 4), dir, std::span<double>(o, 4));
            const IdealElement rhs(cplx(o[0], o[1]), cplx(o[2], o[3]));
            worst = std::max(worst, std::max(std::abs(lhs.a - rhs.a), std::abs(lhs.b - rhs.b)));
        }
    }
    return worst;
}

}  // namespace

double correspondence_flow_residual(const SpinFrameField& v, const WeierstrassData& data) {
    return flow_residual_impl(v.grid, v.vprime, data);
}

double correspondence_flow_residual(const SpinorComponentField& g1p, const WeierstrassData& data) {
    const SpinFrameField v = correspond_from_g1(g1p, data);
    return flow_residual_impl(v.grid, v.vprime, data);
}

}  // namespace spinform
