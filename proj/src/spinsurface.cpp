#include "spinform/spinsurface.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "spinform/stencil.hpp"

namespace spinform {

using cplx = std::complex<double>;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const cplx kI(0.0, 1.0);

// J hat(g) I for g = (1/2)(1+iI)(a+bJ): stays in the ideal, (a,b) -> (i conj b, i conj a).
IdealElement j_hat_i(const IdealElement& g) {
    return {kI * std::conj(g.b), kI * std::conj(g.a)};
}

struct G1Coeffs {
    std::function<cplx(cplx)> alpha;  // (log sqrt tau0)_z
    std::function<cplx(cplx)> q0;
    std::function<double(cplx)> tau0;
};

G1Coeffs make_coeffs(const WeierstrassData& data) {
    G1Coeffs c;
    if (data.analytic() && data.has_derivative_closures()) {
        c.alpha = data.dlog_sqrt_tau0_dz_fn;
        c.q0 = data.Q0_fn;
        c.tau0 = data.tau0_fn;
        return c;
    }
    if (!data.table_grid)
        throw std::invalid_argument("g1_flow_rhs: data has neither closures nor tables");
    const PlanarGrid tg = *data.table_grid;
    auto logsq = std::make_shared<std::vector<double>>(tg.count());
    for (int n = 0; n < tg.count(); ++n) (*logsq)[n] = std::log(std::sqrt(data.tau0_table[n]));
    auto dlog = std::make_shared<std::vector<cplx>>(tg.count());
    for (int iy = 0; iy < tg.ny; ++iy)
        for (int ix = 0; ix < tg.nx; ++ix)
            (*dlog)[tg.index(ix, iy)] =
                0.5 * (fd::dx(*logsq, tg, ix, iy) - kI * fd::dy(*logsq, tg, ix, iy));
    auto q0 = std::make_shared<std::vector<cplx>>(data.Q0_table);
    auto tau = std::make_shared<std::vector<double>>(data.tau0_table);
    c.alpha = [tg, dlog](cplx z) { return fd::bilinear(*dlog, tg, z); };
    c.q0 = [tg, q0](cplx z) { return fd::bilinear(*q0, tg, z); };
    c.tau0 = [tg, tau](cplx z) { return fd::bilinear(*tau, tg, z); };
    return c;
}

IdealElement state_to_ideal(std::span<const double> s) {
    return {cplx(s[0], s[1]), cplx(s[2], s[3])};
}

void ideal_to_state(const IdealElement& g, std::span<double> s) {
    s[0] = g.a.real();
    s[1] = g.a.imag();
    s[2] = g.b.real();
    s[3] = g.b.imag();
}

}  // namespace

FlowRhs g1_flow_rhs(const WeierstrassData& data) {
    // The conformal scalars are complex with respect to the structure I and
    // act by left multiplication; on the (1+iI)/2 ideal (where I acts as -i)
    // they enter as their plain-complex conjugates.
    const G1Coeffs c = make_coeffs(data);
    return [c](cplx z, std::span<const double> s, cplx dir, std::span<double> out) {
        const IdealElement g = state_to_ideal(s);
        const double t = c.tau0(z);
        const cplx adz = c.alpha(z) * dir;                                    // dz leg
        const cplx bform = (c.q0(z) * dir + 0.25 * t * std::conj(dir)) / std::sqrt(t);
        const IdealElement d = std::conj(adz) * g + std::conj(bform) * j_hat_i(g);
        ideal_to_state(d, out);
    };
}

IdealElement default_g1_init(const WeierstrassData& data, cplx z0, int phase_sign) {
    if (phase_sign != 1 && phase_sign != -1)
        throw std::invalid_argument("default_g1_init: phase_sign must be +1 or -1");
    return {double(phase_sign) * std::pow(data.tau0(z0), 0.25), 0.0};
}

SpinorComponentField flow_g1(const WeierstrassData& data, const PlanarGrid& grid,
                             const PathPlan& plan, const IdealElement& init, par::Exec exec,
                             int substeps) {
    const cplx z0 = grid.z_of(plan.seed);
    const double target = std::sqrt(data.tau0(z0));
    if (std::abs(ideal_norm(init) - target) > 1e-10)
        throw std::invalid_argument("flow_g1: |init|^2 must equal sqrt(tau0(z0))");

    double state[4];
    ideal_to_state(init, state);
    const FlowField f =
        integrate_flow(g1_flow_rhs(data), grid, plan, std::span<const double>(state, 4), exec,
                       substeps);

    SpinorComponentField out;
    out.grid = grid;
    out.data_name = data.name;
    out.z0 = z0;
    out.g1p.assign(grid.count(), IdealElement(cplx(kNaN, kNaN), cplx(kNaN, kNaN)));
    double drift = 0.0;
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        out.g1p[n] = state_to_ideal(f.at(n));
        drift = std::max(drift, std::abs(ideal_norm(out.g1p[n]) - std::sqrt(data.tau0(grid.z_of(n)))));
    }
    out.max_norm_drift = drift;
    return out;
}

ProductStructureField product_structure(const WeierstrassData& data, const HzField& hzf) {
    ProductStructureField ps;
    ps.grid = hzf.grid;
    ps.hz = hzf.hz;
    ps.mu.assign(ps.grid.count(), kNaN);
    ps.nu.assign(ps.grid.count(), kNaN);
    for (int n = 0; n < ps.grid.count(); ++n) {
        if (!ps.grid.unmasked(n)) continue;
        const double t = data.tau0(ps.grid.z_of(n));
        const double mu = std::sqrt(t + 4.0 * std::norm(ps.hz[n]));
        ps.mu[n] = mu;
        ps.nu[n] = std::sqrt(t) / mu;
    }
    return ps;
}

std::vector<ComplexQuaternion> reconstruct_g2(const SpinorComponentField& g1p,
                                              const ProductStructureField& ps, par::Exec exec) {
    const PlanarGrid& grid = g1p.grid;
    std::vector<ComplexQuaternion> out(grid.count());
    const ComplexQuaternion I = ComplexQuaternion::I();
    const ComplexQuaternion J = ComplexQuaternion::J();
    par::for_each(grid.count(), exec, [&](int n) {
        if (!grid.unmasked(n)) return;
        const ComplexQuaternion q = g1p.g1p[n].quaternion();
        const ComplexQuaternion t1 = cq_mul(cq_mul(I, cq_hat(q)), I) * cplx(-1.0 / ps.nu[n], 0.0);
        const ComplexQuaternion t2 =
            cq_mul(J, q) * (2.0 * kI * ps.hz[n] / (ps.mu[n] * ps.nu[n]));
        out[n] = t1 + t2;
    });
    return out;
}

std::vector<ComplexQuaternion> assemble_spinor(const SpinorComponentField& g1p,
                                               const std::vector<ComplexQuaternion>& g2p,
                                               const ProductStructureField& ps, par::Exec exec,
                                               double tol) {
    const PlanarGrid& grid = g1p.grid;
    std::vector<ComplexQuaternion> out(grid.count());
    std::vector<double> err(grid.count(), 0.0);
    par::for_each(grid.count(), exec, [&](int n) {
        if (!grid.unmasked(n)) return;
        const ComplexQuaternion g =
            (g1p.g1p[n].quaternion() + g2p[n]) * cplx(1.0 / std::sqrt(ps.mu[n]), 0.0);
        out[n] = g;
        err[n] = std::abs(cq_H(g) - cplx(1.0, 0.0));
    });
    for (int n = 0; n < grid.count(); ++n)
        if (grid.unmasked(n) && err[n] > tol)
            throw std::runtime_error("assemble_spinor: |H(g,g)-1| above tolerance at node " +
                                     std::to_string(n));
    return out;
}

SurfaceSample immerse(const PlanarGrid& grid, const std::vector<ComplexQuaternion>& g,
                      const std::vector<double>& h, par::Exec exec) {
    SurfaceSample s;
    s.grid = grid;
    s.F1.assign(grid.count(), H2Point{});
    s.h = h;
    std::vector<double> err(grid.count(), 0.0);
    par::for_each(grid.count(), exec, [&](int n) {
        if (!grid.unmasked(n)) return;
        const ComplexQuaternion f1 = cq_mul(cq_bar(g[n]), cq_hat(g[n])) * kI;
        // pattern: i x0 + x2 J + x3 JI with small drift from the unit-norm residual
        H2Point p;
        p.x0 = f1.w.imag();
        p.x2 = f1.y.real();
        p.x3 = -f1.z.real();
        s.F1[n] = p;
        err[n] = std::abs(p.constraint());
    });
    double worst = 0.0;
    for (int n = 0; n < grid.count(); ++n)
        if (grid.unmasked(n)) worst = std::max(worst, err[n]);
    if (worst > 1e-6) throw std::runtime_error("immerse: hyperboloid violation beyond 1e-6");
    s.max_hyperboloid_err = worst;
    return s;
}

std::vector<H2Point> gauss_map(const SpinorComponentField& g1p, par::Exec exec) {
    const PlanarGrid& grid = g1p.grid;
    std::vector<H2Point> out(grid.count());
    par::for_each(grid.count(), exec, [&](int n) {
        if (!grid.unmasked(n)) return;
        out[n] = pi_project(g1p.g1p[n]);
    });
    return out;
}

void gauss_frame(const IdealElement& g1p, ComplexQuaternion& u1, ComplexQuaternion& u2) {
    // dG = beta P + conj(beta) Q with beta = (Q0 dz + tau0/4 dzbar)/sqrt(tau0),
    //   P = (2i/|g|^2) I hat(bar g) J hat(g),  Q = (2i/|g|^2) bar(g) J g I;
    // u1 = (P+Q)/2 and u2 = (P-Q)/(2i) are a real orthonormal basis of T_G H^2.
    const double n2 = ideal_norm(g1p);
    const ComplexQuaternion q = g1p.quaternion();
    const ComplexQuaternion I = ComplexQuaternion::I();
    const ComplexQuaternion J = ComplexQuaternion::J();
    const cplx s(0.0, 2.0 / n2);
    const ComplexQuaternion P = cq_mul(cq_mul(I, cq_mul(cq_hat(cq_bar(q)), J)), cq_hat(q)) * s;
    const ComplexQuaternion Q = cq_mul(cq_mul(cq_bar(q), cq_mul(J, q)), I) * s;
    u1 = (P + Q) * cplx(0.5, 0.0);
    u2 = (P - Q) * (cplx(0.5, 0.0) / kI);
}

GaussQuadratic gauss_quadratic(const SpinorComponentField& g1p, const WeierstrassData& data,
                               par::Exec exec) {
    const PlanarGrid& grid = g1p.grid;
    GaussQuadratic gq;
    gq.grid = grid;
    gq.c_dz2.assign(grid.count(), cplx(kNaN, kNaN));
    gq.c_dzdzb.assign(grid.count(), cplx(kNaN, kNaN));
    gq.c_dzb2.assign(grid.count(), cplx(kNaN, kNaN));

    // embed the Gauss map as quaternion components for differentiation
    std::vector<H2Point> G = gauss_map(g1p, exec);
    std::vector<cplx> gw(grid.count()), gy(grid.count()), gz(grid.count());
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        const ComplexQuaternion q = minkowski_embed(G[n].x0, 0.0, G[n].x2, G[n].x3);
        gw[n] = q.w;
        gy[n] = q.y;
        gz[n] = q.z;
    }

    std::vector<double> err1(grid.count(), 0.0), err2(grid.count(), 0.0), err3(grid.count(), 0.0),
        ferr(grid.count(), 0.0);
    par::for_each(grid.count(), exec, [&](int n) {
        const int ix = grid.ix_of(n), iy = grid.iy_of(n);
        if (!grid.interior(ix, iy)) return;
        auto dquat = [&](int dx, int dy, double h) {
            return ComplexQuaternion(fd::deriv1(gw, grid, ix, iy, dx, dy, h), 0.0,
                                     fd::deriv1(gy, grid, ix, iy, dx, dy, h),
                                     fd::deriv1(gz, grid, ix, iy, dx, dy, h));
        };
        const ComplexQuaternion Gx = dquat(1, 0, grid.hx);
        const ComplexQuaternion Gy = dquat(0, 1, grid.hy);
        const ComplexQuaternion Gz = (Gx - kI * Gy) * cplx(0.5, 0.0);
        const ComplexQuaternion Gzb = (Gx + kI * Gy) * cplx(0.5, 0.0);
        gq.c_dz2[n] = cq_H(Gz, Gz);
        gq.c_dzdzb[n] = 2.0 * cq_H(Gz, Gzb);
        gq.c_dzb2[n] = cq_H(Gzb, Gzb);

        const cplx z = grid.z_of(n);
        const cplx q0 = data.Q0(z);
        const double t = data.tau0(z);
        err1[n] = std::abs(gq.c_dz2[n] - q0);
        err2[n] = std::abs(gq.c_dzdzb[n] - cplx(t / 4.0 + 4.0 * std::norm(q0) / t, 0.0));
        err3[n] = std::abs(gq.c_dzb2[n] - std::conj(q0));

        // frame recovery is skipped at singular points of G
        if (std::abs(q0) >= 1e-8 * t) {
            ComplexQuaternion u1, u2;
            gauss_frame(g1p.g1p[n], u1, u2);
            const double e = std::max({std::abs(cq_H(u1) - cplx(1.0, 0.0)),
                                       std::abs(cq_H(u2) - cplx(1.0, 0.0)), std::abs(cq_H(u1, u2))});
            ferr[n] = e;
        }
    });
    for (int n = 0; n < grid.count(); ++n) {
        gq.max_err_dz2 = std::max(gq.max_err_dz2, err1[n]);
        gq.max_err_dzdzb = std::max(gq.max_err_dzdzb, err2[n]);
        gq.max_err_dzb2 = std::max(gq.max_err_dzb2, err3[n]);
        gq.max_frame_err = std::max(gq.max_frame_err, ferr[n]);
    }
    return gq;
}

namespace {

// 4-dim ambient (x0, x2, x3, h) with metric diag(-1,+1,+1,+1).
using Vec4 = std::array<double, 4>;

double dot4(const Vec4& a, const Vec4& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

// Covector n_d = eps_{d b c e} a^b b^c c^e, index raised with the metric:
// the metric-orthogonal complement of three independent vectors.
Vec4 cross4(const Vec4& a, const Vec4& b, const Vec4& c) {
    auto det3 = [](double m00, double m01, double m02, double m10, double m11, double m12,
                   double m20, double m21, double m22) {
        return m00 * (m11 * m22 - m12 * m21) - m01 * (m10 * m22 - m12 * m20) +
               m02 * (m10 * m21 - m11 * m20);
    };
    Vec4 n;
    // cofactor expansion of det[e; a; b; c] along the first row
    n[0] = det3(a[1], a[2], a[3], b[1], b[2], b[3], c[1], c[2], c[3]);
    n[1] = -det3(a[0], a[2], a[3], b[0], b[2], b[3], c[0], c[2], c[3]);
    n[2] = det3(a[0], a[1], a[3], b[0], b[1], b[3], c[0], c[1], c[3]);
    n[3] = -det3(a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2]);
    // raise index: lower with eta = diag(-1,1,1,1) -> flip sign of time slot
    n[0] = -n[0];
    return n;
}

}  // namespace

void diagnose(SurfaceSample& surface, const ProductStructureField& ps, const WeierstrassData& data,
              par::Exec exec) {
    const PlanarGrid& grid = surface.grid;
    auto& d = surface.diag;
    d.mu_meas.assign(grid.count(), kNaN);
    d.H_meas.assign(grid.count(), kNaN);
    d.nu_meas.assign(grid.count(), kNaN);
    d.alpha.assign(grid.count(), kNaN);
    d.beta.assign(grid.count(), kNaN);
    d.Q0_meas.assign(grid.count(), cplx(kNaN, kNaN));

    // ambient embedding fields
    std::vector<double> X0(grid.count(), kNaN), X2(grid.count(), kNaN), X3(grid.count(), kNaN);
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        X0[n] = surface.F1[n].x0;
        X2[n] = surface.F1[n].x2;
        X3[n] = surface.F1[n].x3;
    }
    const std::vector<double>& Xh = surface.h;

    std::vector<double> eH(grid.count(), 0.0), eNu(grid.count(), 0.0), eMu(grid.count(), 0.0),
        eQ0(grid.count(), 0.0), eConf(grid.count(), 0.0);

    par::for_each(grid.count(), exec, [&](int n) {
        const int ix = grid.ix_of(n), iy = grid.iy_of(n);
        if (!grid.interior(ix, iy)) return;

        auto d1 = [&](const std::vector<double>& f, int dx, int dy, double h) {
            return fd::deriv1(f, grid, ix, iy, dx, dy, h);
        };
        auto d2 = [&](const std::vector<double>& f, int dx, int dy, double h) {
            return fd::deriv2(f, grid, ix, iy, dx, dy, h);
        };
        auto dxy = [&](const std::vector<double>& f) {
            // centered mixed derivative (interior guarantees the corners)
            return (f[grid.index(ix + 1, iy + 1)] - f[grid.index(ix + 1, iy - 1)] -
                    f[grid.index(ix - 1, iy + 1)] + f[grid.index(ix - 1, iy - 1)]) /
                   (4.0 * grid.hx * grid.hy);
        };

        const Vec4 Fx{d1(X0, 1, 0, grid.hx), d1(X2, 1, 0, grid.hx), d1(X3, 1, 0, grid.hx),
                      d1(Xh, 1, 0, grid.hx)};
        const Vec4 Fy{d1(X0, 0, 1, grid.hy), d1(X2, 0, 1, grid.hy), d1(X3, 0, 1, grid.hy),
                      d1(Xh, 0, 1, grid.hy)};
        const Vec4 Fxx{d2(X0, 1, 0, grid.hx), d2(X2, 1, 0, grid.hx), d2(X3, 1, 0, grid.hx),
                       d2(Xh, 1, 0, grid.hx)};
        const Vec4 Fyy{d2(X0, 0, 1, grid.hy), d2(X2, 0, 1, grid.hy), d2(X3, 0, 1, grid.hy),
                       d2(Xh, 0, 1, grid.hy)};
        const Vec4 Fxy{dxy(X0), dxy(X2), dxy(X3), dxy(Xh)};

        const double E = dot4(Fx, Fx), F = dot4(Fx, Fy), G = dot4(Fy, Fy);
        const double mu2 = 0.5 * (E + G);
        const double mu = std::sqrt(std::max(mu2, 0.0));
        d.mu_meas[n] = mu;
        eConf[n] = std::max(std::abs(F), std::abs(E - G)) / mu2;

        // normal within H^2 x R: orthogonal to Fx, Fy and to the position (F1, 0)
        const Vec4 P{surface.F1[n].x0, surface.F1[n].x2, surface.F1[n].x3, 0.0};
        Vec4 N = cross4(Fx, Fy, P);
        const double nn = dot4(N, N);
        double scale = 1.0 / std::sqrt(std::abs(nn));
        if (N[3] * scale < 0.0) scale = -scale;  // angle function positive
        for (double& v : N) v *= scale;
        d.nu_meas[n] = N[3];

        // second fundamental form w.r.t. N; shape operator in the frame
        // (Fx/mu, Fy/mu) of the conformal metric
        const double l = dot4(Fxx, N), m = dot4(Fxy, N), nq = dot4(Fyy, N);
        const double S11 = l / mu2, S12 = m / mu2, S22 = nq / mu2;
        const double H = 0.5 * (S11 + S22);
        d.H_meas[n] = H;
        const double alpha = 0.5 * (S11 - S22);
        const double beta = S12;
        d.alpha[n] = alpha;
        d.beta[n] = beta;

        // recomputed Weierstrass differential from measured quantities
        const cplx hz_meas = 0.5 * (d1(Xh, 1, 0, grid.hx) - kI * d1(Xh, 0, 1, grid.hy));
        const cplx q0_meas = -0.5 * mu2 * cplx(alpha, -beta) - hz_meas * hz_meas;
        d.Q0_meas[n] = q0_meas;

        const cplx z = grid.z_of(n);
        eH[n] = std::abs(H - 0.5);
        eNu[n] = std::abs(N[3] - ps.nu[n]);
        eMu[n] = std::abs(mu2 - (data.tau0(z) + 4.0 * std::norm(ps.hz[n]))) /
                 (data.tau0(z) + 4.0 * std::norm(ps.hz[n]));
        eQ0[n] = std::abs(q0_meas - data.Q0(z)) / std::max(1.0, std::abs(data.Q0(z)));
    });

    for (int n = 0; n < grid.count(); ++n) {
        d.max_H_err = std::max(d.max_H_err, eH[n]);
        d.max_nu_err = std::max(d.max_nu_err, eNu[n]);
        d.max_mu_rel_err = std::max(d.max_mu_rel_err, eMu[n]);
        d.max_Q0_rel_err = std::max(d.max_Q0_rel_err, eQ0[n]);
        d.max_conformality = std::max(d.max_conformality, eConf[n]);
    }
}

std::vector<double> parallel_section_residual(const SpinorComponentField& g1p,
                                              const WeierstrassData& data, par::Exec exec) {
    const PlanarGrid& grid = g1p.grid;
    const G1Coeffs c = make_coeffs(data);
    std::vector<double> out(grid.count(), kNaN);

    // component fields for differentiation
    std::vector<cplx> fa(grid.count()), fb(grid.count());
    for (int n = 0; n < grid.count(); ++n) {
        fa[n] = g1p.g1p[n].a;
        fb[n] = g1p.g1p[n].b;
    }
    par::for_each(grid.count(), exec, [&](int n) {
        const int ix = grid.ix_of(n), iy = grid.iy_of(n);
        if (!grid.interior(ix, iy)) return;
        const IdealElement g = g1p.g1p[n];
        const double n2 = ideal_norm(g);
        const cplx alpha = c.alpha(grid.z_of(n));
        double worst = 0.0;
        // direction dx: dz = 1; direction dy: dz = i; the connection scalar
        // enters conjugated on the ideal (I-complex convention)
        const IdealElement dgx(fd::dx(fa, grid, ix, iy), fd::dx(fb, grid, ix, iy));
        const IdealElement dgy(fd::dy(fa, grid, ix, iy), fd::dy(fb, grid, ix, iy));
        worst = std::max(worst, std::abs(-std::conj(alpha) + ideal_inner(dgx, g) / n2));
        worst = std::max(worst, std::abs(-std::conj(alpha * kI) + ideal_inner(dgy, g) / n2));
        out[n] = worst;
    });
    return out;
}

}  // namespace spinform
