#include "spinform/fieldsolve.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "spinform/stencil.hpp"

namespace spinform {

using cplx = std::complex<double>;

namespace {

constexpr double kBlowupGuard = 1e12;
constexpr int kMaxDim = 8;

double state_norm(std::span<const double> s) {
    double n = 0.0;
    for (double v : s) n += v * v;
    return std::sqrt(n);
}

}  // namespace

void rk4_edge(const FlowRhs& rhs, cplx z_from, cplx z_to, std::span<double> state, int substeps) {
    const int dim = int(state.size());
    std::array<double, kMaxDim> k1, k2, k3, k4, tmp;
    const cplx dz = (z_to - z_from) / double(substeps);
    for (int s = 0; s < substeps; ++s) {
        const cplx z0 = z_from + double(s) * dz;
        const cplx zh = z0 + 0.5 * dz;
        const cplx z1 = z0 + dz;
        auto span = [&](std::array<double, kMaxDim>& a) { return std::span<double>(a.data(), dim); };
        rhs(z0, state, dz, span(k1));
        for (int i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * k1[i];
        rhs(zh, span(tmp), dz, span(k2));
        for (int i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * k2[i];
        rhs(zh, span(tmp), dz, span(k3));
        for (int i = 0; i < dim; ++i) tmp[i] = state[i] + k3[i];
        rhs(z1, span(tmp), dz, span(k4));
        for (int i = 0; i < dim; ++i)
            state[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
    }
}

namespace {

void walk_chain(const FlowRhs& rhs, const PlanarGrid& grid, const std::vector<Edge>& chain,
                FlowField& field, int substeps) {
    const int dim = field.dim;
    std::array<double, kMaxDim> buf;
    for (const Edge& e : chain) {
        std::span<const double> src = field.at(e.from);
        for (int i = 0; i < dim; ++i) buf[i] = src[i];
        std::span<double> st(buf.data(), dim);
        rk4_edge(rhs, grid.z_of(e.from), grid.z_of(e.to), st, substeps);
        const double n = state_norm(st);
        if (!std::isfinite(n) || n > kBlowupGuard)
            throw FlowBlowup(e.to, "integrate_flow: state blow-up at node " + std::to_string(e.to));
        std::span<double> dst = field.at(e.to);
        for (int i = 0; i < dim; ++i) dst[i] = buf[i];
    }
}

}  // namespace

FlowField integrate_flow(const FlowRhs& rhs, const PlanarGrid& grid, const PathPlan& plan,
                         std::span<const double> init, par::Exec exec, int substeps) {
    const int dim = int(init.size());
    if (dim <= 0 || dim > kMaxDim) throw std::invalid_argument("integrate_flow: bad state dimension");
    FlowField field;
    field.grid = grid;
    field.dim = dim;
    field.values.assign(std::size_t(grid.count()) * dim, std::numeric_limits<double>::quiet_NaN());
    {
        std::span<double> s = field.at(plan.seed);
        for (int i = 0; i < dim; ++i) s[i] = init[i];
    }
    walk_chain(rhs, grid, plan.trunk, field, substeps);

    // branch chains are independent given the trunk values
    std::exception_ptr err;
    par::for_each(int(plan.branches.size()), exec, [&](int bi) {
        try {
            walk_chain(rhs, grid, plan.branches[bi], field, substeps);
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    });
    if (err) std::rethrow_exception(err);

    walk_chain(rhs, grid, plan.tail, field, substeps);
    return field;
}

std::vector<double> holonomy_residual(const FlowRhs& rhs, const FlowField& field, par::Exec exec,
                                      int substeps) {
    const PlanarGrid& g = field.grid;
    const int dim = field.dim;
    std::vector<double> out(g.count(), std::numeric_limits<double>::quiet_NaN());
    par::for_each(g.count(), exec, [&](int node) {
        const int ix = g.ix_of(node), iy = g.iy_of(node);
        if (ix + 1 >= g.nx || iy + 1 >= g.ny) return;
        if (!g.unmasked(ix, iy) || !g.unmasked(ix + 1, iy) || !g.unmasked(ix, iy + 1) ||
            !g.unmasked(ix + 1, iy + 1))
            return;
        const cplx c00 = g.z(ix, iy), c10 = g.z(ix + 1, iy), c11 = g.z(ix + 1, iy + 1),
                   c01 = g.z(ix, iy + 1);
        std::array<double, kMaxDim> buf;
        std::span<const double> start = field.at(node);
        for (int i = 0; i < dim; ++i) buf[i] = start[i];
        std::span<double> st(buf.data(), dim);
        rk4_edge(rhs, c00, c10, st, substeps);
        rk4_edge(rhs, c10, c11, st, substeps);
        rk4_edge(rhs, c11, c01, st, substeps);
        rk4_edge(rhs, c01, c00, st, substeps);
        double r = 0.0;
        for (int i = 0; i < dim; ++i) r += (buf[i] - start[i]) * (buf[i] - start[i]);
        out[node] = std::sqrt(r);
    });
    return out;
}

// --- plans ---------------------------------------------------------------

namespace {

// Append the straight walk from (ix,iy) along (dx,dy) while unmasked.
void walk(const PlanarGrid& g, int ix, int iy, int dx, int dy, std::vector<Edge>& edges) {
    while (g.unmasked(ix + dx, iy + dy)) {
        edges.push_back({g.index(ix, iy), g.index(ix + dx, iy + dy)});
        ix += dx;
        iy += dy;
    }
}

// Attach any unreached unmasked nodes by BFS over grid edges.
void complete_by_bfs(const PlanarGrid& g, PathPlan& plan) {
    std::vector<char> visited(g.count(), 0);
    visited[plan.seed] = 1;
    auto mark = [&](const std::vector<Edge>& es) {
        for (const Edge& e : es) visited[e.to] = 1;
    };
    mark(plan.trunk);
    for (const auto& b : plan.branches) mark(b);

    std::vector<int> frontier;
    for (int n = 0; n < g.count(); ++n)
        if (visited[n]) frontier.push_back(n);
    const int dxs[4] = {1, -1, 0, 0}, dys[4] = {0, 0, 1, -1};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int n : frontier) {
            const int ix = g.ix_of(n), iy = g.iy_of(n);
            for (int k = 0; k < 4; ++k) {
                const int jx = ix + dxs[k], jy = iy + dys[k];
                if (!g.unmasked(jx, jy)) continue;
                const int m = g.index(jx, jy);
                if (visited[m]) continue;
                visited[m] = 1;
                plan.tail.push_back({n, m});
                next.push_back(m);
            }
        }
        frontier.swap(next);
    }
}

}  // namespace

PathPlan PathPlan::column_rows(const PlanarGrid& grid, cplx z0) {
    PathPlan plan;
    plan.seed = grid.nearest_unmasked(z0);
    const int ix0 = grid.ix_of(plan.seed), iy0 = grid.iy_of(plan.seed);
    walk(grid, ix0, iy0, 0, 1, plan.trunk);
    walk(grid, ix0, iy0, 0, -1, plan.trunk);
    for (int iy = 0; iy < grid.ny; ++iy) {
        if (!grid.unmasked(ix0, iy)) continue;
        std::vector<Edge> right, left;
        walk(grid, ix0, iy, 1, 0, right);
        walk(grid, ix0, iy, -1, 0, left);
        if (!right.empty()) plan.branches.push_back(std::move(right));
        if (!left.empty()) plan.branches.push_back(std::move(left));
    }
    complete_by_bfs(grid, plan);
    return plan;
}

PathPlan PathPlan::row_columns(const PlanarGrid& grid, cplx z0) {
    PathPlan plan;
    plan.seed = grid.nearest_unmasked(z0);
    const int ix0 = grid.ix_of(plan.seed), iy0 = grid.iy_of(plan.seed);
    walk(grid, ix0, iy0, 1, 0, plan.trunk);
    walk(grid, ix0, iy0, -1, 0, plan.trunk);
    for (int ix = 0; ix < grid.nx; ++ix) {
        if (!grid.unmasked(ix, iy0)) continue;
        std::vector<Edge> up, down;
        walk(grid, ix, iy0, 0, 1, up);
        walk(grid, ix, iy0, 0, -1, down);
        if (!up.empty()) plan.branches.push_back(std::move(up));
        if (!down.empty()) plan.branches.push_back(std::move(down));
    }
    complete_by_bfs(grid, plan);
    return plan;
}

void PathPlan::validate(const PlanarGrid& grid) const {
    std::vector<int> seen(grid.count(), 0);
    if (seed < 0 || seed >= grid.count() || !grid.unmasked(seed))
        throw std::runtime_error("PathPlan: bad seed");
    seen[seed] = 1;
    auto check_chain = [&](const std::vector<Edge>& es, bool sources_fixed) {
        std::vector<int> local;
        for (const Edge& e : es) {
            if (!grid.unmasked(e.from) || !grid.unmasked(e.to))
                throw std::runtime_error("PathPlan: edge touches a masked node");
            if (!seen[e.from] && sources_fixed)
                throw std::runtime_error("PathPlan: edge source not yet computed");
            if (seen[e.to]) throw std::runtime_error("PathPlan: node reached twice");
            seen[e.to] = 1;
            local.push_back(e.to);
        }
        return local;
    };
    check_chain(trunk, true);
    // branches may only consume trunk/seed values or values from their own chain
    for (const auto& b : branches) check_chain(b, true);
    check_chain(tail, true);
    for (int n = 0; n < grid.count(); ++n)
        if (grid.unmasked(n) && !seen[n]) throw std::runtime_error("PathPlan: node not covered");
}

// --- h_z system ----------------------------------------------------------

FlowRhs hz_rhs(const WeierstrassData& data) {
    // coefficient evaluation: closures when analytic, table sampling otherwise
    if (data.analytic() && data.has_derivative_closures()) {
        auto tau0_fn = data.tau0_fn;
        auto q0_fn = data.Q0_fn;
        auto dlog_fn = data.dlog_sqrt_tau0_dz_fn;
        return [=](cplx z, std::span<const double> s, cplx dir, std::span<double> out) {
            const cplx hz(s[0], s[1]);
            const double t = tau0_fn(z);
            const cplx q = q0_fn(z);
            const cplx dlogtau = 2.0 * dlog_fn(z);
            const double m2 = t + 4.0 * std::norm(hz);
            const cplx ddz = dlogtau * hz - q * std::sqrt(m2 / t);
            const cplx ddzbar = 0.25 * std::sqrt(t * m2);
            const cplx d = ddz * dir + ddzbar * std::conj(dir);
            out[0] = d.real();
            out[1] = d.imag();
        };
    }
    if (!data.table_grid) throw std::invalid_argument("hz_rhs: data has neither closures nor tables");
    // precompute (log tau0)_z on the table grid once
    const PlanarGrid tg = *data.table_grid;
    auto logt = std::make_shared<std::vector<double>>(tg.count());
    for (int n = 0; n < tg.count(); ++n) (*logt)[n] = std::log(data.tau0_table[n]);
    auto dlog = std::make_shared<std::vector<cplx>>(tg.count());
    for (int iy = 0; iy < tg.ny; ++iy)
        for (int ix = 0; ix < tg.nx; ++ix) {
            const cplx i(0.0, 1.0);
            (*dlog)[tg.index(ix, iy)] =
                0.5 * (fd::dx(*logt, tg, ix, iy) - i * fd::dy(*logt, tg, ix, iy));
        }
    auto q0 = std::make_shared<std::vector<cplx>>(data.Q0_table);
    auto tau = std::make_shared<std::vector<double>>(data.tau0_table);
    return [tg, dlog, q0, tau](cplx z, std::span<const double> s, cplx dir, std::span<double> out) {
        const cplx hz(s[0], s[1]);
        const double t = fd::bilinear(*tau, tg, z);
        const cplx q = fd::bilinear(*q0, tg, z);
        const cplx dlogtau = fd::bilinear(*dlog, tg, z);
        const double m2 = t + 4.0 * std::norm(hz);
        const cplx ddz = dlogtau * hz - q * std::sqrt(m2 / t);
        const cplx ddzbar = 0.25 * std::sqrt(t * m2);
        const cplx d = ddz * dir + ddzbar * std::conj(dir);
        out[0] = d.real();
        out[1] = d.imag();
    };
}

HzField solve_hz(const WeierstrassData& data, const PlanarGrid& grid, const PathPlan& plan,
                 cplx theta0, cplx z0, par::Exec exec, bool strict, int substeps) {
    (void)z0;  // the plan seed realizes z0; kept for interface clarity
    if (strict) {
        const double thr = compatibility_threshold(data, grid);
        const double rh = max_residual(residual_holomorphic(data, grid, exec), grid);
        const double rv = max_residual(residual_vortex(data, grid, exec), grid);
        if (rh > thr || rv > thr)
            throw std::runtime_error("solve_hz: incompatible Weierstrass data in strict mode");
    }
    const FlowRhs rhs = hz_rhs(data);
    const double init[2] = {theta0.real(), theta0.imag()};
    FlowField f = integrate_flow(rhs, grid, plan, std::span<const double>(init, 2), exec, substeps);

    HzField out;
    out.grid = grid;
    out.hz.assign(grid.count(), cplx(std::numeric_limits<double>::quiet_NaN(), 0.0));
    for (int n = 0; n < grid.count(); ++n)
        if (grid.unmasked(n)) out.hz[n] = cplx(f.at(n)[0], f.at(n)[1]);

    // mixed-partial consistency: d_zbar(RHS_z) - d_z(RHS_zbar) on the solved field
    std::vector<cplx> rz(grid.count(), cplx(0.0, 0.0)), rzb(grid.count(), cplx(0.0, 0.0));
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        double d1[2], d2[2];
        const double st[2] = {out.hz[n].real(), out.hz[n].imag()};
        rhs(grid.z_of(n), std::span<const double>(st, 2), cplx(1.0, 0.0), std::span<double>(d1, 2));
        rhs(grid.z_of(n), std::span<const double>(st, 2), cplx(0.0, 1.0), std::span<double>(d2, 2));
        // from the dx and dy values recover the dz and dzbar coefficient parts
        const cplx fx(d1[0], d1[1]), fy(d2[0], d2[1]);
        const cplx i(0.0, 1.0);
        rz[n] = 0.5 * (fx - i * fy);
        rzb[n] = 0.5 * (fx + i * fy);
    }
    double worst = 0.0;
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix) {
            if (!grid.interior(ix, iy)) continue;
            const cplx r = fd::dzbar(rz, grid, ix, iy) - fd::dz(rzb, grid, ix, iy);
            worst = std::max(worst, std::abs(r));
        }
    out.mixed_partial_residual = worst;
    return out;
}

HeightField integrate_height(const HzField& hzf, const PathPlan& plan, double h0) {
    const PlanarGrid& g = hzf.grid;
    HeightField out;
    out.grid = g;
    out.h.assign(g.count(), std::numeric_limits<double>::quiet_NaN());
    std::vector<cplx> acc(g.count(), cplx(0.0, 0.0));
    acc[plan.seed] = cplx(h0, 0.0);
    out.h[plan.seed] = h0;
    double drift = 0.0;
    auto run = [&](const std::vector<Edge>& es) {
        for (const Edge& e : es) {
            const cplx dz = g.z_of(e.to) - g.z_of(e.from);
            const cplx favg = 0.5 * (hzf.hz[e.from] + hzf.hz[e.to]);
            const cplx inc = favg * dz + std::conj(favg) * std::conj(dz);
            acc[e.to] = acc[e.from] + inc;
            drift = std::max(drift, std::abs(acc[e.to].imag()));
            out.h[e.to] = acc[e.to].real();
        }
    };
    run(plan.trunk);
    for (const auto& b : plan.branches) run(b);
    run(plan.tail);
    if (drift > 1e-6) throw std::runtime_error("integrate_height: imaginary drift exceeds 1e-6");
    out.imag_drift = drift;

    // closedness: plaquette circulation of h_z dz + conj dzbar (trapezoid)
    double loop = 0.0;
    for (int iy = 0; iy + 1 < g.ny; ++iy)
        for (int ix = 0; ix + 1 < g.nx; ++ix) {
            if (!g.unmasked(ix, iy) || !g.unmasked(ix + 1, iy) || !g.unmasked(ix, iy + 1) ||
                !g.unmasked(ix + 1, iy + 1))
                continue;
            const int n00 = g.index(ix, iy), n10 = g.index(ix + 1, iy), n11 = g.index(ix + 1, iy + 1),
                      n01 = g.index(ix, iy + 1);
            auto seg = [&](int a, int b) {
                const cplx dz = g.z_of(b) - g.z_of(a);
                const cplx favg = 0.5 * (hzf.hz[a] + hzf.hz[b]);
                return favg * dz + std::conj(favg) * std::conj(dz);
            };
            const cplx c = seg(n00, n10) + seg(n10, n11) + seg(n11, n01) + seg(n01, n00);
            loop = std::max(loop, std::abs(c));
        }
    out.max_loop_residual = loop;
    return out;
}

}  // namespace spinform
