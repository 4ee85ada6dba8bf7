// Timing comparison of the serial reference kernels against their OpenMP
// twins. Each kernel pair produces identical output; only wall time differs.

#include <chrono>
#include <cstdio>
#include <functional>

#include "spinform/fieldsolve.hpp"
#include "spinform/minkowski.hpp"
#include "spinform/spinsurface.hpp"
#include "spinform/weierstrass.hpp"

using namespace spinform;
using cplx = std::complex<double>;

namespace {

double time_s(const std::function<void()>& f, int reps = 3) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best,
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.4fs   openmp %8.4fs   speedup %.2fx\n", name, serial, parallel,
                serial / parallel);
}

}  // namespace

int main() {
    std::printf("spinform kernel benchmark (%d worker(s) available)\n\n", par::max_threads());

    const WeierstrassData d = family_constant(0.0);
    const PlanarGrid grid = PlanarGrid::disk(0.5, 256);
    PathPlan plan = PathPlan::column_rows(grid, 0.0);

    // residual evaluation (tabulated: exercises the stencil path)
    const WeierstrassData tab =
        tabulate(family_rotational(), PlanarGrid::rect({-0.6, -0.6}, 1.2, 1.2, 257, 257));
    report("weierstrass residuals",
           time_s([&] { residual_vortex(tab, *tab.table_grid, par::Exec::serial); }),
           time_s([&] { residual_vortex(tab, *tab.table_grid, par::Exec::openmp); }));

    // flow integration: serial trunk, concurrent row sweeps
    report("g1' flow",
           time_s([&] { flow_g1(d, grid, plan, default_g1_init(d, 0.0), par::Exec::serial); }),
           time_s([&] { flow_g1(d, grid, plan, default_g1_init(d, 0.0), par::Exec::openmp); }));

    const SpinorComponentField g1 = flow_g1(d, grid, plan, default_g1_init(d, 0.0));
    const HzField hz = solve_hz(d, grid, plan, {0.3, 0.2}, 0.0);
    const ProductStructureField ps = product_structure(d, hz);

    report("g2' reconstruction",
           time_s([&] { reconstruct_g2(g1, ps, par::Exec::serial); }),
           time_s([&] { reconstruct_g2(g1, ps, par::Exec::openmp); }));

    const auto g2p = reconstruct_g2(g1, ps);
    report("spinor assembly",
           time_s([&] { assemble_spinor(g1, g2p, ps, par::Exec::serial); }),
           time_s([&] { assemble_spinor(g1, g2p, ps, par::Exec::openmp); }));

    report("gauss map",
           time_s([&] { gauss_map(g1, par::Exec::serial); }),
           time_s([&] { gauss_map(g1, par::Exec::openmp); }));

    report("gauss quadratic form",
           time_s([&] { gauss_quadratic(g1, d, par::Exec::serial); }),
           time_s([&] { gauss_quadratic(g1, d, par::Exec::openmp); }));

    const auto g = assemble_spinor(g1, g2p, ps);
    const HeightField h = integrate_height(hz, plan, 0.0);
    SurfaceSample s = immerse(grid, g, h.h);
    report("surface diagnostics",
           time_s([&] { diagnose(s, ps, d, par::Exec::serial); }),
           time_s([&] { diagnose(s, ps, d, par::Exec::openmp); }));

    report("plaquette holonomy", time_s([&] {
               FlowField ff;
               ff.grid = grid;
               ff.dim = 4;
               ff.values.resize(std::size_t(grid.count()) * 4);
               for (int n = 0; n < grid.count(); ++n) {
                   auto st = ff.at(n);
                   st[0] = g1.g1p[n].a.real();
                   st[1] = g1.g1p[n].a.imag();
                   st[2] = g1.g1p[n].b.real();
                   st[3] = g1.g1p[n].b.imag();
               }
               holonomy_residual(g1_flow_rhs(d), ff, par::Exec::serial);
           }),
           time_s([&] {
               FlowField ff;
               ff.grid = grid;
               ff.dim = 4;
               ff.values.resize(std::size_t(grid.count()) * 4);
               for (int n = 0; n < grid.count(); ++n) {
                   auto st = ff.at(n);
                   st[0] = g1.g1p[n].a.real();
                   st[1] = g1.g1p[n].a.imag();
                   st[2] = g1.g1p[n].b.real();
                   st[3] = g1.g1p[n].b.imag();
               }
               holonomy_residual(g1_flow_rhs(d), ff, par::Exec::openmp);
           }));

    return 0;
}
