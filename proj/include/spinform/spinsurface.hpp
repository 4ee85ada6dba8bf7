#pragma once

#include <string>
#include <vector>

#include "spinform/cquat.hpp"
#include "spinform/fieldsolve.hpp"
#include "spinform/grid.hpp"
#include "spinform/weierstrass.hpp"

namespace spinform {

// Spinor component g1' on the grid, solving
//   dg1' = (log sqrt tau0)_z dz g1' + (1/sqrt tau0)(Q0 dz + (tau0/4) dzbar) J hat(g1') I,
// together with provenance of the run.
struct SpinorComponentField {
    PlanarGrid grid;
    std::vector<IdealElement> g1p;
    std::string data_name;
    std::complex<double> z0{};
    double max_norm_drift = 0.0;  // max | |g1'|^2 - sqrt(tau0) |
};

// mu = sqrt(tau0 + 4|h_z|^2), nu = sqrt(tau0)/mu; mu*nu = sqrt(tau0) holds in
// exact arithmetic by construction.
struct ProductStructureField {
    PlanarGrid grid;
    std::vector<std::complex<double>> hz;
    std::vector<double> mu, nu;
};

struct SurfaceDiagnostics {
    std::vector<double> mu_meas, H_meas, nu_meas, alpha, beta;
    std::vector<std::complex<double>> Q0_meas;
    double max_H_err = 0.0;           // |H_meas - 1/2| over interior
    double max_nu_err = 0.0;          // vs product-structure nu
    double max_mu_rel_err = 0.0;      // mu_meas^2 vs tau0 + 4|h_z|^2, relative
    double max_Q0_rel_err = 0.0;      // recomputed Q0 vs input, relative
    double max_conformality = 0.0;    // |<Fx,Fy>| / mu^2 and |<Fx,Fx>-<Fy,Fy>| / mu^2
};

// Immersion F = (F1, h) in H^2 x R with per-node diagnostics.
struct SurfaceSample {
    PlanarGrid grid;
    std::vector<H2Point> F1;
    std::vector<double> h;
    double max_hyperboloid_err = 0.0;  // |<F1,F1>+1|
    SurfaceDiagnostics diag;
};

// Flow right-hand side for g1'; state = (Re a, Im a, Re b, Im b).
FlowRhs g1_flow_rhs(const WeierstrassData& data);

// Integrate the g1' flow; requires ideal_norm(init) = sqrt(tau0(z0)) to 1e-10.
SpinorComponentField flow_g1(const WeierstrassData& data, const PlanarGrid& grid,
                             const PathPlan& plan, const IdealElement& init,
                             par::Exec exec = par::Exec::openmp, int substeps = 4);

// Default initial spinor: b = 0, a = tau0(z0)^{1/4} scaled by phase_sign.
IdealElement default_g1_init(const WeierstrassData& data, std::complex<double> z0,
                             int phase_sign = 1);

ProductStructureField product_structure(const WeierstrassData& data, const HzField& hz);

// g2' = -(1/nu) I hat(g1') I + (2i/(mu nu)) h_z J g1'; lands in (1/2)(1-iI)H^C.
std::vector<ComplexQuaternion> reconstruct_g2(const SpinorComponentField& g1p,
                                              const ProductStructureField& ps,
                                              par::Exec exec = par::Exec::openmp);

// g = (g1' + g2')/sqrt(mu); checks |H(g,g) - 1| <= tol at every node.
std::vector<ComplexQuaternion> assemble_spinor(const SpinorComponentField& g1p,
                                               const std::vector<ComplexQuaternion>& g2p,
                                               const ProductStructureField& ps,
                                               par::Exec exec = par::Exec::openmp,
                                               double tol = 1e-6);

// F1 = i bar(g) hat(g) decoded on the hyperboloid, paired with the height.
SurfaceSample immerse(const PlanarGrid& grid, const std::vector<ComplexQuaternion>& g,
                      const std::vector<double>& h, par::Exec exec = par::Exec::openmp);

std::vector<H2Point> gauss_map(const SpinorComponentField& g1p, par::Exec exec = par::Exec::openmp);

// Orthonormal frame of T_G H^2 carried by g1' (the dz / dzbar legs of dG).
void gauss_frame(const IdealElement& g1p, ComplexQuaternion& u1, ComplexQuaternion& u2);

struct GaussQuadratic {
    PlanarGrid grid;
    // measured coefficients of H(dG,dG) = c_dz2 dz^2 + c_dzdzb dz dzbar + c_dzb2 dzbar^2
    std::vector<std::complex<double>> c_dz2, c_dzdzb, c_dzb2;
    double max_err_dz2 = 0.0, max_err_dzdzb = 0.0, max_err_dzb2 = 0.0;  // vs closed form
    double max_frame_err = 0.0;  // orthonormality of (u1,u2) where Q0 is regular
};

GaussQuadratic gauss_quadratic(const SpinorComponentField& g1p, const WeierstrassData& data,
                               par::Exec exec = par::Exec::openmp);

// Finite-difference first/second fundamental forms of the sample in the
// ambient R^{1,3} x R; fills SurfaceSample::diag (boundary ring excluded).
void diagnose(SurfaceSample& surface, const ProductStructureField& ps, const WeierstrassData& data,
              par::Exec exec = par::Exec::openmp);

// Pullback of the bundle connection by z -> (z, g1'(z)):
//   sigma* omega = -(log sqrt tau0)_z dz + <d g1', g1'> / |g1'|^2,
// evaluated on both grid directions with centered differences; per-node max.
std::vector<double> parallel_section_residual(const SpinorComponentField& g1p,
                                              const WeierstrassData& data,
                                              par::Exec exec = par::Exec::openmp);

}  // namespace spinform
