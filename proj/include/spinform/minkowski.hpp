#pragma once

#include <array>
#include <vector>

#include "spinform/cquat.hpp"
#include "spinform/fieldsolve.hpp"
#include "spinform/spinsurface.hpp"

namespace spinform {

// Spin(1,2) coefficient pattern: real on 1 and I, purely imaginary on J and K.
double spin12_pattern_drift(const ComplexQuaternion& v);

// Scaled frame v' = sqrt(mu) v solving
//   dv' = { (log sqrt tau0)_z dz + (i/sqrt tau0)(Q0 dz + (tau0/4) dzbar) J } v',
// with H(v',v') = sqrt(tau0) along the flow (here tau0 = mu^2).
struct SpinFrameField {
    PlanarGrid grid;
    std::vector<ComplexQuaternion> vprime;
    double max_norm_drift = 0.0;    // | H(v',v') - sqrt(tau0) |
    double max_pattern_drift = 0.0;
};

FlowRhs v_flow_rhs(const WeierstrassData& data);

ComplexQuaternion default_v_init(const WeierstrassData& data, std::complex<double> z0,
                                 int phase_sign = 1);

SpinFrameField flow_v(const WeierstrassData& data, const PlanarGrid& grid, const PathPlan& plan,
                      const ComplexQuaternion& init, par::Exec exec = par::Exec::openmp,
                      int substeps = 4);

// Gauss map G = i bar(v) hat(v) of the normalized frame.
std::vector<H2Point> mink_gauss(const SpinFrameField& v, par::Exec exec = par::Exec::openmp);

// Spacelike immersion in R^{1,2}, coordinates (x0, x2, x3) with metric (-,+,+).
struct MinkSurface {
    PlanarGrid grid;
    std::vector<std::array<double, 3>> F;
    double max_closedness = 0.0;  // plaquette circulation of the 1-form xi
    // finite-difference diagnostics (interior nodes)
    std::vector<double> H_meas, mu_meas;
    double max_H_err = 0.0;       // |H_meas - 1/2|
    double max_metric_rel_err = 0.0;  // induced metric vs mu^2 (dx^2+dy^2)
};

// Integrate the 1-form xi(dx) = mu bar(v) J hat(v), xi(dy) = mu bar(v) JI hat(v)
// from F0 at the plan seed (trapezoid per edge); mu is already folded into v'.
MinkSurface mink_immerse(const SpinFrameField& v, const PathPlan& plan,
                         std::array<double, 3> F0 = {0.0, 0.0, 0.0},
                         par::Exec exec = par::Exec::openmp);

// Fill H_meas / mu_meas of the surface.
void mink_diagnose(MinkSurface& surface, const WeierstrassData& data,
                   par::Exec exec = par::Exec::openmp);

// g1' := (1/2)(1+iI) v', node-wise.
SpinorComponentField correspond_to_h2r(const SpinFrameField& v, const WeierstrassData& data);

// Unique pattern-constrained preimage of g1' under the correspondence.
SpinFrameField correspond_from_g1(const SpinorComponentField& g1p, const WeierstrassData& data);

// Algebraic residual of the claim that the correspondence intertwines the two
// flows: max over unmasked nodes and both grid directions of
//   | proj_+ (rhs_v(v')) - rhs_g1(proj_+ v') |.
double correspondence_flow_residual(const SpinFrameField& v, const WeierstrassData& data);
// Same in the other direction, for a g1' field and its preimage.
double correspondence_flow_residual(const SpinorComponentField& g1p, const WeierstrassData& data);

}  // namespace spinform
