#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "spinform/grid.hpp"
#include "spinform/parallel.hpp"
#include "spinform/weierstrass.hpp"

namespace spinform {

// Right-hand side of a first-order system written as a 1-form: given the base
// point z, the current state and a complex direction increment, writes the
// state increment (the form applied to the direction) into `out`. The systems
// are real-linear in the direction, not complex-linear, so `dir` and its
// conjugate both enter.
using FlowRhs = std::function<void(std::complex<double> z, std::span<const double> state,
                                   std::complex<double> dir, std::span<double> out)>;

struct Edge {
    int from = -1, to = -1;
};

// Spanning plan of the unmasked grid graph: a serial trunk (the seed column),
// independent branch chains (the row sweeps, safe to run concurrently), and a
// serial tail for nodes the column/row pattern could not reach.
struct PathPlan {
    int seed = -1;
    std::vector<Edge> trunk;
    std::vector<std::vector<Edge>> branches;
    std::vector<Edge> tail;

    // Column through the node nearest z0, then row sweeps.
    static PathPlan column_rows(const PlanarGrid& grid, std::complex<double> z0);
    // Transposed variant for path-independence checks.
    static PathPlan row_columns(const PlanarGrid& grid, std::complex<double> z0);

    // Every unmasked node is reached exactly once and sources are computed
    // before they are used; throws otherwise.
    void validate(const PlanarGrid& grid) const;
};

struct FlowBlowup : std::runtime_error {
    int node;
    FlowBlowup(int node_, const std::string& what) : std::runtime_error(what), node(node_) {}
};

// State field on the grid, node-major; masked nodes hold NaN.
struct FlowField {
    PlanarGrid grid;
    int dim = 0;
    std::vector<double> values;

    std::span<const double> at(int node) const {
        return {values.data() + std::size_t(node) * dim, std::size_t(dim)};
    }
    std::span<double> at(int node) {
        return {values.data() + std::size_t(node) * dim, std::size_t(dim)};
    }
};

// Classical RK4 along the straight segment z_from -> z_to, `substeps` steps.
void rk4_edge(const FlowRhs& rhs, std::complex<double> z_from, std::complex<double> z_to,
              std::span<double> state, int substeps);

// Integrate the flow over the plan starting from `init` at the plan seed.
// Deterministic given the plan; parallel execution runs branch chains
// concurrently and is bit-identical to serial.
FlowField integrate_flow(const FlowRhs& rhs, const PlanarGrid& grid, const PathPlan& plan,
                         std::span<const double> init, par::Exec exec = par::Exec::openmp,
                         int substeps = 4);

// Per-plaquette norm of (loop transport - identity), indexed by the lower-left
// node; NaN where any plaquette corner is masked.
std::vector<double> holonomy_residual(const FlowRhs& rhs, const FlowField& field,
                                      par::Exec exec = par::Exec::openmp, int substeps = 4);

// h_z system:
//   (h_z)_z    = (log tau0)_z h_z - Q0 sqrt((tau0+4|h_z|^2)/tau0)
//   (h_z)_zbar = (1/4) sqrt(tau0 (tau0+4|h_z|^2))
FlowRhs hz_rhs(const WeierstrassData& data);

struct HzField {
    PlanarGrid grid;
    std::vector<std::complex<double>> hz;
    double mixed_partial_residual = 0.0;  // max over interior nodes
};

HzField solve_hz(const WeierstrassData& data, const PlanarGrid& grid, const PathPlan& plan,
                 std::complex<double> theta0, std::complex<double> z0,
                 par::Exec exec = par::Exec::openmp, bool strict = false, int substeps = 4);

struct HeightField {
    PlanarGrid grid;
    std::vector<double> h;
    double imag_drift = 0.0;      // max |Im| accumulated by the line integral
    double max_loop_residual = 0.0;  // max plaquette circulation of the 1-form
};

// Integrate dh = h_z dz + conj(h_z) dzbar along the plan (trapezoid per edge).
HeightField integrate_height(const HzField& hz, const PathPlan& plan, double h0);

}  // namespace spinform
