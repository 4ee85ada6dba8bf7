#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "spinform/clifford.hpp"

namespace spinform {

// Pointwise data for the fundamental equations of an immersion into a product
// of space forms, everything expressed in orthonormal frames {e_j} of TM and
// {n_r} of E. Layouts are row-major:
//   B[(i*p+j)*q+r]        = <B(e_i,e_j), n_r>
//   f[i*p+j]              = <f(e_j), e_i>          (and so on for h, s, t)
//   nablaB[((k*p+i)*p+j)*q+r] = <(nabla_k B)(e_i,e_j), n_r>
//   RT[((x*p+y)*p+z)*p+w] = <R^T(e_x,e_y)e_z, e_w>
//   RN[((x*p+y)*q+r)*q+s] = <R^N(e_x,e_y)n_r, n_s>
struct PointData {
    int p = 0, q = 0;
    double c1 = 1.0, c2 = 1.0;
    std::vector<double> B;
    std::vector<double> f, h, s, t;          // h is q x p, s is p x q
    std::vector<double> nablaB;              // p x p x p x q
    std::vector<double> nablaf;              // p x (p x p)
    std::vector<double> nablah;              // p x (q x p)
    std::vector<double> nablas;              // p x (p x q)
    std::vector<double> nablat;              // p x (q x q)
    std::vector<double> RT, RN;

    // Throws on shape mismatch or violated structural invariants (symmetry of
    // B, antisymmetry of RT/RN, P^2 = id blocks, P symmetric).
    void validate(double tol = 1e-9) const;
};

struct Residuals {
    double gauss = 0.0, ricci = 0.0, codazzi = 0.0;
    double fhst1 = 0.0, fhst2 = 0.0, fhst3 = 0.0, fhst4 = 0.0;
    // Frobenius norms of the same differences, reported alongside the max
    double gauss_fro = 0.0, ricci_fro = 0.0, codazzi_fro = 0.0;
    double fhst1_fro = 0.0, fhst2_fro = 0.0, fhst3_fro = 0.0, fhst4_fro = 0.0;
    double max() const;
};

// Adjoint tensor: bstar[(i*q+r)*p+j] = <B*(e_i, n_r), e_j> = B[(i*p+j)*q+r].
std::vector<double> bstar(const PointData& d);

// Max-norm residual per fundamental equation, LHS - RHS over all index tuples.
Residuals fundamental_residuals(const PointData& d);

struct CliffordCheck {
    double commutator = 0.0;  // max |[A+B+C, xi] - (RT/RN action on xi)|
    double dA = 0.0, dB = 0.0, dC = 0.0;  // two constructions of each term
};

// Rebuild the spinorial curvature terms for the basis pair (X,Y) = (e_x, e_y)
// both from the orthonormal-frame sums and from the Clifford braces, compare
// them, and test the commutator action against RT / RN.
CliffordCheck curvature_clifford_check(const PointData& d, int x, int y);

// Random data satisfying every fundamental equation by construction: random
// B and product structure, nablaB assembled to satisfy Codazzi, RT / RN and
// the nabla(f,h,s,t) tensors defined by the equations' right-hand sides.
PointData make_consistent(int p, int q, double c1, double c2, std::mt19937_64& rng);

}  // namespace spinform
