#pragma once

#include <complex>
#include <stdexcept>

#include "spinform/clifford.hpp"

namespace spinform {

using cplx = std::complex<double>;

// Complex quaternions H^C on the basis {1, I, J, K} with I^2=J^2=K^2=-1,
// IJ=K, JI=-K. Concrete model of Cl^0(1,3); Spin(1,3) = {H(a,a)=1}.
struct ComplexQuaternion {
    cplx w{}, x{}, y{}, z{};  // coefficients on 1, I, J, K

    ComplexQuaternion() = default;
    ComplexQuaternion(cplx w_, cplx x_, cplx y_, cplx z_) : w(w_), x(x_), y(y_), z(z_) {}

    static ComplexQuaternion one() { return {1.0, 0.0, 0.0, 0.0}; }
    static ComplexQuaternion I() { return {0.0, 1.0, 0.0, 0.0}; }
    static ComplexQuaternion J() { return {0.0, 0.0, 1.0, 0.0}; }
    static ComplexQuaternion K() { return {0.0, 0.0, 0.0, 1.0}; }

    ComplexQuaternion& operator+=(const ComplexQuaternion& o) {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    ComplexQuaternion& operator-=(const ComplexQuaternion& o) {
        w -= o.w; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    ComplexQuaternion& operator*=(cplx s) {
        w *= s; x *= s; y *= s; z *= s;
        return *this;
    }
    friend ComplexQuaternion operator+(ComplexQuaternion a, const ComplexQuaternion& b) { return a += b; }
    friend ComplexQuaternion operator-(ComplexQuaternion a, const ComplexQuaternion& b) { return a -= b; }
    friend ComplexQuaternion operator*(ComplexQuaternion a, cplx s) { return a *= s; }
    friend ComplexQuaternion operator*(cplx s, ComplexQuaternion a) { return a *= s; }
    friend ComplexQuaternion operator-(ComplexQuaternion a) { return a *= -1.0; }

    double max_abs() const;
};

ComplexQuaternion cq_mul(const ComplexQuaternion& a, const ComplexQuaternion& b);
inline ComplexQuaternion operator*(const ComplexQuaternion& a, const ComplexQuaternion& b) {
    return cq_mul(a, b);
}

// hat: conjugate the four complex coefficients.
ComplexQuaternion cq_hat(const ComplexQuaternion& a);
// bar: quaternionic conjugation (1 fixed, I,J,K negated); equals reversion
// under the even-algebra isomorphism.
ComplexQuaternion cq_bar(const ComplexQuaternion& a);
// complex norm H(a,a) = a0^2+a1^2+a2^2+a3^2
cplx cq_H(const ComplexQuaternion& a);
// symmetric complex bilinear pairing H(a,b) = sum a_i b_i
cplx cq_H(const ComplexQuaternion& a, const ComplexQuaternion& b);

// x in R^{1,3} -> X = i x0 1 + x1 I + x2 J + x3 JI.  H(X,X) = <x,x>_{1,3}
// with the signature convention (-,+,+,+).
ComplexQuaternion minkowski_embed(double x0, double x1, double x2, double x3);

// Point on the hyperboloid {i x0 1 + x2 J + x3 JI : -x0^2+x2^2+x3^2 = -1, x0>0}.
struct H2Point {
    double x0 = 1.0, x2 = 0.0, x3 = 0.0;
    double constraint() const { return -x0 * x0 + x2 * x2 + x3 * x3 + 1.0; }
};

// Decode a quaternion of the form i x0 1 + x2 J + x3 JI (+ optional I part,
// which is ignored); throws if the residual pattern or hyperboloid constraint
// fails beyond tol.
H2Point decode_h2(const ComplexQuaternion& q, double tol = 1e-8);

// Element g1' = (1/2)(1+iI)(a + bJ) of the ideal (1/2)(1+iI) H^C.
struct IdealElement {
    cplx a{}, b{};

    IdealElement() = default;
    IdealElement(cplx a_, cplx b_) : a(a_), b(b_) {}

    ComplexQuaternion quaternion() const;               // (a/2, ia/2, b/2, ib/2)
    static IdealElement from_quaternion(const ComplexQuaternion& q, double tol = 1e-9);

    IdealElement& operator+=(const IdealElement& o) { a += o.a; b += o.b; return *this; }
    IdealElement& operator-=(const IdealElement& o) { a -= o.a; b -= o.b; return *this; }
    IdealElement& operator*=(cplx s) { a *= s; b *= s; return *this; }
    friend IdealElement operator+(IdealElement p, const IdealElement& q) { return p += q; }
    friend IdealElement operator-(IdealElement p, const IdealElement& q) { return p -= q; }
    friend IdealElement operator*(IdealElement p, cplx s) { return p *= s; }
    friend IdealElement operator*(cplx s, IdealElement p) { return p *= s; }
    friend IdealElement operator-(IdealElement p) { return p *= -1.0; }
};

// Apply the projector (1/2)(1+iI) on the left.
ComplexQuaternion project_plus(const ComplexQuaternion& q);
// Opposite projector (1/2)(1-iI).
ComplexQuaternion project_minus(const ComplexQuaternion& q);

// Hermitian product <g,h> = a conj(a') - b conj(b'), linear in the first slot.
cplx ideal_inner(const IdealElement& g, const IdealElement& h);
// |g|^2 = |a|^2 - |b|^2 (indefinite)
double ideal_norm(const IdealElement& g);

// pi(g1') = (2i/|g1'|^2) bar(g1') hat(g1'), defined for |g1'|^2 > 0; the result
// is G' + I with G' on the hyperboloid; returns G'.
H2Point pi_project(const IdealElement& g1p);

// Algebra isomorphism Cl^0(1,3) -> H^C (upper-left block of the matrix model).
ComplexQuaternion even_iso(const Multivector& a);

}  // namespace spinform
