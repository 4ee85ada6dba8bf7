#include "spinform/cquat.hpp"

#include <array>
#include <bit>
#include <cmath>

namespace spinform {

double ComplexQuaternion::max_abs() const {
    return std::max(std::max(std::abs(w), std::abs(x)), std::max(std::abs(y), std::abs(z)));
}

ComplexQuaternion cq_mul(const ComplexQuaternion& a, const ComplexQuaternion& b) {
    return {
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    };
}

ComplexQuaternion cq_hat(const ComplexQuaternion& a) {
    return {std::conj(a.w), std::conj(a.x), std::conj(a.y), std::conj(a.z)};
}

ComplexQuaternion cq_bar(const ComplexQuaternion& a) { return {a.w, -a.x, -a.y, -a.z}; }

cplx cq_H(const ComplexQuaternion& a) { return cq_H(a, a); }

cplx cq_H(const ComplexQuaternion& a, const ComplexQuaternion& b) {
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

ComplexQuaternion minkowski_embed(double x0, double x1, double x2, double x3) {
    // JI = -K
    return {cplx(0.0, x0), cplx(x1, 0.0), cplx(x2, 0.0), cplx(-x3, 0.0)};
}

H2Point decode_h2(const ComplexQuaternion& q, double tol) {
    // expected pattern: w purely imaginary, y and z real (x ignored)
    const double drift = std::max(std::max(std::abs(q.w.real()), std::abs(q.y.imag())),
                                  std::abs(q.z.imag()));
    if (drift > tol) throw std::runtime_error("decode_h2: value not in the R^{1,2} span");
    H2Point p;
    p.x0 = q.w.imag();
    p.x2 = q.y.real();
    p.x3 = -q.z.real();
    if (std::abs(p.constraint()) > tol)
        throw std::runtime_error("decode_h2: hyperboloid constraint violated");
    if (p.x0 <= 0.0) throw std::runtime_error("decode_h2: point on the lower sheet");
    return p;
}

ComplexQuaternion IdealElement::quaternion() const {
    const cplx i(0.0, 1.0);
    return {0.5 * a, 0.5 * i * a, 0.5 * b, 0.5 * i * b};
}

IdealElement IdealElement::from_quaternion(const ComplexQuaternion& q, double tol) {
    const cplx i(0.0, 1.0);
    IdealElement g(2.0 * q.w, 2.0 * q.y);
    // the (1/2)(1+iI)-fixed form forces x = i w and z = i y
    const double err = std::max(std::abs(q.x - i * q.w), std::abs(q.z - i * q.y));
    const double scale = std::max(1.0, q.max_abs());
    if (err > tol * scale)
        throw std::runtime_error("IdealElement::from_quaternion: value not in the ideal");
    return g;
}

ComplexQuaternion project_plus(const ComplexQuaternion& q) {
    const cplx i(0.0, 1.0);
    const ComplexQuaternion iI(0.0, i, 0.0, 0.0);
    return 0.5 * (q + cq_mul(iI, q));
}

ComplexQuaternion project_minus(const ComplexQuaternion& q) {
    const cplx i(0.0, 1.0);
    const ComplexQuaternion iI(0.0, i, 0.0, 0.0);
    return 0.5 * (q - cq_mul(iI, q));
}

cplx ideal_inner(const IdealElement& g, const IdealElement& h) {
    return g.a * std::conj(h.a) - g.b * std::conj(h.b);
}

double ideal_norm(const IdealElement& g) { return std::norm(g.a) - std::norm(g.b); }

H2Point pi_project(const IdealElement& g1p) {
    const double n2 = ideal_norm(g1p);
    if (!(n2 > 0.0)) throw std::runtime_error("pi_project: hermitian norm not positive");
    const ComplexQuaternion q = g1p.quaternion();
    ComplexQuaternion p = cq_mul(cq_bar(q), cq_hat(q)) * cplx(0.0, 2.0 / n2);
    // p = G' + I: the I coefficient is exactly 1, strip it
    if (std::abs(p.x - cplx(1.0, 0.0)) > 1e-8)
        throw std::runtime_error("pi_project: unexpected I component");
    p.x = 0.0;
    return decode_h2(p, 1e-10);
}

ComplexQuaternion even_iso(const Multivector& a) {
    static const Signature sig13(1, 3);
    if (!(a.signature() == sig13))
        throw std::invalid_argument("even_iso: expects Cl(1,3)");
    if (!a.is_even()) throw std::invalid_argument("even_iso: odd-grade input");

    // Images of the generators: e_k -> X_k (upper-right block), hat(X_k) lower-left.
    static const std::array<ComplexQuaternion, 4> X = {
        minkowski_embed(1, 0, 0, 0), minkowski_embed(0, 1, 0, 0),
        minkowski_embed(0, 0, 1, 0), minkowski_embed(0, 0, 0, 1)};

    ComplexQuaternion out{};
    for (unsigned mask = 0; mask < a.size(); ++mask) {
        const double c = a[mask];
        if (c == 0.0) continue;
        // blade e_{i1}...e_{ik}, ascending: image X_{i1} hat(X_{i2}) X_{i3} ...
        ComplexQuaternion img = ComplexQuaternion::one();
        bool hat_next = false;
        for (int bit = 0; bit < 4; ++bit) {
            if (!(mask & (1u << bit))) continue;
            img = cq_mul(img, hat_next ? cq_hat(X[bit]) : X[bit]);
            hat_next = !hat_next;
        }
        out += img * cplx(c, 0.0);
    }
    return out;
}

}  // namespace spinform
