#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace spinform {

// Real Clifford algebra Cl(r,s) with the convention
//     v.w + w.v = -2<v,w>,
// where <,> has r timelike directions (listed first, e_i^2 = +1) and
// s spacelike directions (e_i^2 = -1).
struct Signature {
    int timelike = 0;   // r
    int spacelike = 0;  // s

    Signature() = default;
    Signature(int r, int s) : timelike(r), spacelike(s) {
        if (r < 0 || s < 0 || r + s > 8)
            throw std::invalid_argument("Signature: need r,s >= 0 and r+s <= 8");
    }
    int dim() const { return timelike + spacelike; }
    std::size_t blades() const { return std::size_t(1) << dim(); }
    // e_i^2 with the convention above
    double generator_square(int i) const { return i < timelike ? 1.0 : -1.0; }
    bool operator==(const Signature& o) const {
        return timelike == o.timelike && spacelike == o.spacelike;
    }
};

// Dense multivector: coefficient per blade, indexed by bitmask (bit i <-> e_i),
// generators inside a blade in ascending index order.
class Multivector {
public:
    explicit Multivector(Signature sig) : sig_(sig), c_(sig.blades(), 0.0) {}

    static Multivector scalar(Signature sig, double v) {
        Multivector m(sig);
        m.c_[0] = v;
        return m;
    }
    static Multivector basis(Signature sig, int i) {
        if (i < 0 || i >= sig.dim()) throw std::invalid_argument("basis: index out of range");
        Multivector m(sig);
        m.c_[std::size_t(1) << i] = 1.0;
        return m;
    }
    static Multivector blade(Signature sig, unsigned mask, double v = 1.0) {
        if (mask >= sig.blades()) throw std::invalid_argument("blade: mask out of range");
        Multivector m(sig);
        m.c_[mask] = v;
        return m;
    }

    Signature signature() const { return sig_; }
    std::size_t size() const { return c_.size(); }
    double operator[](std::size_t mask) const { return c_[mask]; }
    double& operator[](std::size_t mask) { return c_[mask]; }
    const std::vector<double>& coefficients() const { return c_; }

    Multivector& operator+=(const Multivector& o);
    Multivector& operator-=(const Multivector& o);
    Multivector& operator*=(double s);

    friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
    friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
    friend Multivector operator*(Multivector a, double s) { return a *= s; }
    friend Multivector operator*(double s, Multivector a) { return a *= s; }
    friend Multivector operator-(Multivector a) { return a *= -1.0; }

    double max_abs() const;
    bool is_even() const;  // all odd-grade coefficients zero

private:
    Signature sig_;
    std::vector<double> c_;
};

// Geometric product under the v.w + w.v = -2<v,w> convention.
Multivector geometric_product(const Multivector& a, const Multivector& b);
inline Multivector operator*(const Multivector& a, const Multivector& b) {
    return geometric_product(a, b);
}

// Reversion: identity on grades 0 and 1, sign (-1)^{k(k-1)/2} on grade k.
Multivector reversion(const Multivector& a);

// Spinor pairing <<phi,phi2>> = reversion(phi2) * phi.
Multivector pairing(const Multivector& phi, const Multivector& phi2);

Multivector grade_project(const Multivector& a, int k);

Multivector commutator(const Multivector& a, const Multivector& b);

// Skew-symmetric operator on R^N (positive-definite block convention: the
// bivector dictionary below lives in Cl(0,N)).
struct SkewOperator {
    int dim = 0;
    std::vector<double> m;  // row-major N x N, m[i*dim+j] = <u(e_j), e_i>

    SkewOperator(int n, std::vector<double> entries);
    double operator()(int i, int j) const { return m[std::size_t(i) * dim + j]; }
    std::vector<double> apply(const std::vector<double>& x) const;
};

// u_bar = (1/4) sum_j e_j . u(e_j), satisfies [u_bar, xi] = u(xi).
Multivector bivector_of_skew(const SkewOperator& u);

// For u: R^p -> R^q within R^{p+q}: u_bar = (1/2) sum_{j<p} e_j . u(e_j),
// with [u_bar, xi_p + xi_q] = u(xi_p) - u*(xi_q).
// Entries row-major q x p: u[r*p + j] = <u(e_j), e_{p+r}>.
Multivector bivector_of_map(int p, int q, const std::vector<double>& u);
// Symmetrized variant (1/4)(sum_j e_j.u(e_j) + sum_r e_{p+r}.(-u*(e_{p+r}))).
Multivector bivector_of_map_symmetrized(int p, int q, const std::vector<double>& u);

// (1/4)(U.V - V.U); represents W -> <U,W>V - <V,W>U.
Multivector wedge_bivector(const Multivector& U, const Multivector& V);

// (a . (1-omega)/2, a . (1+omega)/2); requires omega^2 = 1.
std::pair<Multivector, Multivector> ideal_split(const Multivector& a, const Multivector& omega);

}  // namespace spinform
