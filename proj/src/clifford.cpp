#include "spinform/clifford.hpp"

#include <bit>
#include <cmath>

namespace spinform {

namespace {

// Sign from moving the generators of blade b past those of blade a into
// ascending order (transposition count), before metric contraction.
int reorder_sign(unsigned a, unsigned b) {
    int swaps = 0;
    a >>= 1;
    while (a) {
        swaps += std::popcount(a & b);
        a >>= 1;
    }
    return (swaps & 1) ? -1 : 1;
}

void require_same_signature(const Multivector& a, const Multivector& b) {
    if (!(a.signature() == b.signature()))
        throw std::invalid_argument("signature mismatch");
}

}  // namespace

Multivector& Multivector::operator+=(const Multivector& o) {
    require_same_signature(*this, o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Multivector& Multivector::operator-=(const Multivector& o) {
    require_same_signature(*this, o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Multivector& Multivector::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

double Multivector::max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

bool Multivector::is_even() const {
    for (std::size_t mask = 0; mask < c_.size(); ++mask)
        if ((std::popcount(unsigned(mask)) & 1) && c_[mask] != 0.0) return false;
    return true;
}

Multivector geometric_product(const Multivector& a, const Multivector& b) {
    require_same_signature(a, b);
    const Signature sig = a.signature();
    Multivector out(sig);
    const std::size_t n = sig.blades();
    for (std::size_t i = 0; i < n; ++i) {
        const double ai = a[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            const double bj = b[j];
            if (bj == 0.0) continue;
            double s = reorder_sign(unsigned(i), unsigned(j));
            unsigned common = unsigned(i) & unsigned(j);
            while (common) {
                const int bit = std::countr_zero(common);
                s *= sig.generator_square(bit);
                common &= common - 1;
            }
            out[i ^ j] += s * ai * bj;
        }
    }
    return out;
}

Multivector reversion(const Multivector& a) {
    Multivector out(a.signature());
    for (std::size_t mask = 0; mask < a.size(); ++mask) {
        const int k = std::popcount(unsigned(mask));
        const double sign = ((k * (k - 1) / 2) & 1) ? -1.0 : 1.0;
        out[mask] = sign * a[mask];
    }
    return out;
}

Multivector pairing(const Multivector& phi, const Multivector& phi2) {
    return geometric_product(reversion(phi2), phi);
}

Multivector grade_project(const Multivector& a, int k) {
    if (k < 0 || k > a.signature().dim())
        throw std::invalid_argument("grade_project: grade out of range");
    Multivector out(a.signature());
    for (std::size_t mask = 0; mask < a.size(); ++mask)
        if (std::popcount(unsigned(mask)) == k) out[mask] = a[mask];
    return out;
}

Multivector commutator(const Multivector& a, const Multivector& b) {
    return geometric_product(a, b) - geometric_product(b, a);
}

SkewOperator::SkewOperator(int n, std::vector<double> entries) : dim(n), m(std::move(entries)) {
    if (dim <= 0 || m.size() != std::size_t(dim) * dim)
        throw std::invalid_argument("SkewOperator: bad dimensions");
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (m[std::size_t(i) * dim + j] + m[std::size_t(j) * dim + i] != 0.0)
                throw std::invalid_argument("SkewOperator: matrix not antisymmetric as stored");
}

std::vector<double> SkewOperator::apply(const std::vector<double>& x) const {
    std::vector<double> y(dim, 0.0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) y[i] += m[std::size_t(i) * dim + j] * x[j];
    return y;
}

Multivector bivector_of_skew(const SkewOperator& u) {
    const Signature sig(0, u.dim);
    Multivector out(sig);
    // (1/4) sum_j e_j . u(e_j) lands on grade 2 only; u(e_j) = sum_i m[i][j] e_i
    for (int j = 0; j < u.dim; ++j)
        for (int i = 0; i < u.dim; ++i) {
            if (i == j) continue;
            const double s = (j < i) ? 1.0 : -1.0;  // e_j.e_i, reorder if needed
            out[(1u << i) | (1u << j)] += 0.25 * s * u(i, j);
        }
    return out;
}

Multivector bivector_of_map(int p, int q, const std::vector<double>& u) {
    if (p <= 0 || q <= 0 || u.size() != std::size_t(p) * q)
        throw std::invalid_argument("bivector_of_map: bad dimensions");
    const Signature sig(0, p + q);
    Multivector out(sig);
    // (1/2) sum_{j<p} e_j . u(e_j); j < p+r always, no reorder sign
    for (int j = 0; j < p; ++j)
        for (int r = 0; r < q; ++r)
            out[(1u << j) | (1u << (p + r))] += 0.5 * u[std::size_t(r) * p + j];
    return out;
}

Multivector bivector_of_map_symmetrized(int p, int q, const std::vector<double>& u) {
    if (p <= 0 || q <= 0 || u.size() != std::size_t(p) * q)
        throw std::invalid_argument("bivector_of_map: bad dimensions");
    const Signature sig(0, p + q);
    Multivector out(sig);
    for (int j = 0; j < p; ++j)
        for (int r = 0; r < q; ++r) {
            const double v = u[std::size_t(r) * p + j];
            out[(1u << j) | (1u << (p + r))] += 0.25 * v;        // e_j . u(e_j)
            out[(1u << j) | (1u << (p + r))] += 0.25 * v;        // e_{p+r} . (-u*(e_{p+r})) = +v e_j.e_{p+r}
        }
    return out;
}

Multivector wedge_bivector(const Multivector& U, const Multivector& V) {
    Multivector uv = geometric_product(U, V);
    Multivector vu = geometric_product(V, U);
    return (uv - vu) * 0.25;
}

std::pair<Multivector, Multivector> ideal_split(const Multivector& a, const Multivector& omega) {
    require_same_signature(a, omega);
    Multivector sq = geometric_product(omega, omega);
    Multivector one = Multivector::scalar(a.signature(), 1.0);
    if ((sq - one).max_abs() > 1e-12)
        throw std::invalid_argument("ideal_split: omega^2 != 1");
    Multivector minus = geometric_product(a, (one - omega) * 0.5);
    Multivector plus = geometric_product(a, (one + omega) * 0.5);
    return {minus, plus};
}

}  // namespace spinform
