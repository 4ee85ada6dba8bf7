#include "spinform/compat.hpp"

#include <cmath>

namespace spinform {

namespace {

struct Idx {
    int p, q;
    // tensors
    int B(int i, int j, int r) const { return (i * p + j) * q + r; }
    int nB(int k, int i, int j, int r) const { return ((k * p + i) * p + j) * q + r; }
    int RT(int x, int y, int z, int w) const { return ((x * p + y) * p + z) * p + w; }
    int RN(int x, int y, int r, int s) const { return ((x * p + y) * q + r) * q + s; }
    int mpp(int k, int i, int j) const { return (k * p + i) * p + j; }
    int mqp(int k, int r, int j) const { return (k * q + r) * p + j; }
    int mpq(int k, int i, int r) const { return (k * p + i) * q + r; }
    int mqq(int k, int r, int s) const { return (k * q + r) * q + s; }
};

void expect_size(const std::vector<double>& v, std::size_t n, const char* name) {
    if (v.size() != n) throw std::invalid_argument(std::string("PointData: bad shape for ") + name);
}

}  // namespace

void PointData::validate(double tol) const {
    if (p <= 0 || q <= 0) throw std::invalid_argument("PointData: p,q must be positive");
    const Idx ix{p, q};
    expect_size(B, std::size_t(p) * p * q, "B");
    expect_size(f, std::size_t(p) * p, "f");
    expect_size(h, std::size_t(q) * p, "h");
    expect_size(s, std::size_t(p) * q, "s");
    expect_size(t, std::size_t(q) * q, "t");
    expect_size(nablaB, std::size_t(p) * p * p * q, "nablaB");
    expect_size(nablaf, std::size_t(p) * p * p, "nablaf");
    expect_size(nablah, std::size_t(p) * q * p, "nablah");
    expect_size(nablas, std::size_t(p) * p * q, "nablas");
    expect_size(nablat, std::size_t(p) * q * q, "nablat");
    expect_size(RT, std::size_t(p) * p * p * p, "RT");
    expect_size(RN, std::size_t(p) * p * q * q, "RN");

    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            for (int r = 0; r < q; ++r)
                if (std::abs(B[ix.B(i, j, r)] - B[ix.B(j, i, r)]) > tol)
                    throw std::invalid_argument("PointData: B not symmetric");
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y) {
            for (int z = 0; z < p; ++z)
                for (int w = 0; w < p; ++w)
                    if (std::abs(RT[ix.RT(x, y, z, w)] + RT[ix.RT(y, x, z, w)]) > tol)
                        throw std::invalid_argument("PointData: RT not antisymmetric in (X,Y)");
            for (int r = 0; r < q; ++r)
                for (int s2 = 0; s2 < q; ++s2)
                    if (std::abs(RN[ix.RN(x, y, r, s2)] + RN[ix.RN(y, x, r, s2)]) > tol)
                        throw std::invalid_argument("PointData: RN not antisymmetric in (X,Y)");
        }
    // P symmetric: f = f^T, t = t^T, s = h^T
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (std::abs(f[i * p + j] - f[j * p + i]) > tol)
                throw std::invalid_argument("PointData: f not symmetric");
    for (int r = 0; r < q; ++r)
        for (int s2 = 0; s2 < q; ++s2)
            if (std::abs(t[r * q + s2] - t[s2 * q + r]) > tol)
                throw std::invalid_argument("PointData: t not symmetric");
    for (int i = 0; i < p; ++i)
        for (int r = 0; r < q; ++r)
            if (std::abs(s[i * q + r] - h[r * p + i]) > tol)
                throw std::invalid_argument("PointData: s != h^T");
    // P^2 = id blocks
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            double v = 0.0;
            for (int k = 0; k < p; ++k) v += f[i * p + k] * f[k * p + j];
            for (int r = 0; r < q; ++r) v += s[i * q + r] * h[r * p + j];
            if (std::abs(v - (i == j ? 1.0 : 0.0)) > tol)
                throw std::invalid_argument("PointData: f^2 + s h != id");
        }
    for (int i = 0; i < p; ++i)
        for (int r = 0; r < q; ++r) {
            double v = 0.0;
            for (int k = 0; k < p; ++k) v += f[i * p + k] * s[k * q + r];
            for (int s2 = 0; s2 < q; ++s2) v += s[i * q + s2] * t[s2 * q + r];
            if (std::abs(v) > tol) throw std::invalid_argument("PointData: f s + s t != 0");
        }
    for (int r = 0; r < q; ++r)
        for (int s2 = 0; s2 < q; ++s2) {
            double v = 0.0;
            for (int j = 0; j < p; ++j) v += h[r * p + j] * s[j * q + s2];
            for (int u = 0; u < q; ++u) v += t[r * q + u] * t[u * q + s2];
            if (std::abs(v - (r == s2 ? 1.0 : 0.0)) > tol)
                throw std::invalid_argument("PointData: h s + t^2 != id");
        }
}

double Residuals::max() const {
    double m = gauss;
    for (double v : {ricci, codazzi, fhst1, fhst2, fhst3, fhst4}) m = std::max(m, v);
    return m;
}

std::vector<double> bstar(const PointData& d) {
    const Idx ix{d.p, d.q};
    std::vector<double> out(std::size_t(d.p) * d.q * d.p, 0.0);
    for (int i = 0; i < d.p; ++i)
        for (int r = 0; r < d.q; ++r)
            for (int j = 0; j < d.p; ++j)
                out[(i * d.q + r) * d.p + j] = d.B[ix.B(i, j, r)];
    return out;
}

Residuals fundamental_residuals(const PointData& d) {
    d.validate();
    const int p = d.p, q = d.q;
    const Idx ix{p, q};
    const double k1 = 0.25 * (d.c1 + d.c2), k2 = 0.25 * (d.c1 - d.c2);
    Residuals R;
    auto track = [](double& mx, double& fro, double diff) {
        mx = std::max(mx, std::abs(diff));
        fro += diff * diff;
    };

    // Gauss
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y)
            for (int z = 0; z < p; ++z)
                for (int w = 0; w < p; ++w) {
                    double rhs = 0.0;
                    for (int r = 0; r < q; ++r)
                        rhs += d.B[ix.B(y, z, r)] * d.B[ix.B(x, w, r)] -
                               d.B[ix.B(x, z, r)] * d.B[ix.B(y, w, r)];
                    auto wedge = [&](const double* U, const double* V) {
                        return U[z] * V[w] - V[z] * U[w];
                    };
                    std::vector<double> ex(p, 0.0), ey(p, 0.0), fx(p), fy(p);
                    ex[x] = 1.0;
                    ey[y] = 1.0;
                    for (int i = 0; i < p; ++i) {
                        fx[i] = d.f[i * p + x];
                        fy[i] = d.f[i * p + y];
                    }
                    rhs += -k1 * (wedge(ex.data(), ey.data()) + wedge(fx.data(), fy.data()));
                    rhs += -k2 * (wedge(fx.data(), ey.data()) + wedge(ex.data(), fy.data()));
                    track(R.gauss, R.gauss_fro, d.RT[ix.RT(x, y, z, w)] - rhs);
                }

    // Ricci; the curvature term carries the sign forced by the Clifford
    // expansion of the braces (see curvature_clifford_check)
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y)
            for (int r = 0; r < q; ++r)
                for (int s2 = 0; s2 < q; ++s2) {
                    double rhs = 0.0;
                    for (int j = 0; j < p; ++j)
                        rhs += d.B[ix.B(y, j, r)] * d.B[ix.B(x, j, s2)] -
                               d.B[ix.B(x, j, r)] * d.B[ix.B(y, j, s2)];
                    const double hx_r = d.h[r * p + x], hy_r = d.h[r * p + y];
                    const double hx_s = d.h[s2 * p + x], hy_s = d.h[s2 * p + y];
                    rhs += -k1 * (hx_r * hy_s - hy_r * hx_s);
                    track(R.ricci, R.ricci_fro, d.RN[ix.RN(x, y, r, s2)] - rhs);
                }

    // Codazzi, with the (c1-c2) sign forced by the same expansion
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y)
            for (int z = 0; z < p; ++z)
                for (int r = 0; r < q; ++r) {
                    const double lhs = d.nablaB[ix.nB(x, y, z, r)] - d.nablaB[ix.nB(y, x, z, r)];
                    double rhs = k1 * (d.f[z * p + y] * d.h[r * p + x] -
                                       d.f[z * p + x] * d.h[r * p + y]);
                    rhs += k2 * ((y == z ? 1.0 : 0.0) * d.h[r * p + x] -
                                 (x == z ? 1.0 : 0.0) * d.h[r * p + y]);
                    track(R.codazzi, R.codazzi_fro, lhs - rhs);
                }

    // fhst 1..4
    for (int k = 0; k < p; ++k)
        for (int j = 0; j < p; ++j)
            for (int i = 0; i < p; ++i) {
                double rhs = 0.0;
                for (int r = 0; r < q; ++r)
                    rhs += d.s[i * q + r] * d.B[ix.B(k, j, r)] +
                           d.h[r * p + j] * d.B[ix.B(k, i, r)];
                track(R.fhst1, R.fhst1_fro, d.nablaf[ix.mpp(k, i, j)] - rhs);
            }
    for (int k = 0; k < p; ++k)
        for (int j = 0; j < p; ++j)
            for (int r = 0; r < q; ++r) {
                double rhs = 0.0;
                for (int s2 = 0; s2 < q; ++s2) rhs += d.t[r * q + s2] * d.B[ix.B(k, j, s2)];
                for (int i = 0; i < p; ++i) rhs -= d.f[i * p + j] * d.B[ix.B(k, i, r)];
                track(R.fhst2, R.fhst2_fro, d.nablah[ix.mqp(k, r, j)] - rhs);
            }
    for (int k = 0; k < p; ++k)
        for (int r = 0; r < q; ++r)
            for (int i = 0; i < p; ++i) {
                double rhs = 0.0;
                for (int j = 0; j < p; ++j) rhs -= d.f[i * p + j] * d.B[ix.B(k, j, r)];
                for (int s2 = 0; s2 < q; ++s2) rhs += d.t[s2 * q + r] * d.B[ix.B(k, i, s2)];
                track(R.fhst3, R.fhst3_fro, d.nablas[ix.mpq(k, i, r)] - rhs);
            }
    for (int k = 0; k < p; ++k)
        for (int r = 0; r < q; ++r)
            for (int s2 = 0; s2 < q; ++s2) {
                double rhs = 0.0;
                for (int j = 0; j < p; ++j)
                    rhs += -d.h[s2 * p + j] * d.B[ix.B(k, j, r)] -
                           d.s[j * q + r] * d.B[ix.B(k, j, s2)];
                track(R.fhst4, R.fhst4_fro, d.nablat[ix.mqq(k, r, s2)] - rhs);
            }

    for (double* v : {&R.gauss_fro, &R.ricci_fro, &R.codazzi_fro, &R.fhst1_fro, &R.fhst2_fro,
                      &R.fhst3_fro, &R.fhst4_fro})
        *v = std::sqrt(*v);
    return R;
}

CliffordCheck curvature_clifford_check(const PointData& d, int x, int y) {
    d.validate();
    const int p = d.p, q = d.q, N = p + q;
    if (N + 2 > 8) throw std::invalid_argument("curvature_clifford_check: p+q+2 must be <= 8");
    if (x < 0 || x >= p || y < 0 || y >= p)
        throw std::invalid_argument("curvature_clifford_check: basis indices out of range");
    const Idx ix{p, q};
    const Signature sig(0, N);

    auto tm_vec = [&](const std::vector<double>& v) {
        Multivector m(sig);
        for (int j = 0; j < p; ++j) m[1u << j] = v[j];
        return m;
    };
    auto e_vec = [&](const std::vector<double>& v) {
        Multivector m(sig);
        for (int r = 0; r < q; ++r) m[1u << (p + r)] = v[r];
        return m;
    };
    auto basis_tm = [&](int j) {
        std::vector<double> v(p, 0.0);
        v[j] = 1.0;
        return v;
    };
    auto basis_e = [&](int r) {
        std::vector<double> v(q, 0.0);
        v[r] = 1.0;
        return v;
    };

    // --- A: frame sum vs brace (1/2)((nabla_Y B)(X) - (nabla_X B)(Y)) ---
    Multivector A_sum(sig);
    for (int j = 0; j < p; ++j) {
        std::vector<double> diff(q);
        for (int r = 0; r < q; ++r)
            diff[r] = d.nablaB[ix.nB(y, x, j, r)] - d.nablaB[ix.nB(x, y, j, r)];
        A_sum += 0.5 * (tm_vec(basis_tm(j)) * e_vec(diff));
    }
    auto nablaB_of = [&](int k, int i) {
        // (nabla_k B)(e_i) = sum_j e_j . (nabla_k B)(e_i, e_j) in the Clifford algebra
        Multivector m(sig);
        for (int j = 0; j < p; ++j) {
            std::vector<double> v(q);
            for (int r = 0; r < q; ++r) v[r] = d.nablaB[ix.nB(k, i, j, r)];
            m += tm_vec(basis_tm(j)) * e_vec(v);
        }
        return m;
    };
    Multivector A_brace = 0.5 * (nablaB_of(y, x) - nablaB_of(x, y));

    // --- B: frame sums vs brace (1/4)(B(Y)B(X) - B(X)B(Y)) ---
    auto B_of = [&](int k) {
        Multivector m(sig);
        for (int j = 0; j < p; ++j) {
            std::vector<double> v(q);
            for (int r = 0; r < q; ++r) v[r] = d.B[ix.B(k, j, r)];
            m += tm_vec(basis_tm(j)) * e_vec(v);
        }
        return m;
    };
    Multivector B_brace = 0.25 * (B_of(y) * B_of(x) - B_of(x) * B_of(y));
    Multivector B_sum(sig);
    for (int j = 0; j < p; ++j)
        for (int k = j + 1; k < p; ++k) {
            double coef = 0.0;
            for (int r = 0; r < q; ++r)
                coef += d.B[ix.B(y, j, r)] * d.B[ix.B(x, k, r)] -
                        d.B[ix.B(x, j, r)] * d.B[ix.B(y, k, r)];
            B_sum += 0.5 * coef * (tm_vec(basis_tm(j)) * tm_vec(basis_tm(k)));
        }
    for (int r = 0; r < q; ++r)
        for (int s2 = r + 1; s2 < q; ++s2) {
            double coef = 0.0;
            for (int j = 0; j < p; ++j)
                coef += d.B[ix.B(y, j, r)] * d.B[ix.B(x, j, s2)] -
                        d.B[ix.B(x, j, r)] * d.B[ix.B(y, j, s2)];
            B_sum += 0.5 * coef * (e_vec(basis_e(r)) * e_vec(basis_e(s2)));
        }

    // --- C: frame sums vs brace (1/4)(c1(Y1 X1 - X1 Y1) + c2(Y2 X2 - X2 Y2)) ---
    auto split_pm = [&](int k, double sign) {
        // (1/2)(e_k + sign (f(e_k) + h(e_k)))
        Multivector m(sig);
        m[1u << k] = 0.5;
        for (int i = 0; i < p; ++i) m[1u << i] += 0.5 * sign * d.f[i * p + k];
        for (int r = 0; r < q; ++r) m[1u << (p + r)] += 0.5 * sign * d.h[r * p + k];
        return m;
    };
    const Multivector X1 = split_pm(x, 1.0), X2 = split_pm(x, -1.0);
    const Multivector Y1 = split_pm(y, 1.0), Y2 = split_pm(y, -1.0);
    Multivector C_brace = 0.25 * (d.c1 * commutator(Y1, X1) + d.c2 * commutator(Y2, X2));

    const double k1 = d.c1 + d.c2, k2 = d.c1 - d.c2;
    std::vector<double> ex = basis_tm(x), ey = basis_tm(y), fx(p), fy(p), hx(q), hy(q);
    for (int i = 0; i < p; ++i) {
        fx[i] = d.f[i * p + x];
        fy[i] = d.f[i * p + y];
    }
    for (int r = 0; r < q; ++r) {
        hx[r] = d.h[r * p + x];
        hy[r] = d.h[r * p + y];
    }
    auto wedge_at = [](const std::vector<double>& U, const std::vector<double>& V, int a, int b) {
        return U[a] * V[b] - V[a] * U[b];
    };
    Multivector C_sum(sig);
    for (int j = 0; j < p; ++j)
        for (int k = j + 1; k < p; ++k) {
            double coef = -0.125 * k1 * (wedge_at(ex, ey, j, k) + wedge_at(fx, fy, j, k));
            coef += -0.125 * k2 * (wedge_at(fx, ey, j, k) + wedge_at(ex, fy, j, k));
            C_sum += coef * (tm_vec(basis_tm(j)) * tm_vec(basis_tm(k)));
        }
    for (int r = 0; r < q; ++r)
        for (int s2 = r + 1; s2 < q; ++s2)
            C_sum += -0.125 * k1 * wedge_at(hx, hy, r, s2) *
                     (e_vec(basis_e(r)) * e_vec(basis_e(s2)));
    for (int j = 0; j < p; ++j) {
        std::vector<double> v(q);
        for (int r = 0; r < q; ++r)
            v[r] = 0.125 * (k1 * (fy[j] * hx[r] - fx[j] * hy[r]) +
                            k2 * (ey[j] * hx[r] - ex[j] * hy[r]));
        C_sum += tm_vec(basis_tm(j)) * e_vec(v);
    }

    CliffordCheck out;
    out.dA = (A_sum - A_brace).max_abs();
    out.dB = (B_sum - B_brace).max_abs();
    out.dC = (C_sum - C_brace).max_abs();

    const Multivector total = A_brace + B_brace + C_brace;
    double worst = 0.0;
    for (int j = 0; j < p; ++j) {
        Multivector c = commutator(total, tm_vec(basis_tm(j)));
        std::vector<double> expect(p, 0.0);
        for (int w = 0; w < p; ++w) expect[w] = d.RT[ix.RT(x, y, j, w)];
        Multivector e = tm_vec(expect);
        worst = std::max(worst, (c - e).max_abs());
    }
    for (int r = 0; r < q; ++r) {
        Multivector c = commutator(total, e_vec(basis_e(r)));
        std::vector<double> expect(q, 0.0);
        for (int s2 = 0; s2 < q; ++s2) expect[s2] = d.RN[ix.RN(x, y, r, s2)];
        Multivector e = e_vec(expect);
        worst = std::max(worst, (c - e).max_abs());
    }
    out.commutator = worst;
    return out;
}

PointData make_consistent(int p, int q, double c1, double c2, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int N = p + q;
    PointData d;
    d.p = p;
    d.q = q;
    d.c1 = c1;
    d.c2 = c2;
    const Idx ix{p, q};

    // product structure from a random orthogonal decomposition: P = 2 V V^T - id
    // with V an orthonormal basis of a random subspace of dimension 1..N-1
    std::vector<std::vector<double>> cols;
    const int mdim = 1 + int(rng() % std::uint64_t(N - 1));
    while (int(cols.size()) < mdim) {
        std::vector<double> v(N);
        for (double& vi : v) vi = gauss(rng);
        for (const auto& c : cols) {
            double dp = 0.0;
            for (int i = 0; i < N; ++i) dp += v[i] * c[i];
            for (int i = 0; i < N; ++i) v[i] -= dp * c[i];
        }
        double nrm = 0.0;
        for (double vi : v) nrm += vi * vi;
        if (nrm < 1e-6) continue;
        nrm = std::sqrt(nrm);
        for (double& vi : v) vi /= nrm;
        cols.push_back(v);
    }
    std::vector<double> P(std::size_t(N) * N, 0.0);
    for (int i = 0; i < N; ++i) {
        P[i * N + i] = -1.0;
        for (const auto& c : cols)
            for (int j = 0; j < N; ++j) P[i * N + j] += 2.0 * c[i] * c[j];
    }
    d.f.resize(std::size_t(p) * p);
    d.h.resize(std::size_t(q) * p);
    d.s.resize(std::size_t(p) * q);
    d.t.resize(std::size_t(q) * q);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) d.f[i * p + j] = P[i * N + j];
    for (int r = 0; r < q; ++r)
        for (int j = 0; j < p; ++j) d.h[r * p + j] = P[(p + r) * N + j];
    for (int i = 0; i < p; ++i)
        for (int r = 0; r < q; ++r) d.s[i * q + r] = P[i * N + (p + r)];
    for (int r = 0; r < q; ++r)
        for (int s2 = 0; s2 < q; ++s2) d.t[r * q + s2] = P[(p + r) * N + (p + s2)];

    // symmetric random B
    d.B.assign(std::size_t(p) * p * q, 0.0);
    for (int i = 0; i < p; ++i)
        for (int j = i; j < p; ++j)
            for (int r = 0; r < q; ++r) {
                const double v = gauss(rng);
                d.B[ix.B(i, j, r)] = v;
                d.B[ix.B(j, i, r)] = v;
            }

    // Codazzi right-hand side
    const double k1 = 0.25 * (c1 + c2), k2 = 0.25 * (c1 - c2);
    auto cod = [&](int x, int y, int z, int r) {
        double v = k1 * (d.f[z * p + y] * d.h[r * p + x] - d.f[z * p + x] * d.h[r * p + y]);
        v += k2 * ((y == z ? 1.0 : 0.0) * d.h[r * p + x] - (x == z ? 1.0 : 0.0) * d.h[r * p + y]);
        return v;
    };
    // nablaB = (1/3)(cod(k,i,j) + cod(k,j,i)) + fully symmetric random part
    std::vector<double> W(std::size_t(p) * p * p * q);
    for (double& v : W) v = gauss(rng);
    d.nablaB.assign(W.size(), 0.0);
    for (int k = 0; k < p; ++k)
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j)
                for (int r = 0; r < q; ++r) {
                    double sym = W[ix.nB(k, i, j, r)] + W[ix.nB(k, j, i, r)] +
                                 W[ix.nB(i, k, j, r)] + W[ix.nB(i, j, k, r)] +
                                 W[ix.nB(j, k, i, r)] + W[ix.nB(j, i, k, r)];
                    d.nablaB[ix.nB(k, i, j, r)] =
                        (cod(k, i, j, r) + cod(k, j, i, r)) / 3.0 + sym / 6.0;
                }

    // curvatures and structure derivatives from the equations themselves
    d.RT.assign(std::size_t(p) * p * p * p, 0.0);
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y)
            for (int z = 0; z < p; ++z)
                for (int w = 0; w < p; ++w) {
                    double v = 0.0;
                    for (int r = 0; r < q; ++r)
                        v += d.B[ix.B(y, z, r)] * d.B[ix.B(x, w, r)] -
                             d.B[ix.B(x, z, r)] * d.B[ix.B(y, w, r)];
                    auto dl = [&](int a, int b) { return a == b ? 1.0 : 0.0; };
                    // (X^Y)Z . e_w with X = e_x etc.
                    v += -k1 * (dl(x, z) * dl(y, w) - dl(y, z) * dl(x, w));
                    double fw = 0.0;
                    fw += d.f[z * p + x] * d.f[w * p + y] - d.f[z * p + y] * d.f[w * p + x];
                    v += -k1 * fw;
                    v += -k2 * (d.f[z * p + x] * dl(y, w) - dl(y, z) * d.f[w * p + x] +
                                dl(x, z) * d.f[w * p + y] - d.f[z * p + y] * dl(x, w));
                    d.RT[ix.RT(x, y, z, w)] = v;
                }
    d.RN.assign(std::size_t(p) * p * q * q, 0.0);
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y)
            for (int r = 0; r < q; ++r)
                for (int s2 = 0; s2 < q; ++s2) {
                    double v = 0.0;
                    for (int j = 0; j < p; ++j)
                        v += d.B[ix.B(y, j, r)] * d.B[ix.B(x, j, s2)] -
                             d.B[ix.B(x, j, r)] * d.B[ix.B(y, j, s2)];
                    v += -k1 * (d.h[r * p + x] * d.h[s2 * p + y] -
                                d.h[r * p + y] * d.h[s2 * p + x]);
                    d.RN[ix.RN(x, y, r, s2)] = v;
                }

    d.nablaf.assign(std::size_t(p) * p * p, 0.0);
    d.nablah.assign(std::size_t(p) * q * p, 0.0);
    d.nablas.assign(std::size_t(p) * p * q, 0.0);
    d.nablat.assign(std::size_t(p) * q * q, 0.0);
    for (int k = 0; k < p; ++k) {
        for (int j = 0; j < p; ++j) {
            for (int i = 0; i < p; ++i) {
                double v = 0.0;
                for (int r = 0; r < q; ++r)
                    v += d.s[i * q + r] * d.B[ix.B(k, j, r)] + d.h[r * p + j] * d.B[ix.B(k, i, r)];
                d.nablaf[ix.mpp(k, i, j)] = v;
            }
            for (int r = 0; r < q; ++r) {
                double v = 0.0;
                for (int s2 = 0; s2 < q; ++s2) v += d.t[r * q + s2] * d.B[ix.B(k, j, s2)];
                for (int i = 0; i < p; ++i) v -= d.f[i * p + j] * d.B[ix.B(k, i, r)];
                d.nablah[ix.mqp(k, r, j)] = v;
            }
        }
        for (int r = 0; r < q; ++r) {
            for (int i = 0; i < p; ++i) {
                double v = 0.0;
                for (int j = 0; j < p; ++j) v -= d.f[i * p + j] * d.B[ix.B(k, j, r)];
                for (int s2 = 0; s2 < q; ++s2) v += d.t[s2 * q + r] * d.B[ix.B(k, i, s2)];
                d.nablas[ix.mpq(k, i, r)] = v;
            }
            for (int s2 = 0; s2 < q; ++s2) {
                double v = 0.0;
                for (int j = 0; j < p; ++j)
                    v += -d.h[s2 * p + j] * d.B[ix.B(k, j, r)] - d.s[j * q + r] * d.B[ix.B(k, j, s2)];
                d.nablat[ix.mqq(k, r, s2)] = v;
            }
        }
    }
    return d;
}

}  // namespace spinform
