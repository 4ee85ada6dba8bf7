#include <doctest.h>

#include <random>

#include "spinform/compat.hpp"

using namespace spinform;

TEST_SUITE("compat") {

TEST_CASE("bstar transposes the right slots") {
    std::mt19937_64 rng(11);
    PointData d = make_consistent(2, 2, 1.0, 1.0, rng);
    SUBCASE("zero B") {
        std::fill(d.B.begin(), d.B.end(), 0.0);
        const auto bs = bstar(d);
        for (double v : bs) CHECK(v == 0.0);
    }
    SUBCASE("scalar case p = q = 1") {
        std::mt19937_64 r2(12);
        PointData s = make_consistent(1, 1, 1.0, 1.0, r2);
        const auto bs = bstar(s);
        CHECK(bs.size() == 1);
        CHECK(bs[0] == s.B[0]);
    }
    SUBCASE("defining identity over all basis triples") {
        const auto bs = bstar(d);
        const int p = d.p, q = d.q;
        for (int x = 0; x < p; ++x)
            for (int y = 0; y < p; ++y)
                for (int r = 0; r < q; ++r)
                    CHECK(d.B[(x * p + y) * q + r] == bs[(x * q + r) * p + y]);
    }
}

TEST_CASE("manufactured-consistent data has zero residuals") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 25; ++rep) {
        const int p = 1 + int(rng() % 3), q = 1 + int(rng() % 3);
        const PointData d = make_consistent(p, q, 1.0, 1.0, rng);
        const Residuals r = fundamental_residuals(d);
        CHECK(r.max() < 1e-12);
    }
}

TEST_CASE("sign variants: negative curvatures stay consistent") {
    std::mt19937_64 rng(14);
    for (int rep = 0; rep < 25; ++rep) {
        const PointData d = make_consistent(2, 2, -1.0, -1.0, rng);
        CHECK(fundamental_residuals(d).max() < 1e-12);
        const PointData m = make_consistent(3, 2, -0.7, -2.0, rng);
        CHECK(fundamental_residuals(m).max() < 1e-12);
    }
}

TEST_CASE("random curvature input fails the gauss equation") {
    std::mt19937_64 rng(15);
    PointData d = make_consistent(2, 2, 1.0, 1.0, rng);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int x = 0; x < d.p; ++x)
        for (int y = 0; y < x; ++y)
            for (int z = 0; z < d.p; ++z)
                for (int w = 0; w < d.p; ++w) {
                    const double v = g(rng);
                    d.RT[((x * d.p + y) * d.p + z) * d.p + w] = v;
                    d.RT[((y * d.p + x) * d.p + z) * d.p + w] = -v;
                }
    CHECK(fundamental_residuals(d).gauss > 1e-3);
}

TEST_CASE("fhst equations manufactured from their own right-hand sides") {
    std::mt19937_64 rng(16);
    PointData d = make_consistent(3, 2, 1.4, 0.6, rng);
    const Residuals r = fundamental_residuals(d);
    CHECK(r.fhst1 < 1e-12);
    CHECK(r.fhst2 < 1e-12);
    CHECK(r.fhst3 < 1e-12);
    CHECK(r.fhst4 < 1e-12);
    // perturb nablaf: only fhst1 reacts
    d.nablaf[0] += 0.5;
    const Residuals r2 = fundamental_residuals(d);
    CHECK(r2.fhst1 > 0.4);
    CHECK(r2.fhst2 < 1e-12);
}

TEST_CASE("input invariants are enforced") {
    std::mt19937_64 rng(17);
    PointData d = make_consistent(2, 2, 1.0, 1.0, rng);
    SUBCASE("asymmetric B") {
        d.B[(0 * d.p + 1) * d.q + 0] += 1.0;
        CHECK_THROWS_AS(fundamental_residuals(d), std::invalid_argument);
    }
    SUBCASE("broken product structure") {
        d.f[0] += 0.3;
        CHECK_THROWS_AS(fundamental_residuals(d), std::invalid_argument);
    }
    SUBCASE("RT not antisymmetric") {
        d.RT[0] = 1.0;
        CHECK_THROWS_AS(fundamental_residuals(d), std::invalid_argument);
    }
}

TEST_CASE("curvature clifford check: both constructions agree and ABC R holds") {
    std::mt19937_64 rng(18);
    for (int rep = 0; rep < 100; ++rep) {
        const int p = 2 + int(rng() % 2), q = 1 + int(rng() % 3);  // p,q <= 3
        const double c1 = (rep % 2) ? 1.0 : 0.5 + 0.1 * (rep % 7);
        const double c2 = (rep % 3) ? 1.0 : 2.0;
        const PointData d = make_consistent(p, q, c1, c2, rng);
        for (int x = 0; x < p; ++x)
            for (int y = x + 1; y < p; ++y) {
                const CliffordCheck c = curvature_clifford_check(d, x, y);
                CHECK(c.dA < 1e-12);
                CHECK(c.dB < 1e-12);
                CHECK(c.dC < 1e-12);
                CHECK(c.commutator < 1e-12);
            }
    }
}

TEST_CASE("B = 0 makes the curvature braces vanish") {
    std::mt19937_64 rng(19);
    PointData d = make_consistent(2, 2, 1.0, 1.0, rng);
    std::fill(d.B.begin(), d.B.end(), 0.0);
    std::fill(d.nablaB.begin(), d.nablaB.end(), 0.0);
    // rebuild the dependent tensors for the zero-B data
    std::fill(d.nablaf.begin(), d.nablaf.end(), 0.0);
    std::fill(d.nablah.begin(), d.nablah.end(), 0.0);
    std::fill(d.nablas.begin(), d.nablas.end(), 0.0);
    std::fill(d.nablat.begin(), d.nablat.end(), 0.0);
    const int p = d.p, q = d.q;
    const double k1 = 0.25 * (d.c1 + d.c2), k2 = 0.25 * (d.c1 - d.c2);
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y)
            for (int z = 0; z < p; ++z)
                for (int w = 0; w < p; ++w) {
                    auto dl = [](int a, int b) { return a == b ? 1.0 : 0.0; };
                    double v = -k1 * (dl(x, z) * dl(y, w) - dl(y, z) * dl(x, w));
                    v += -k1 * (d.f[z * p + x] * d.f[w * p + y] - d.f[z * p + y] * d.f[w * p + x]);
                    v += -k2 * (d.f[z * p + x] * dl(y, w) - dl(y, z) * d.f[w * p + x] +
                                dl(x, z) * d.f[w * p + y] - d.f[z * p + y] * dl(x, w));
                    d.RT[((x * p + y) * p + z) * p + w] = v;
                }
    for (int x = 0; x < p; ++x)
        for (int y = 0; y < p; ++y)
            for (int r = 0; r < q; ++r)
                for (int s2 = 0; s2 < q; ++s2)
                    d.RN[((x * p + y) * q + r) * q + s2] =
                        -k1 * (d.h[r * p + x] * d.h[s2 * p + y] -
                               d.h[r * p + y] * d.h[s2 * p + x]);
    CHECK(fundamental_residuals(d).max() < 1e-12);
    const CliffordCheck c = curvature_clifford_check(d, 0, 1);
    CHECK(c.dA == 0.0);
    CHECK(c.dB == 0.0);
    CHECK(c.commutator < 1e-12);
}

TEST_CASE("dimension cap") {
    std::mt19937_64 rng(20);
    const PointData d = make_consistent(4, 3, 1.0, 1.0, rng);
    CHECK_THROWS_AS(curvature_clifford_check(d, 0, 1), std::invalid_argument);
}

}  // TEST_SUITE
