#include <doctest.h>

#include <bit>
#include <random>

#include "spinform/cquat.hpp"

using namespace spinform;

namespace {

std::mt19937_64& rng() {
    static std::mt19937_64 r(42);
    return r;
}

cplx rc() {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng()), u(rng())};
}

ComplexQuaternion random_cq() { return {rc(), rc(), rc(), rc()}; }

ComplexQuaternion random_unit_cq() {
    // rejection-free: scale a random quaternion so H(g,g)=1 (complex sqrt)
    for (;;) {
        ComplexQuaternion g = random_cq();
        const cplx h = cq_H(g);
        if (std::abs(h) < 1e-3) continue;
        return g * (1.0 / std::sqrt(h));
    }
}

Multivector random_even13() {
    static const Signature sig(1, 3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Multivector m(sig);
    for (unsigned mask = 0; mask < 16; ++mask)
        if (!(std::popcount(mask) & 1)) m[mask] = u(rng());
    return m;
}

}  // namespace

TEST_SUITE("cquat") {

TEST_CASE("quaternion table") {
    const auto I = ComplexQuaternion::I(), J = ComplexQuaternion::J(), K = ComplexQuaternion::K();
    CHECK((I * J - K).max_abs() == 0.0);
    CHECK((J * I + K).max_abs() == 0.0);
    CHECK((I * I + ComplexQuaternion::one()).max_abs() == 0.0);
    CHECK((J * J + ComplexQuaternion::one()).max_abs() == 0.0);
    CHECK((K * K + ComplexQuaternion::one()).max_abs() == 0.0);
    const ComplexQuaternion q = random_cq();
    CHECK((ComplexQuaternion::one() * q - q).max_abs() == 0.0);
}

TEST_CASE("complex norm is multiplicative") {
    for (int rep = 0; rep < 100; ++rep) {
        const ComplexQuaternion a = random_cq(), b = random_cq();
        CHECK(std::abs(cq_H(a * b) - cq_H(a) * cq_H(b)) < 1e-12);
    }
    CHECK(cq_H(ComplexQuaternion::one()) == cplx(1.0, 0.0));
}

TEST_CASE("hat and bar") {
    const cplx i(0.0, 1.0);
    // hat(iI + J) = -iI + J
    const ComplexQuaternion q(0.0, i, 1.0, 0.0);
    const ComplexQuaternion hq = cq_hat(q);
    CHECK(hq.x == -i);
    CHECK(hq.y == cplx(1.0, 0.0));
    // bar(g) g = 1 for unit complex quaternions
    for (int rep = 0; rep < 100; ++rep) {
        const ComplexQuaternion g = random_unit_cq();
        CHECK((cq_mul(cq_bar(g), g) - ComplexQuaternion::one()).max_abs() < 1e-10);
    }
}

TEST_CASE("minkowski embedding") {
    const ComplexQuaternion e0 = minkowski_embed(1, 0, 0, 0);
    CHECK(e0.w == cplx(0.0, 1.0));  // i 1
    CHECK(e0.x == cplx(0.0, 0.0));
    const ComplexQuaternion e3 = minkowski_embed(0, 0, 0, 1);
    CHECK(e3.z == cplx(-1.0, 0.0));  // JI = -K
    CHECK(minkowski_embed(0, 0, 0, 0).max_abs() == 0.0);
    // H(X,X) = <x,x> with signature (-,+,+,+)
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const double x0 = u(rng()), x1 = u(rng()), x2 = u(rng()), x3 = u(rng());
        const ComplexQuaternion X = minkowski_embed(x0, x1, x2, x3);
        const double dot = -x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3;
        CHECK(std::abs(cq_H(X) - cplx(dot, 0.0)) < 1e-14);
    }
}

TEST_CASE("ideal element round trip and projectors") {
    for (int rep = 0; rep < 50; ++rep) {
        const IdealElement g(rc(), rc());
        const IdealElement g2 = IdealElement::from_quaternion(g.quaternion());
        CHECK(std::abs(g.a - g2.a) < 1e-15);
        CHECK(std::abs(g.b - g2.b) < 1e-15);
        // projector annihilation of the opposite part
        const ComplexQuaternion q = random_cq();
        const ComplexQuaternion plus = project_plus(q), minus = project_minus(q);
        CHECK((plus + minus - q).max_abs() < 1e-15);
        CHECK(project_minus(plus).max_abs() < 1e-15);
        CHECK(project_plus(minus).max_abs() < 1e-15);
        CHECK((project_plus(plus) - plus).max_abs() < 1e-15);
    }
    CHECK_THROWS_AS(IdealElement::from_quaternion(random_cq() + ComplexQuaternion::one()),
                    std::runtime_error);
}

TEST_CASE("hermitian product and norm") {
    const IdealElement unit(1.0, 0.0);  // (1/2)(1+iI)
    CHECK(ideal_norm(unit) == doctest::Approx(1.0));
    const IdealElement neg(0.0, 1.0);
    CHECK(ideal_norm(neg) == doctest::Approx(-1.0));
    // J hat(g) I is hermitian-orthogonal to g
    for (int rep = 0; rep < 100; ++rep) {
        const IdealElement g(rc(), rc());
        const ComplexQuaternion jgi =
            cq_mul(cq_mul(ComplexQuaternion::J(), cq_hat(g.quaternion())), ComplexQuaternion::I());
        const IdealElement w = IdealElement::from_quaternion(jgi);
        CHECK(std::abs(ideal_inner(w, g)) < 1e-12);
    }
}

TEST_CASE("pi projection") {
    // base point
    const H2Point p = pi_project(IdealElement(1.0, 0.0));
    CHECK(p.x0 == doctest::Approx(1.0));
    CHECK(p.x2 == doctest::Approx(0.0));
    CHECK(p.x3 == doctest::Approx(0.0));

    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        IdealElement g(rc(), rc());
        if (ideal_norm(g) <= 0.05) continue;
        const H2Point q = pi_project(g);
        CHECK(std::abs(q.constraint()) < 1e-10);
        // scaling by positive reals and phases does not move the point
        const double lam = 0.5 + std::abs(u(rng()));
        const cplx phase = std::polar(1.0, 3.0 * u(rng()));
        const H2Point q2 = pi_project(lam * phase * g);
        CHECK(q2.x0 == doctest::Approx(q.x0).epsilon(1e-10));
        CHECK(q2.x2 == doctest::Approx(q.x2).epsilon(1e-10));
        CHECK(q2.x3 == doctest::Approx(q.x3).epsilon(1e-10));
    }
    CHECK_THROWS_AS(pi_project(IdealElement(0.0, 1.0)), std::runtime_error);
}

TEST_CASE("even isomorphism") {
    static const Signature sig(1, 3);
    CHECK((even_iso(Multivector::scalar(sig, 1.0)) - ComplexQuaternion::one()).max_abs() == 0.0);

    // product preserving on random even elements
    for (int rep = 0; rep < 200; ++rep) {
        const Multivector a = random_even13(), b = random_even13();
        const ComplexQuaternion lhs = even_iso(geometric_product(a, b));
        const ComplexQuaternion rhs = cq_mul(even_iso(a), even_iso(b));
        CHECK((lhs - rhs).max_abs() < 1e-12);
    }

    // generator pairs multiply consistently: image of e_i e_j equals the
    // product of the images computed through the matrix model
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            const Multivector eij =
                geometric_product(Multivector::basis(sig, i), Multivector::basis(sig, j));
            const ComplexQuaternion direct = even_iso(eij);
            auto X = [](int k) {
                return minkowski_embed(k == 0, k == 1, k == 2, k == 3);
            };
            const ComplexQuaternion expect = cq_mul(X(i), cq_hat(X(j)));
            CHECK((direct - expect).max_abs() < 1e-15);
        }

    // reversion corresponds to bar
    for (int rep = 0; rep < 100; ++rep) {
        const Multivector a = random_even13();
        CHECK((even_iso(reversion(a)) - cq_bar(even_iso(a))).max_abs() < 1e-12);
    }

    CHECK_THROWS_AS(even_iso(Multivector::basis(sig, 0)), std::invalid_argument);
}

TEST_CASE("spin(1,2) conjugation preserves the R^{1,2} span") {
    // v = a0 + a1 I + i a2 J + i a3 JI with H(v,v) = 1: X -> bar(v) X hat(v)
    // maps span{i1, J, JI} to itself
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const cplx i(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        double a0 = u(rng()), a1 = u(rng()), a2 = u(rng()), a3 = u(rng());
        double n = a0 * a0 + a1 * a1 - a2 * a2 - a3 * a3;
        if (n <= 0.05) continue;
        const double s = 1.0 / std::sqrt(n);
        a0 *= s; a1 *= s; a2 *= s; a3 *= s;
        const ComplexQuaternion v(a0, a1, i * a2, -i * a3);  // i a3 JI = -i a3 K
        CHECK(std::abs(cq_H(v) - cplx(1.0, 0.0)) < 1e-12);
        const ComplexQuaternion X = minkowski_embed(u(rng()), 0.0, u(rng()), u(rng()));
        const ComplexQuaternion Y = cq_mul(cq_mul(cq_bar(v), X), cq_hat(v));
        // result has no I component and real (i1, J, JI) pattern
        CHECK(std::abs(Y.x) < 1e-12);
        CHECK(std::abs(Y.w.real()) < 1e-12);
        CHECK(std::abs(Y.y.imag()) < 1e-12);
        CHECK(std::abs(Y.z.imag()) < 1e-12);
        // and the Minkowski norm is preserved
        CHECK(std::abs(cq_H(Y) - cq_H(X)) < 1e-12);
    }
}

TEST_CASE("decode rejects off-model values") {
    CHECK_THROWS_AS(decode_h2(ComplexQuaternion::one()), std::runtime_error);
    CHECK_THROWS_AS(decode_h2(minkowski_embed(-1.0, 0.0, 0.0, 0.0)), std::runtime_error);
    const H2Point p = decode_h2(minkowski_embed(1.0, 0.0, 0.0, 0.0));
    CHECK(p.x0 == 1.0);
}

}  // TEST_SUITE
