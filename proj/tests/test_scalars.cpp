#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tracefactor/gaussian.hpp"
#include "tracefactor/modular.hpp"
#include "tracefactor/quaternion.hpp"
#include "tracefactor/rational.hpp"
#include "tracefactor/sampling.hpp"

using namespace tracefactor;

namespace {

template <RingScalar R>
void ring_axioms(Sampler& s, const R& model, int rounds = 1000) {
    for (int t = 0; t < rounds; ++t) {
        R a = s.element(model), b = s.element(model), c = s.element(model);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((b + c) * a == b * a + c * a);
    }
}

double qdist(const QuaternionF& a, const QuaternionF& b) { return abs_value(a - b); }

}  // namespace

TEST_CASE("ring axioms hold on random triples for every exact scalar") {
    Sampler s(42);
    ring_axioms(s, Rational(0));
    ring_axioms(s, Gaussian());
    ring_axioms(s, QuaternionQ());
    ring_axioms(s, PrimeField(0, 5));
    ring_axioms(s, Modular(0, 6));
}

TEST_CASE("float quaternion axioms hold to 1e-12 on unit-norm inputs") {
    Sampler s(43);
    for (int t = 0; t < 1000; ++t) {
        auto unitize = [&] {
            QuaternionF q = s.quaternionf();
            double n = abs_value(q);
            if (n < 1e-3) q = QuaternionF(1.0);
            n = abs_value(q);
            return QuaternionF(q.r() / n, q.i() / n, q.j() / n, q.k() / n);
        };
        QuaternionF a = unitize(), b = unitize(), c = unitize();
        CHECK(qdist((a * b) * c, a * (b * c)) < 1e-12);
        CHECK(qdist(a * (b + c), a * b + a * c) < 1e-12);
    }
}

TEST_CASE("rational inverse and reduction") {
    Rational r(BigInt(2), BigInt(3));
    CHECK(r.inverse() == Rational(BigInt(3), BigInt(2)));
    CHECK(Rational(BigInt(4), BigInt(6)) == r);
    CHECK(Rational(BigInt(-4), BigInt(-6)) == r);
    CHECK_THROWS_AS(Rational(0).inverse(), zero_inverse);
    CHECK(Rational::parse("-7/2").str() == "-7/2");
    CHECK(Rational::parse("5").str() == "5");
    CHECK_THROWS_AS(Rational::parse("1//2"), parse_error);
    CHECK_THROWS_AS(Rational::parse(""), parse_error);
}

TEST_CASE("quaternion multiplication table and inverses") {
    const QuaternionQ i = QuaternionQ::unit_i(), j = QuaternionQ::unit_j(),
                      k = QuaternionQ::unit_k();
    const QuaternionQ one = QuaternionQ(Rational(1));
    CHECK(i * i == -one);
    CHECK(j * j == -one);
    CHECK(k * k == -one);
    CHECK(i * j == k);
    CHECK(j * i == -k);
    CHECK(i * j != j * i);  // noncommutativity witness
    CHECK(i.inverse() == -i);

    QuaternionQ q(Rational(1), Rational(1), Rational(1), Rational(1));
    QuaternionQ qi = q.inverse();
    CHECK(q * qi == one);
    CHECK(qi * q == one);
    // (1+i+j+k)^-1 = (1-i-j-k)/4
    CHECK(qi == QuaternionQ(Rational(BigInt(1), BigInt(4)), Rational(BigInt(-1), BigInt(4)),
                            Rational(BigInt(-1), BigInt(4)), Rational(BigInt(-1), BigInt(4))));
}

TEST_CASE("conjugate and norm") {
    auto [cj0, n0] = quaternion_conjugate_norm(QuaternionQ());
    CHECK(cj0.is_zero());
    CHECK(n0 == Rational(0));
    auto [cji, ni] = quaternion_conjugate_norm(QuaternionQ::unit_i());
    CHECK(cji == -QuaternionQ::unit_i());
    CHECK(ni == Rational(1));
    QuaternionQ q(Rational(1), Rational(2), Rational(2), Rational(0));
    auto [cjq, nq] = quaternion_conjugate_norm(q);
    CHECK(nq == Rational(9));
    CHECK(q * cjq == QuaternionQ(Rational(9)));

    Sampler s(7);
    for (int t = 0; t < 200; ++t) {
        QuaternionQ a = s.quaternion(), b = s.quaternion();
        CHECK((a * b).norm() == a.norm() * b.norm());  // multiplicative norm
    }
}

TEST_CASE("inverse is an involution on nonzero elements") {
    Sampler s(11);
    for (int t = 0; t < 200; ++t) {
        QuaternionQ q = s.quaternion();
        if (q.is_zero()) continue;
        CHECK(q.inverse().inverse() == q);
        Rational r = s.rational();
        if (!r.is_zero()) CHECK(r.inverse().inverse() == r);
    }
}

TEST_CASE("modular arithmetic and units") {
    Modular five(5, 6);
    CHECK(five.inverse() == Modular(5, 6));
    CHECK_THROWS_AS(Modular(2, 6).inverse(), not_a_unit);
    CHECK_THROWS_AS(Modular(0, 6).inverse(), zero_inverse);
    CHECK(PrimeField(3, 7).inverse() == PrimeField(5, 7));
    CHECK_THROWS_AS((Modular(1, 6) + Modular(1, 5)), ring_mismatch);
}

TEST_CASE("float complexification rotates onto the complex line") {
    // pure real input: p = 1
    auto c1 = quat_complexify(QuaternionF(2.5, 0, 0, 0));
    CHECK(c1.p == QuaternionF(1.0));
    CHECK(c1.x == doctest::Approx(2.5));
    CHECK(c1.s == 0.0);
    // j conjugates onto i with s = 1
    auto cj = quat_complexify(QuaternionF(0, 0, 1, 0));
    CHECK(cj.x == doctest::Approx(0.0));
    CHECK(cj.s == doctest::Approx(1.0));
    QuaternionF lhs = cj.p.inverse() * QuaternionF(0, 0, 1, 0) * cj.p;
    CHECK(qdist(lhs, QuaternionF(0, 1, 0, 0)) < 1e-9);
    // 1+i+j+k: x = 1, s = sqrt(3)
    QuaternionF q(1, 1, 1, 1);
    auto cq = quat_complexify(q);
    CHECK(cq.x == doctest::Approx(1.0));
    CHECK(cq.s == doctest::Approx(std::sqrt(3.0)));
    QuaternionF got = cq.p.inverse() * q * cq.p;
    CHECK(qdist(got, QuaternionF(cq.x, cq.s, 0, 0)) < 1e-9 * (1 + abs_value(q)));

    Sampler s(13);
    for (int t = 0; t < 500; ++t) {
        QuaternionF r = s.quaternionf();
        auto c = quat_complexify(r);
        CHECK(abs_value(c.p) > 0);
        CHECK(c.s >= 0);
        QuaternionF form(c.x, c.s, 0, 0);
        CHECK(qdist(c.p.inverse() * r * c.p, form) < 1e-9 * (1 + abs_value(r)));
    }
}

TEST_CASE("exact complexification applies on perfect-square vector norms") {
    // 2i+2j+k has vector norm 9
    QuaternionQ q(Rational(3), Rational(2), Rational(2), Rational(1));
    ComplexifyQ c;
    REQUIRE(quat_complexify_exact(q, c));
    CHECK(c.x == Rational(3));
    CHECK(c.s == Rational(3));
    CHECK(c.p.inverse() * q * c.p == QuaternionQ(Rational(3), Rational(3), Rational(0), Rational(0)));
    // 1+i+j+k has vector norm 3: not a perfect square
    QuaternionQ bad(Rational(1), Rational(1), Rational(1), Rational(1));
    CHECK_FALSE(quat_complexify_exact(bad, c));
}
