#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tracefactor/elimination.hpp"
#include "tracefactor/matrix.hpp"
#include "tracefactor/modular.hpp"
#include "tracefactor/quaternion.hpp"
#include "tracefactor/rational.hpp"
#include "tracefactor/sampling.hpp"

using namespace tracefactor;

namespace {

const QuaternionQ qi = QuaternionQ::unit_i();
const QuaternionQ qj = QuaternionQ::unit_j();
const QuaternionQ qk = QuaternionQ::unit_k();
const QuaternionQ q1 = QuaternionQ(Rational(1));
const QuaternionQ q0 = QuaternionQ();

// the rotation-to-nilpotent pair used repeatedly below
Matrix<QuaternionQ> rotation_like() {
    return Matrix<QuaternionQ>::from_rows({{qi, qj}, {-qj, qi}});
}
Matrix<QuaternionQ> change_of_basis() {
    return Matrix<QuaternionQ>::from_rows({{qj, q0}, {qi, q1}});
}

}  // namespace

TEST_CASE("multiplication keeps scalar order over the quaternions") {
    auto a = rotation_like();
    auto p = change_of_basis();
    // P^-1 * A * P lands on the elementary nilpotent
    auto t = conjugate(a, p);
    auto e12 = Matrix<QuaternionQ>::from_rows({{q0, q1}, {q0, q0}});
    CHECK(t == e12);
    // I * A = A
    CHECK(Matrix<QuaternionQ>::identity(2, q0) * a == a);
    // the swap times the antidiagonal gives the diagonal
    QuaternionQ a1 = qi, a2 = qj;
    auto swap = Matrix<QuaternionQ>::from_rows({{q0, q1}, {q1, q0}});
    auto anti = Matrix<QuaternionQ>::from_rows({{q0, a2}, {a1, q0}});
    CHECK(swap * anti == diagonal_matrix<QuaternionQ>({a1, a2}));
}

TEST_CASE("trace and similarity over a noncommutative ring") {
    // diag(a, -a) is traceless but its conjugate by diag(1, b) is not
    QuaternionQ a = qi, b = qj;
    auto d = diagonal_matrix<QuaternionQ>({a, -a});
    CHECK(is_traceless(d));
    auto pb = diagonal_matrix<QuaternionQ>({q1, b});
    auto conj = pb * d * inverse(pb);
    CHECK(conj.trace() == a - b * a * b.inverse());
    CHECK_FALSE(is_traceless(conj));
    CHECK(Matrix<QuaternionQ>(3, 3, q0).trace() == q0);
    CHECK_THROWS_AS(Matrix<QuaternionQ>(2, 3, q0).trace(), not_square);
}

TEST_CASE("nilpotent with nonzero trace exists over the quaternions") {
    auto a = rotation_like();
    CHECK((a * a).is_zero());
    CHECK(is_nilpotent(a));
    CHECK(a.trace() == qi + qi);
    CHECK_FALSE(is_traceless(a));
}

TEST_CASE("trace is additive and conjugation-invariant over fields") {
    Sampler s(3);
    const Rational model(0);
    for (int t = 0; t < 50; ++t) {
        auto a = s.matrix(3, 3, model);
        auto b = s.matrix(3, 3, model);
        CHECK((a + b).trace() == a.trace() + b.trace());
        auto p = s.invertible_matrix(3, model);
        CHECK(conjugate(a, p).trace() == a.trace());
    }
}

TEST_CASE("companion matrices in both sign conventions") {
    // x^2 + a1 x + a0 with plain last column
    Rational a0(5), a1(7);
    auto plain = companion<Rational>({{a0, a1}, CompanionSign::plain});
    CHECK(plain == Matrix<Rational>::from_rows({{Rational(0), a0}, {Rational(1), a1}}));
    auto negated = companion<Rational>({{a0, a1}, CompanionSign::negated});
    CHECK(negated == Matrix<Rational>::from_rows({{Rational(0), -a0}, {Rational(1), -a1}}));
    // f = x: 1x1
    CHECK(companion<Rational>({{Rational(0)}, CompanionSign::negated}) ==
          Matrix<Rational>(1, 1, Rational(0)));
    // f = x^3: subdiagonal-ones nilpotent
    auto cube = companion<Rational>({{Rational(0), Rational(0), Rational(0)}, CompanionSign::plain});
    CHECK(is_nilpotent(cube));
    CHECK(cube(1, 0) == Rational(1));
    CHECK(cube(2, 1) == Rational(1));
}

TEST_CASE("permutation matrices act as P e_i = e_sigma(i)") {
    Permutation sigma({1, 2, 0});
    auto p = permutation_matrix(sigma, Rational(0));
    Matrix<Rational> e0(3, 1, Rational(0));
    e0(0, 0) = Rational(1);
    auto img = p * e0;
    CHECK(img(1, 0) == Rational(1));
    CHECK(permutation_matrix(Permutation::identity(4), Rational(0)) ==
          Matrix<Rational>::identity(4, Rational(0)));
    // an n-cycle has no fixed points, so its matrix is traceless
    CHECK(is_traceless(permutation_matrix(Permutation::forward_cycle(5), Rational(0))));
    CHECK_THROWS_AS(Permutation({0, 0, 1}), ring_error);
}

TEST_CASE("fixed points against characteristic: trace of a permutation matrix") {
    // 3 fixed points vanish mod 3
    Permutation sigma({0, 1, 2, 4, 3});
    CHECK(sigma.fixed_points() == 3);
    CHECK(is_traceless(permutation_matrix(sigma, PrimeField(0, 3))));
    CHECK_FALSE(is_traceless(permutation_matrix(sigma, Rational(0))));
}

TEST_CASE("jordan-like blocks") {
    auto j2 = jordan_like(2, qi, qj);
    CHECK(j2 == Matrix<QuaternionQ>::from_rows({{qi, qj}, {q0, qi}}));
    auto j1 = jordan_like(1, qi, qj);
    CHECK(j1(0, 0) == qi);
}

TEST_CASE("block_diag of traceless matrices is traceless") {
    Sampler s(4);
    for (int t = 0; t < 50; ++t) {
        auto a = s.matrix(2, 2, QuaternionQ());
        auto b = s.matrix(3, 3, QuaternionQ());
        a(1, 1) = -a(0, 0);
        b(2, 2) = -(b(0, 0) + b(1, 1));
        CHECK(is_traceless(block_diag<QuaternionQ>({a, b})));
    }
}

TEST_CASE("unitriangular and strict-upper predicates") {
    auto u = Matrix<Rational>::from_rows(
        {{Rational(1), Rational(5)}, {Rational(0), Rational(1)}});
    CHECK(is_unitriangular(u, Triangle::upper));
    CHECK_FALSE(is_unitriangular(u, Triangle::lower));
    CHECK(is_strictly_upper(Matrix<Rational>::from_rows(
        {{Rational(0), Rational(3)}, {Rational(0), Rational(0)}})));
    CHECK(is_nilpotent(Matrix<Rational>::from_rows(
        {{Rational(0), Rational(3)}, {Rational(0), Rational(0)}})));
    CHECK(is_traceless(diagonal_matrix<Rational>({Rational(1), Rational(-1)})));
}

TEST_CASE("multiplication is associative on random triples over every ring") {
    Sampler s(5);
    auto check_ring = [&](auto model) {
        for (int t = 0; t < 30; ++t) {
            auto a = s.matrix(3, 3, model);
            auto b = s.matrix(3, 3, model);
            auto c = s.matrix(3, 3, model);
            CHECK((a * b) * c == a * (b * c));
        }
    };
    check_ring(Rational(0));
    check_ring(Gaussian());
    check_ring(QuaternionQ());
    check_ring(PrimeField(0, 5));
    check_ring(Modular(0, 6));
}

TEST_CASE("shape errors") {
    Matrix<Rational> a(2, 3, Rational(0)), b(2, 3, Rational(0));
    CHECK_THROWS_AS(a * b, dimension_mismatch);
    CHECK_THROWS_AS((Matrix<Modular>(2, 2, Modular(0, 5)) * Matrix<Modular>(2, 2, Modular(0, 7))),
                    ring_mismatch);
}
