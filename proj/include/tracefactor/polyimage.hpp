#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tracefactor/canonical.hpp"
#include "tracefactor/matrix.hpp"
#include "tracefactor/modular.hpp"
#include "tracefactor/quaternion.hpp"
#include "tracefactor/semitraceless.hpp"
#include "tracefactor/traceless.hpp"

// Applications of the factorizations: multilinear polynomial images,
// additive and generalized commutator decompositions, the quaternion
// pure-product identity, and elementwise decomposition of semisimple
// presentations.

namespace tracefactor {

struct arity_mismatch : ring_error {
    arity_mismatch() : ring_error("polynomial arity does not match tuple size") {}
};
struct small_center : ring_error {
    small_center() : ring_error("center too small for distinct diagonal weights") {}
};
struct budget_exceeded : ring_error {
    budget_exceeded() : ring_error("enumeration budget exceeded") {}
};
struct field_component : ring_error {
    field_component() : ring_error("semisimple data contains a commutative field component") {}
};

// sum over permutations sigma of lambda_sigma * x_{sigma(1)} ... x_{sigma(m)},
// scalar coefficients applied on the left
template <RingScalar R>
struct MultilinearPolynomial {
    std::size_t arity;
    std::vector<std::pair<Permutation, R>> terms;

    static MultilinearPolynomial commutator(const R& model) {
        return {2,
                {{Permutation({0, 1}), R::one(model)}, {Permutation({1, 0}), -R::one(model)}}};
    }
    static MultilinearPolynomial generalized_commutator(const R& model) {
        return {3,
                {{Permutation({0, 1, 2}), R::one(model)}, {Permutation({2, 1, 0}), -R::one(model)}}};
    }
};

template <RingScalar R>
Matrix<R> eval_multilinear(const MultilinearPolynomial<R>& f, const std::vector<Matrix<R>>& xs) {
    if (xs.size() != f.arity) throw arity_mismatch();
    if (xs.empty()) throw ring_error("empty polynomial evaluation");
    const std::size_t n = xs[0].rows();
    Matrix<R> acc(n, xs[0].cols(), xs[0].model());
    for (const auto& [sigma, lambda] : f.terms) {
        if (sigma.size() != f.arity) throw arity_mismatch();
        Matrix<R> prod = xs[sigma(0)];
        for (std::size_t t = 1; t < f.arity; ++t) prod = prod * xs[sigma(t)];
        acc = acc + scale_left(lambda, prod);
    }
    return acc;
}

// --- additive commutators ----------------------------------------------------

template <DivisionScalar R>
struct CommutatorWitness {
    Matrix<R> x;
    Matrix<R> y;

    Matrix<R> value() const { return x * y - y * x; }
};

namespace detail {

// n distinct central weights 0, 1, ..., n-1; characteristic p needs p >= n
template <DivisionScalar R>
std::vector<R> central_weights(std::size_t n, const R& model) {
    long ch = ring_traits<R>::characteristic(model);
    if (ch != 0 && ch < static_cast<long>(n)) throw small_center();
    std::vector<R> d;
    for (std::size_t i = 0; i < n; ++i) d.push_back(ring_int(model, static_cast<long>(i)));
    return d;
}

}  // namespace detail

namespace detail {

// Sylvester solve X Y - Y X = b for X = diag(d_0, ..., d_{n-2}, x_last)
// with distinct central d_i; b has zero diagonal except possibly a corner
// entry handled by x_last (central when the corner vanishes).
template <DivisionScalar R>
std::optional<CommutatorWitness<R>> corner_sylvester(const Matrix<R>& b) {
    const std::size_t n = b.rows();
    auto d = central_weights(n, b.model());
    const R corner = b(n - 1, n - 1);
    R x_last = d[n - 1];
    Matrix<R> y(n, n, b.model());
    if constexpr (std::is_same_v<R, QuaternionQ>) {
        if (!corner.is_zero()) {
            // the corner moves inside the commutator coset, so it is pure;
            // a pure x perpendicular to it makes [x, .] reach it
            if (!corner.r().is_zero()) return std::nullopt;
            Rational s1 = corner.i(), s2 = corner.j(), s3 = corner.k();
            x_last = (!s1.is_zero() || !s2.is_zero())
                         ? QuaternionQ(Rational(0), -s2, s1, Rational(0))
                         : QuaternionQ(Rational(0), Rational(0), -s3, s2);
            auto ynn = solve_sided(x_last, x_last, corner);
            if (!ynn) return std::nullopt;
            y(n - 1, n - 1) = *ynn;
        }
    } else {
        if (!corner.is_zero()) return std::nullopt;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || b(i, j).is_zero()) continue;
            if constexpr (std::is_same_v<R, QuaternionQ>) {
                R xi = i == n - 1 ? x_last : d[i];
                R xj = j == n - 1 ? x_last : d[j];
                auto yij = solve_sided(xi, xj, b(i, j));
                if (!yij) return std::nullopt;
                y(i, j) = *yij;
            } else {
                y(i, j) = (d[i] - d[j]).inverse() * b(i, j);
            }
        }
    std::vector<R> xd = d;
    xd[n - 1] = x_last;
    CommutatorWitness<R> w{diagonal_matrix(xd), y};
    if (w.value() != b) return std::nullopt;
    return w;
}

}  // namespace detail

// A zero-diagonal (or traceless non-central, via the diagonal sweep)
// matrix as a single additive commutator: X diagonal with distinct
// central weights, Y the Sylvester quotient of the entries. Over the
// quaternions a swept-but-stuck corner entry is absorbed by a non-central
// last weight, since an exact zero diagonal is not always reachable.
template <DivisionScalar R>
CommutatorWitness<R> commutator_witness(const Matrix<R>& t, std::uint64_t seed = 1) {
    if (!t.square()) throw not_square();
    const std::size_t n = t.rows();
    if (t.is_zero()) return {Matrix<R>(n, n, t.model()), Matrix<R>(n, n, t.model())};
    bool corner_only = true;
    for (std::size_t i = 0; i + 1 < n; ++i) corner_only = corner_only && t(i, i).is_zero();
    if (corner_only) {
        if (auto w = detail::corner_sylvester(t)) return *w;
    }
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 32; ++attempt) {
        Matrix<R> p0 = attempt == 0 ? Matrix<R>::identity(n, t.model())
                                    : detail::seeded_random_invertible(n, t.model(), rng);
        Matrix<R> b0 = attempt == 0 ? t : conjugate(t, p0);
        auto w = detail::corner_diagonal_sweep(t, p0, b0);
        if (!w) continue;
        auto inner = detail::corner_sylvester(w->t);
        if (!inner) continue;
        Matrix<R> pinv = inverse(w->p);
        return {w->p * inner->x * pinv, w->p * inner->y * pinv};
    }
    throw no_witness_found("commutator witness");
}

// Any matrix over a division ring with a large-enough center as a product
// of at most four exactly-expanding additive commutators: one per
// traceless / semi-traceless factor.
template <DivisionScalar R>
std::vector<CommutatorWitness<R>> factor_commutators(const Matrix<R>& a, std::uint64_t seed = 1) {
    if (!a.square()) throw not_square();
    const std::size_t n = a.rows();
    if (n < 2) throw ring_error("commutator factorization needs size >= 2");
    (void)detail::central_weights(n, a.model());  // SmallCenter check up front
    if (a.is_zero()) return {CommutatorWitness<R>{Matrix<R>(n, n, a.model()), Matrix<R>(n, n, a.model())}};
    if (is_traceless(a) && !is_central_matrix(a)) return {commutator_witness(a, seed)};
    std::vector<CommutatorWitness<R>> out;
    if constexpr (ring_traits<R>::is_field) {
        auto tf = factor_field(a, seed);
        for (const auto& f : tf.factors) out.push_back(commutator_witness(f, seed));
    } else {
        for (int attempt = 0; attempt < 4; ++attempt) {
            out.clear();
            try {
                auto sf = factor_semitraceless(a, seed + 31 * attempt);
                for (const auto& f : sf.factors) {
                    auto inner = commutator_witness(f.witness.t, seed + attempt);
                    Matrix<R> pinv = inverse(f.witness.p);
                    out.push_back({f.witness.p * inner.x * pinv, f.witness.p * inner.y * pinv});
                }
                break;
            } catch (const no_witness_found&) {
                if (attempt == 3) throw;
            }
        }
    }
    return out;
}

// --- generalized commutators -------------------------------------------------

template <DivisionScalar R>
struct GeneralizedCommutatorWitness {
    Matrix<R> a;
    Matrix<R> b;
    Matrix<R> c;

    Matrix<R> value() const { return a * b * c - c * b * a; }
};

// every additive commutator XY - YX is the generalized commutator with
// (a, b, c) = (X, Y, I): XYI - IYX
template <DivisionScalar R>
std::vector<GeneralizedCommutatorWitness<R>> factor_generalized_commutators(const Matrix<R>& a,
                                                                            std::uint64_t seed = 1) {
    const std::size_t n = a.rows();
    if (a.square() && a.is_zero()) {
        Matrix<R> z(n, n, a.model());
        return {GeneralizedCommutatorWitness<R>{z, z, z}};
    }
    std::vector<GeneralizedCommutatorWitness<R>> out;
    for (const auto& cw : factor_commutators(a, seed))
        out.push_back({cw.x, cw.y, Matrix<R>::identity(n, a.model())});
    return out;
}

// --- scalar quaternion generalized commutator --------------------------------

// q = v b w - w b v with pure rational v, w: for pure v, w with v.w = 0
// the map b -> v b w - w b v has image spanned by 1 and the cross product
// v x w, so choosing v perpendicular to the vector part of q and
// w = (vector part) x v solves in closed form.
inline GeneralizedCommutatorWitness<QuaternionQ> quaternion_generalized_commutator(
    const QuaternionQ& q) {
    const Rational zero(0), one(1), two(2);
    auto pure = [](Rational a, Rational b, Rational c) {
        return QuaternionQ(Rational(0), std::move(a), std::move(b), std::move(c));
    };
    auto as_matrix = [](const QuaternionQ& v) {
        Matrix<QuaternionQ> m(1, 1, v);
        m(0, 0) = v;
        return m;
    };
    if (q.is_zero()) {
        QuaternionQ z;
        return {as_matrix(z), as_matrix(z), as_matrix(z)};
    }
    Rational x = q.r(), q1 = q.i(), q2 = q.j(), q3 = q.k();
    if (q1.is_zero() && q2.is_zero() && q3.is_zero()) {
        // real q: i b j - j b i with b = (x/2) k
        return {as_matrix(QuaternionQ::unit_i()), as_matrix(pure(zero, zero, x / two)),
                as_matrix(QuaternionQ::unit_j())};
    }
    QuaternionQ v = (!q1.is_zero() || !q2.is_zero()) ? pure(-q2, q1, zero) : pure(zero, -q3, q2);
    // w = qvec x v
    Rational w1 = q2 * v.k() - q3 * v.j();
    Rational w2 = q3 * v.i() - q1 * v.k();
    Rational w3 = q1 * v.j() - q2 * v.i();
    QuaternionQ w = pure(w1, w2, w3);
    Rational v_norm = v.i() * v.i() + v.j() * v.j() + v.k() * v.k();
    Rational w_norm = w1 * w1 + w2 * w2 + w3 * w3;
    Rational b0 = one / (two * v_norm);
    Rational lam = x / (two * w_norm);
    QuaternionQ b = QuaternionQ(b0) + pure(lam * q1, lam * q2, lam * q3);
    GeneralizedCommutatorWitness<QuaternionQ> out{as_matrix(v), as_matrix(b), as_matrix(w)};
    if (out.value()(0, 0) != q) throw no_witness_found("scalar generalized commutator");
    return out;
}

// --- quaternion pure product (floating point) --------------------------------

// alpha = q1 * q2 with both factors pure: q1 = p j p^-1 and
// q2 = p (-x j + s k) p^-1 where p^-1 alpha p = x + s i.
inline std::pair<QuaternionF, QuaternionF> quaternion_pure_product(const QuaternionF& alpha) {
    auto c = quat_complexify(alpha);
    QuaternionF pinv = c.p.inverse();
    QuaternionF q1 = c.p * QuaternionF::unit_j() * pinv;
    QuaternionF target(0.0, 0.0, -c.x, c.s);  // -x j + s k
    QuaternionF q2 = c.p * target * pinv;
    return {q1, q2};
}

// exact-rational variant, available when the vector norm is a perfect square
inline std::optional<std::pair<QuaternionQ, QuaternionQ>> quaternion_pure_product_exact(
    const QuaternionQ& alpha) {
    ComplexifyQ c;
    if (!quat_complexify_exact(alpha, c)) return std::nullopt;
    QuaternionQ pinv = c.p.inverse();
    QuaternionQ q1 = c.p * QuaternionQ::unit_j() * pinv;
    QuaternionQ target(Rational(0), Rational(0), -c.x, c.s);
    QuaternionQ q2 = c.p * target * pinv;
    return std::make_pair(q1, q2);
}

// --- exhaustive image oracle --------------------------------------------------

struct NotInImage {};

// exhaustive search for a preimage tuple of `target` under f evaluated on
// all of M_n(F_p): a miss is a proof at this size
inline std::optional<std::vector<Matrix<PrimeField>>> image_oracle(
    const MultilinearPolynomial<PrimeField>& f, std::int64_t p, std::size_t n,
    const Matrix<PrimeField>& target, std::uint64_t budget = 100000000ull) {
    const std::size_t cells = n * n;
    double total = 1.0;
    for (std::size_t t = 0; t < f.arity; ++t)
        for (std::size_t c = 0; c < cells; ++c) total *= static_cast<double>(p);
    if (total > static_cast<double>(budget)) throw budget_exceeded();
    const PrimeField model(0, p);
    std::vector<std::size_t> digits(f.arity * cells, 0);
    auto build = [&](std::size_t t) {
        Matrix<PrimeField> m(n, n, model);
        for (std::size_t c = 0; c < cells; ++c)
            m(c / n, c % n) = PrimeField(static_cast<std::int64_t>(digits[t * cells + c]), p);
        return m;
    };
    while (true) {
        std::vector<Matrix<PrimeField>> xs;
        for (std::size_t t = 0; t < f.arity; ++t) xs.push_back(build(t));
        if (eval_multilinear(f, xs) == target) return xs;
        std::size_t pos = 0;
        while (pos < digits.size()) {
            if (++digits[pos] < static_cast<std::size_t>(p)) break;
            digits[pos] = 0;
            ++pos;
        }
        if (pos == digits.size()) return std::nullopt;
    }
}

}  // namespace tracefactor
