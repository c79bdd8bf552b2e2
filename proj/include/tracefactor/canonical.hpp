#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "tracefactor/elimination.hpp"
#include "tracefactor/matrix.hpp"
#include "tracefactor/polynomial.hpp"
#include "tracefactor/rational.hpp"
#include "tracefactor/ring.hpp"

// Similarity machinery: rational canonical form as companion blocks,
// nilpotent and unipotent normal forms, zero-diagonal similarity.

namespace tracefactor {

struct not_nilpotent : ring_error {
    not_nilpotent() : ring_error("matrix is not nilpotent") {}
};
struct not_unipotent : ring_error {
    not_unipotent() : ring_error("matrix is not unipotent") {}
};
struct no_witness_found : ring_error {
    explicit no_witness_found(const std::string& what) : ring_error("no witness found: " + what) {}
};

// Invertible P together with T = P^-1 * source * P; the pair certifies
// source = P * T * P^-1 by plain multiplication.
template <DivisionScalar R>
struct SimilarityWitness {
    Matrix<R> p;
    Matrix<R> t;

    bool certifies(const Matrix<R>& source) const {
        return is_invertible(p) && conjugate(source, p) == t;
    }
};

namespace detail {

// y_{k+1} = A * y_k starting from y_0 = v
template <DivisionScalar R>
std::vector<Matrix<R>> iterate_vectors(const Matrix<R>& a, const Matrix<R>& v, std::size_t count) {
    std::vector<Matrix<R>> ys{v};
    for (std::size_t k = 1; k < count; ++k) ys.push_back(a * ys.back());
    return ys;
}

template <DivisionScalar R>
Matrix<R> columns_to_matrix(const std::vector<Matrix<R>>& cols, std::size_t upto) {
    Matrix<R> m(cols[0].rows(), upto, cols[0].model());
    for (std::size_t j = 0; j < upto; ++j) m.paste(0, j, cols[j]);
    return m;
}

// minimal Krylov relation of v: smallest d with A^d v = sum A^i v c_i.
// Returns (d, coefficients c_0..c_{d-1}).
template <DivisionScalar R>
std::pair<std::size_t, std::vector<R>> krylov_relation(const Matrix<R>& a, const Matrix<R>& v) {
    const std::size_t n = a.rows();
    auto ys = iterate_vectors(a, v, n + 1);
    std::size_t d = 0;
    while (d < n) {
        Matrix<R> k = columns_to_matrix(ys, d + 1);
        if (rank(k) < d + 1) break;
        ++d;
    }
    Matrix<R> k = columns_to_matrix(ys, d);
    std::vector<R> coeffs(d, R::zero(a.model()));
    if (d > 0) {
        auto sol = solve(k, ys[d]);
        if (!sol) throw ring_error("krylov relation inconsistent");
        for (std::size_t i = 0; i < d; ++i) coeffs[i] = (*sol)(i, 0);
    }
    return {d, coeffs};
}

// vector action of the monic relation x^k - sum x^j g_j on w
template <DivisionScalar R>
Matrix<R> chain_action(const Matrix<R>& a, const Matrix<R>& w, const std::vector<R>& g) {
    auto ys = iterate_vectors(a, w, g.size() + 1);
    Matrix<R> z = ys[g.size()];
    for (std::size_t j = 0; j < g.size(); ++j) z = z - scale_right(ys[j], g[j]);
    return z;
}

// Solve sum_i ( y_{i+k} q_i - sum_j y_{i+j} q_i g_j ) = z for scalars
// q_0..q_{d-1}. Over a commutative ring the unknowns commute past the
// g_j and this is one linear solve; over the rational quaternions the
// system expands over the central basis 1,i,j,k into a rational system.
template <DivisionScalar R>
std::optional<std::vector<R>> solve_chain_correction(const std::vector<Matrix<R>>& ys,
                                                     std::size_t d, const std::vector<R>& g,
                                                     const Matrix<R>& z) {
    const std::size_t n = z.rows();
    const std::size_t k = g.size();
    const R model = z.model();
    if constexpr (ring_traits<R>::is_commutative) {
        Matrix<R> sys(n, d, model);
        for (std::size_t i = 0; i < d; ++i) {
            Matrix<R> col = ys[i + k];
            for (std::size_t j = 0; j < k; ++j) col = col - scale_right(ys[i + j], g[j]);
            sys.paste(0, i, col);
        }
        auto sol = solve(sys, z);
        if (!sol) return std::nullopt;
        std::vector<R> q(d, R::zero(model));
        for (std::size_t i = 0; i < d; ++i) q[i] = (*sol)(i, 0);
        return q;
    } else {
        constexpr int cd = ring_traits<R>::centre_dim;
        const Rational rzero(0);
        Matrix<Rational> sys(n * cd, d * cd, rzero);
        Matrix<Rational> rhs(n * cd, 1, rzero);
        Rational coords[cd];
        for (std::size_t row = 0; row < n; ++row) {
            ring_traits<R>::centre_coords(z(row, 0), coords);
            for (int b = 0; b < cd; ++b) rhs(row * cd + b, 0) = coords[b];
        }
        for (std::size_t i = 0; i < d; ++i)
            for (int beta = 0; beta < cd; ++beta) {
                R basis = ring_traits<R>::centre_basis(model, beta);
                // column vector: y_{i+k} * beta - sum_j y_{i+j} * (beta g_j)
                Matrix<R> col = scale_right(ys[i + k], basis);
                for (std::size_t j = 0; j < k; ++j)
                    col = col - scale_right(ys[i + j], basis * g[j]);
                for (std::size_t row = 0; row < n; ++row) {
                    ring_traits<R>::centre_coords(col(row, 0), coords);
                    for (int b = 0; b < cd; ++b) sys(row * cd + b, i * cd + beta) = coords[b];
                }
            }
        auto sol = solve(sys, rhs);
        if (!sol) return std::nullopt;
        std::vector<R> q(d, R::zero(model));
        for (std::size_t i = 0; i < d; ++i) {
            R acc = R::zero(model);
            for (int beta = 0; beta < cd; ++beta) {
                R basis = ring_traits<R>::centre_basis(model, beta);
                Rational c = (*sol)(i * cd + beta, 0);
                acc = acc + R(c) * basis;
            }
            q[i] = acc;
        }
        return q;
    }
}

// degree of the minimal polynomial of A over a commutative field: first
// linear dependence among I, A, A^2, ... viewed as n^2-vectors
template <DivisionScalar R>
std::size_t minimal_poly_degree(const Matrix<R>& a) {
    static_assert(ring_traits<R>::is_commutative);
    const std::size_t n = a.rows();
    std::vector<Matrix<R>> pows{Matrix<R>::identity(n, a.model())};
    for (std::size_t k = 1; k <= n; ++k) pows.push_back(pows.back() * a);
    for (std::size_t d = 1; d <= n; ++d) {
        Matrix<R> sys(n * n, d, a.model());
        Matrix<R> rhs(n * n, 1, a.model());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t t = 0; t < d; ++t) sys(i * n + j, t) = pows[t](i, j);
                rhs(i * n + j, 0) = pows[d](i, j);
            }
        if (solve(sys, rhs)) return d;
    }
    return n;
}

}  // namespace detail

// --- rational canonical form ----------------------------------------------

template <DivisionScalar R>
struct RcfBlock {
    std::size_t size;
    // last-column coefficients of the plain companion block: the chain
    // satisfies A^size v = sum A^i v coeffs[i]
    std::vector<R> coefficients;
};

template <DivisionScalar R>
struct RationalCanonicalForm {
    std::vector<RcfBlock<R>> blocks;     // ordered by size descending
    SimilarityWitness<R> witness;        // witness.t = direct sum of companions
};

namespace detail {

template <DivisionScalar R>
struct RcfChain {
    Matrix<R> generator;
    std::size_t size;
    std::vector<R> coefficients;
};

// find a vector of maximal Krylov degree; over fields aims for the
// degree of the minimal polynomial
template <DivisionScalar R>
std::pair<Matrix<R>, std::pair<std::size_t, std::vector<R>>> best_cyclic_vector(
    const Matrix<R>& a, std::uint64_t seed, std::size_t random_count) {
    const std::size_t n = a.rows();
    std::size_t target = n;
    if constexpr (ring_traits<R>::is_commutative) target = minimal_poly_degree(a);
    Matrix<R> best_v(n, 1, a.model());
    std::pair<std::size_t, std::vector<R>> best{0, {}};
    for (const auto& v : pivot_candidates(n, a.model(), seed, random_count)) {
        auto rel = krylov_relation(a, v);
        if (rel.first > best.first) {
            best = rel;
            best_v = v;
            if (best.first >= target) break;
        }
    }
    return {best_v, best};
}

template <DivisionScalar R>
bool rcf_attempt(const Matrix<R>& a, std::uint64_t seed, std::size_t random_count,
                 std::vector<RcfChain<R>>& chains_out) {
    const std::size_t n = a.rows();
    auto [v, rel] = best_cyclic_vector(a, seed, random_count);
    auto [d, coeffs] = rel;
    if (d == 0) return false;
    auto ys = iterate_vectors(a, v, std::max<std::size_t>(2 * n + 1, d + 1));
    Matrix<R> krylov = columns_to_matrix(ys, d);
    chains_out.push_back({v, d, coeffs});
    if (d == n) return true;

    Matrix<R> q = extend_to_basis(krylov);
    Matrix<R> b = conjugate(a, q);
    if (!b.submatrix(d, 0, n - d, d).is_zero()) return false;  // Krylov span must be invariant
    Matrix<R> quotient = b.submatrix(d, d, n - d, n - d);
    std::vector<RcfChain<R>> sub_chains;
    if (!rcf_attempt(quotient, seed + 1, random_count, sub_chains)) return false;

    Matrix<R> w_cols = q.submatrix(0, d, n, n - d);
    for (const auto& sub : sub_chains) {
        Matrix<R> u = w_cols * sub.generator;  // lift of the quotient generator
        Matrix<R> z = chain_action(a, u, sub.coefficients);
        // z lies in the Krylov span of v; correct u by w with w*g = z
        auto q_corr = solve_chain_correction(ys, d, sub.coefficients, z);
        if (!q_corr) return false;
        Matrix<R> w(n, 1, a.model());
        for (std::size_t i = 0; i < d; ++i) w = w + scale_right(ys[i], (*q_corr)[i]);
        Matrix<R> u_fixed = u - w;
        if (!chain_action(a, u_fixed, sub.coefficients).is_zero()) return false;
        chains_out.push_back({u_fixed, sub.size, sub.coefficients});
    }
    return true;
}

}  // namespace detail

// Witness-verified companion-block decomposition, blocks ordered by size
// descending. The construction is greedy cyclic-vector deflation with a
// corrected lift of the quotient decomposition; every output is verified
// by conjugation, so the greedy scan is safe.
template <DivisionScalar R>
RationalCanonicalForm<R> rcf(const Matrix<R>& a, std::uint64_t seed = 1) {
    static_assert(ring_traits<R>::is_division_ring);
    if (!a.square()) throw not_square();
    const std::size_t n = a.rows();
    if (n == 0) throw ring_error("empty matrix");
    for (int attempt = 0; attempt < 6; ++attempt) {
        std::vector<detail::RcfChain<R>> chains;
        if (!detail::rcf_attempt(a, seed + 97 * attempt, 16u << attempt, chains)) continue;
        std::stable_sort(chains.begin(), chains.end(),
                         [](const auto& x, const auto& y) { return x.size > y.size; });
        Matrix<R> p(n, n, a.model());
        std::size_t at = 0;
        for (const auto& ch : chains) {
            auto ys = detail::iterate_vectors(a, ch.generator, ch.size);
            for (std::size_t i = 0; i < ch.size; ++i) p.paste(0, at + i, ys[i]);
            at += ch.size;
        }
        if (at != n || !is_invertible(p)) continue;
        Matrix<R> t = conjugate(a, p);
        std::vector<Matrix<R>> blocks;
        std::vector<RcfBlock<R>> out_blocks;
        for (const auto& ch : chains) {
            blocks.push_back(companion<R>({ch.coefficients, CompanionSign::plain}));
            out_blocks.push_back({ch.size, ch.coefficients});
        }
        if (t != block_diag(blocks)) continue;
        return {out_blocks, SimilarityWitness<R>{p, t}};
    }
    throw no_witness_found("rational canonical form");
}

// monic polynomial x^size - sum x^i coeff_i of a block
template <DivisionScalar R>
Polynomial<R> block_polynomial(const RcfBlock<R>& b, const R& model) {
    std::vector<R> c(b.size + 1, R::zero(model));
    for (std::size_t i = 0; i < b.size; ++i) c[i] = -b.coefficients[i];
    c[b.size] = R::one(model);
    return Polynomial<R>(std::move(c), model);
}

// --- nilpotent and unipotent similarity -----------------------------------

// strictly upper triangular form via a basis ordered along the kernel
// filtration ker N in ker N^2 in ...
template <DivisionScalar R>
SimilarityWitness<R> nilpotent_strict_upper(const Matrix<R>& nmat) {
    if (!is_nilpotent(nmat)) throw not_nilpotent();
    const std::size_t n = nmat.rows();
    if (is_strictly_upper(nmat)) return {Matrix<R>::identity(n, nmat.model()), nmat};
    std::vector<Matrix<R>> cols;
    Matrix<R> power = nmat;
    auto assemble = [&](const std::vector<Matrix<R>>& cs) {
        Matrix<R> m(n, cs.size(), nmat.model());
        for (std::size_t j = 0; j < cs.size(); ++j) m.paste(0, j, cs[j]);
        return m;
    };
    while (cols.size() < n) {
        Matrix<R> ker = right_kernel(power);
        for (std::size_t j = 0; j < ker.cols() && cols.size() < n; ++j) {
            cols.push_back(ker.column(j));
            if (rank(assemble(cols)) != cols.size()) cols.pop_back();
        }
        power = power * nmat;
    }
    Matrix<R> p = assemble(cols);
    Matrix<R> t = conjugate(nmat, p);
    if (!is_strictly_upper(t)) throw no_witness_found("nilpotent strict upper form");
    return {p, t};
}

// Jordan-ones form of a unipotent matrix: sizes of the J_m(1) blocks plus
// the witness. Chains are built top-down along the kernel filtration of
// U - I.
template <DivisionScalar R>
std::pair<std::vector<std::size_t>, SimilarityWitness<R>> unipotent_jordan_ones(const Matrix<R>& u) {
    const std::size_t n = u.rows();
    Matrix<R> s = u - Matrix<R>::identity(n, u.model());
    if (!is_nilpotent(s)) throw not_unipotent();
    // kernel filtration
    std::vector<Matrix<R>> kernels;  // kernels[m] = basis of ker S^{m+1}
    Matrix<R> power = s;
    std::size_t q = 0;
    while (true) {
        kernels.push_back(right_kernel(power));
        ++q;
        if (kernels.back().cols() == n) break;
        power = power * s;
    }
    auto assemble = [&](const std::vector<Matrix<R>>& cs) {
        Matrix<R> m(n, cs.size(), u.model());
        for (std::size_t j = 0; j < cs.size(); ++j) m.paste(0, j, cs[j]);
        return m;
    };
    std::vector<std::vector<Matrix<R>>> chains;  // chains[c] = (w, Sw, ..., S^{len-1}w)
    std::vector<Matrix<R>> span_cols;            // grows to a filtration-adapted spanning set
    for (std::size_t level = q; level >= 1; --level) {
        // vectors already present at this level: S-images of higher chains
        std::vector<Matrix<R>> level_tops;
        for (auto& ch : chains) level_tops.push_back(ch[ch.size() - level]);
        span_cols.clear();
        if (level >= 2) {
            const Matrix<R>& lower = kernels[level - 2];
            for (std::size_t j = 0; j < lower.cols(); ++j) span_cols.push_back(lower.column(j));
        }
        for (auto& t : level_tops) span_cols.push_back(t);
        if (rank(assemble(span_cols)) != span_cols.size())
            throw no_witness_found("unipotent chain basis degenerated");
        const Matrix<R>& here = kernels[level - 1];
        for (std::size_t j = 0; j < here.cols(); ++j) {
            span_cols.push_back(here.column(j));
            if (rank(assemble(span_cols)) != span_cols.size()) {
                span_cols.pop_back();
                continue;
            }
            // new chain of length = level
            std::vector<Matrix<R>> ch{here.column(j)};
            for (std::size_t t = 1; t < level; ++t) ch.push_back(s * ch.back());
            chains.push_back(std::move(ch));
        }
    }
    std::stable_sort(chains.begin(), chains.end(),
                     [](const auto& x, const auto& y) { return x.size() > y.size(); });
    std::vector<std::size_t> sizes;
    Matrix<R> p(n, n, u.model());
    std::size_t at = 0;
    for (const auto& ch : chains) {
        sizes.push_back(ch.size());
        for (std::size_t t = 0; t < ch.size(); ++t) p.paste(0, at + t, ch[ch.size() - 1 - t]);
        at += ch.size();
    }
    if (at != n || !is_invertible(p)) throw no_witness_found("unipotent jordan basis");
    Matrix<R> t = conjugate(u, p);
    std::vector<Matrix<R>> expect;
    for (auto m : sizes) expect.push_back(jordan_like(m, R::one(u.model()), R::one(u.model())));
    if (t != block_diag(expect)) throw no_witness_found("unipotent jordan form mismatch");
    return {sizes, SimilarityWitness<R>{p, t}};
}

// --- zero-diagonal similarity ----------------------------------------------

namespace detail {

template <DivisionScalar R>
bool has_zero_diagonal(const Matrix<R>& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        if (!a(i, i).is_zero()) return false;
    return true;
}

// conjugate by I + e_i t e_j^T in place, accumulating into p
template <DivisionScalar R>
void elementary_conjugate(Matrix<R>& b, Matrix<R>& p, std::size_t i, std::size_t j, const R& t) {
    const std::size_t n = b.rows();
    // column update: col_j += col_i * t, then row update: row_i -= t * row_j
    for (std::size_t r = 0; r < n; ++r) b(r, j) = b(r, j) + b(r, i) * t;
    for (std::size_t c = 0; c < n; ++c) b(i, c) = b(i, c) - t * b(j, c);
    for (std::size_t r = 0; r < n; ++r) p(r, j) = p(r, j) + p(r, i) * t;
}

template <DivisionScalar R>
Matrix<R> seeded_random_invertible(std::size_t n, const R& model, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int tries = 0; tries < 64; ++tries) {
        Matrix<R> m(n, n, model);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = ring_int(model, coef(rng));
        if (is_invertible(m)) return m;
    }
    return Matrix<R>::identity(n, model);
}

}  // namespace detail

namespace detail {

// Conjugate a onto a form whose diagonal vanishes except possibly at the
// last slot, by borrowing elementary conjugations down the matrix: the
// damage of each step lands on a later diagonal entry. Returns nothing
// when the pivot structure degenerates (handled by restart upstream).
template <DivisionScalar R>
std::optional<SimilarityWitness<R>> corner_diagonal_sweep(const Matrix<R>& a, Matrix<R> p,
                                                          Matrix<R> b) {
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        int guard = 0;
        while (!b(i, i).is_zero()) {
            std::size_t jc = n, jr = n;
            for (std::size_t j = i + 1; j < n && jc == n; ++j)
                if (!b(j, i).is_zero()) jc = j;
            for (std::size_t j = i + 1; j < n && jr == n; ++j)
                if (!b(i, j).is_zero()) jr = j;
            if (jc != n) {
                // conjugation by I + e_i t e_jc^T sends diag_i to
                // diag_i - t * b(jc, i)
                R t = b(i, i) * b(jc, i).inverse();
                elementary_conjugate(b, p, i, jc, t);
            } else if (jr != n) {
                R t = -b(i, jr).inverse() * b(i, i);
                elementary_conjugate(b, p, jr, i, t);
            } else {
                // row and column i vanish past i: mix with a later slot
                std::size_t l = n;
                for (std::size_t m = i + 1; m < n && l == n; ++m)
                    if (b(m, m) != b(i, i)) l = m;
                if (l == n) return std::nullopt;
                elementary_conjugate(b, p, l, i, R::one(a.model()));
            }
            if (++guard > 8) return std::nullopt;
        }
    }
    SimilarityWitness<R> w{p, b};
    if (!w.certifies(a)) return std::nullopt;
    return w;
}

// multi-attempt wrapper: identity start, then seeded random conjugations
template <DivisionScalar R>
std::optional<SimilarityWitness<R>> corner_diagonal_form(const Matrix<R>& a, std::uint64_t seed,
                                                         int attempts = 32) {
    const std::size_t n = a.rows();
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        Matrix<R> p = attempt == 0 ? Matrix<R>::identity(n, a.model())
                                   : seeded_random_invertible(n, a.model(), rng);
        Matrix<R> b = attempt == 0 ? a : conjugate(a, p);
        auto w = corner_diagonal_sweep(a, p, b);
        if (w) return w;
    }
    return std::nullopt;
}

}  // namespace detail

// Similarity onto a matrix with exactly zero diagonal. Total for traceless
// non-central matrices over fields (the swept corner equals the invariant
// trace); over noncommutative division rings the corner moves inside the
// commutator coset and the bounded search reports failure rather than
// guessing: some traceless quaternion matrices have no zero-diagonal
// form at all (a rank-one example with nonzero square shows this).
template <DivisionScalar R>
SimilarityWitness<R> zero_diagonal_similarity(const Matrix<R>& a, std::uint64_t seed = 1) {
    if (!a.square()) throw not_square();
    const std::size_t n = a.rows();
    if (detail::has_zero_diagonal(a)) return {Matrix<R>::identity(n, a.model()), a};
    if (n < 2 || is_central_matrix(a)) throw central_input();
    if constexpr (ring_traits<R>::is_commutative) {
        if (!a.trace().is_zero()) throw ring_error("zero-diagonal similarity needs zero trace");
    }
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 32; ++attempt) {
        Matrix<R> p = attempt == 0 ? Matrix<R>::identity(n, a.model())
                                   : detail::seeded_random_invertible(n, a.model(), rng);
        Matrix<R> b = attempt == 0 ? a : conjugate(a, p);
        auto w = detail::corner_diagonal_sweep(a, p, b);
        if (w && detail::has_zero_diagonal(w->t)) return *w;
    }
    throw no_witness_found("zero-diagonal similarity");
}

}  // namespace tracefactor
