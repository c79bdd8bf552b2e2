#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "tracefactor/matrix.hpp"
#include "tracefactor/ring.hpp"

// Row-reduction machinery over division rings. Vectors are columns of a
// right vector space: row operations always use left coefficients, column
// operations always use right coefficients. That single convention is
// forced by noncommutativity and shared by every module built on top.

namespace tracefactor {

struct not_singular : ring_error {
    not_singular() : ring_error("matrix is invertible; no invertible*nilpotent split") {}
};
struct central_input : ring_error {
    central_input() : ring_error("central input rejected") {}
};
struct zero_matrix_input : ring_error {
    zero_matrix_input() : ring_error("zero matrix") {}
};

template <DivisionScalar R>
struct RowReduction {
    std::size_t rank = 0;
    Matrix<R> reduced;             // E * A, reduced row echelon form, unit pivots
    Matrix<R> left_ops;            // E, invertible
    std::vector<std::size_t> pivot_cols;
};

template <DivisionScalar R>
RowReduction<R> row_reduce(const Matrix<R>& a) {
    const std::size_t nr = a.rows(), nc = a.cols();
    RowReduction<R> out{0, a, Matrix<R>::identity(nr, a.model()), {}};
    Matrix<R>& u = out.reduced;
    Matrix<R>& e = out.left_ops;
    std::size_t r = 0;
    for (std::size_t j = 0; j < nc && r < nr; ++j) {
        // first nonzero entry at or below the frontier; exact arithmetic,
        // no magnitude heuristics
        std::size_t piv = nr;
        for (std::size_t i = r; i < nr; ++i)
            if (!u(i, j).is_zero()) {
                piv = i;
                break;
            }
        if (piv == nr) continue;
        if (piv != r)
            for (std::size_t t = 0; t < nc || t < nr; ++t) {
                if (t < nc) std::swap(u(piv, t), u(r, t));
                if (t < nr) std::swap(e(piv, t), e(r, t));
            }
        const R inv = u(r, j).inverse();
        for (std::size_t t = 0; t < nc; ++t) u(r, t) = inv * u(r, t);
        for (std::size_t t = 0; t < nr; ++t) e(r, t) = inv * e(r, t);
        for (std::size_t i = 0; i < nr; ++i) {
            if (i == r || u(i, j).is_zero()) continue;
            const R c = u(i, j);
            for (std::size_t t = 0; t < nc; ++t) u(i, t) = u(i, t) - c * u(r, t);
            for (std::size_t t = 0; t < nr; ++t) e(i, t) = e(i, t) - c * e(r, t);
        }
        out.pivot_cols.push_back(j);
        ++r;
    }
    out.rank = r;
    return out;
}

template <DivisionScalar R>
std::size_t rank(const Matrix<R>& a) {
    return row_reduce(a).rank;
}

template <DivisionScalar R>
Matrix<R> inverse(const Matrix<R>& a) {
    if (!a.square()) throw not_square();
    auto rr = row_reduce(a);
    if (rr.rank != a.rows()) throw not_invertible();
    return rr.left_ops;
}

template <DivisionScalar R>
bool is_invertible(const Matrix<R>& a) {
    return a.square() && row_reduce(a).rank == a.rows();
}

// similarity action A -> P^-1 A P
template <DivisionScalar R>
Matrix<R> conjugate(const Matrix<R>& a, const Matrix<R>& p) {
    return inverse(p) * a * p;
}

// Solve A X = B for X (unknowns carry right coefficients). Returns
// nothing when inconsistent.
template <DivisionScalar R>
std::optional<Matrix<R>> solve(const Matrix<R>& a, const Matrix<R>& b) {
    if (a.rows() != b.rows()) throw dimension_mismatch();
    auto rr = row_reduce(a);
    Matrix<R> tb = rr.left_ops * b;
    for (std::size_t i = rr.rank; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            if (!tb(i, j).is_zero()) return std::nullopt;
    Matrix<R> x(a.cols(), b.cols(), a.model());
    for (std::size_t t = 0; t < rr.rank; ++t) {
        std::size_t pc = rr.pivot_cols[t];
        for (std::size_t j = 0; j < b.cols(); ++j) {
            R acc = tb(t, j);
            // subtract contributions of later (free) columns, all zero here
            // because free unknowns are set to zero; pivots are unit
            x(pc, j) = acc;
        }
    }
    return x;
}

// basis of { x : A x = 0 }, one column per free column of the echelon form
template <DivisionScalar R>
Matrix<R> right_kernel(const Matrix<R>& a) {
    auto rr = row_reduce(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : rr.pivot_cols) is_pivot[c] = true;
    std::size_t dim = a.cols() - rr.rank;
    Matrix<R> k(a.cols(), dim, a.model());
    std::size_t at = 0;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        k(f, at) = R::one(a.model());
        for (std::size_t t = 0; t < rr.rank; ++t) k(rr.pivot_cols[t], at) = -rr.reduced(t, f);
        ++at;
    }
    return k;
}

// Greedily extend the (independent) columns of m to a basis with standard
// vectors; returns an invertible n x n matrix whose first columns are m.
template <DivisionScalar R>
Matrix<R> extend_to_basis(const Matrix<R>& m) {
    const std::size_t n = m.rows();
    std::vector<Matrix<R>> cols;
    for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.column(j));
    auto assemble = [&](const std::vector<Matrix<R>>& cs) {
        Matrix<R> full(n, cs.size(), m.model());
        for (std::size_t j = 0; j < cs.size(); ++j) full.paste(0, j, cs[j]);
        return full;
    };
    std::size_t current_rank = cols.empty() ? 0 : rank(assemble(cols));
    if (current_rank != cols.size()) throw ring_error("extend_to_basis: dependent start columns");
    for (std::size_t i = 0; i < n && cols.size() < n; ++i) {
        Matrix<R> e(n, 1, m.model());
        e(i, 0) = R::one(m.model());
        cols.push_back(e);
        if (rank(assemble(cols)) != cols.size()) cols.pop_back();
    }
    if (cols.size() != n) throw ring_error("extend_to_basis failed");
    return assemble(cols);
}

// --- Bruhat form A = L P H U -------------------------------------------

template <DivisionScalar R>
struct Bruhat {
    Matrix<R> lower;       // unit diagonal, invertible
    Permutation perm;      // permutation part
    Matrix<R> diag;        // diagonal, zero entries for rank deficiency
    Matrix<R> upper;       // unit diagonal, invertible
};

// Scan columns left to right; the pivot of a column is its topmost nonzero
// entry among unused rows. Rows are cleared downwards (left coefficients,
// collected in L), pivot rows are cleared rightwards (right coefficients,
// collected in U). What is left is P * H with H diagonal; singular inputs
// put zeros on H and spare rows are matched to pivotless columns in
// ascending order.
template <DivisionScalar R>
Bruhat<R> bruhat(const Matrix<R>& a) {
    if (!a.square()) throw not_square();
    const std::size_t n = a.rows();
    Matrix<R> m = a;
    Matrix<R> l = Matrix<R>::identity(n, a.model());
    Matrix<R> u = Matrix<R>::identity(n, a.model());
    std::vector<bool> used(n, false);
    std::vector<std::optional<std::size_t>> pivot_row(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t r = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!used[i] && !m(i, j).is_zero()) {
                r = i;
                break;
            }
        if (r == n) continue;
        used[r] = true;
        pivot_row[j] = r;
        const R piv_inv = m(r, j).inverse();
        for (std::size_t i = r + 1; i < n; ++i) {
            if (m(i, j).is_zero()) continue;
            const R c = m(i, j) * piv_inv;
            for (std::size_t t = 0; t < n; ++t) m(i, t) = m(i, t) - c * m(r, t);
            // L <- L * (I + c E_{i,r}): column r picks up column i times c
            for (std::size_t t = 0; t < n; ++t) l(t, r) = l(t, r) + l(t, i) * c;
        }
        for (std::size_t jj = j + 1; jj < n; ++jj) {
            if (m(r, jj).is_zero()) continue;
            const R c = piv_inv * m(r, jj);
            for (std::size_t t = 0; t < n; ++t) m(t, jj) = m(t, jj) - m(t, j) * c;
            // U <- (I + E_{j,jj} c) * U: row j picks up c times row jj
            for (std::size_t t = 0; t < n; ++t) u(j, t) = u(j, t) + c * u(jj, t);
        }
    }
    std::vector<std::size_t> images(n, n);
    Matrix<R> h(n, n, a.model());
    std::vector<bool> row_taken(n, false);
    for (std::size_t j = 0; j < n; ++j)
        if (pivot_row[j]) {
            images[j] = *pivot_row[j];
            row_taken[*pivot_row[j]] = true;
            h(j, j) = m(*pivot_row[j], j);
        }
    std::size_t next_free = 0;
    for (std::size_t j = 0; j < n; ++j)
        if (images[j] == n) {
            while (row_taken[next_free]) ++next_free;
            images[j] = next_free;
            row_taken[next_free] = true;
        }
    return Bruhat<R>{l, Permutation(images), h, u};
}

// --- rank factorization and the invertible * nilpotent split -------------

template <DivisionScalar R>
struct RankFactorization {
    std::size_t rank = 0;
    Matrix<R> full_col;  // n x r, full column rank
    Matrix<R> full_row;  // r x n, full row rank
};

template <DivisionScalar R>
RankFactorization<R> rank_factorization(const Matrix<R>& a) {
    auto rr = row_reduce(a);
    if (rr.rank == 0) return {0, Matrix<R>(a.rows(), 0, a.model()), Matrix<R>(0, a.cols(), a.model())};
    Matrix<R> einv = inverse(rr.left_ops);
    Matrix<R> f = einv.submatrix(0, 0, a.rows(), rr.rank);
    Matrix<R> h = rr.reduced.submatrix(0, 0, rr.rank, a.cols());
    return {rr.rank, f, h};
}

template <DivisionScalar R>
struct InvertibleNilpotentSplit {
    Matrix<R> invertible;
    Matrix<R> nilpotent;
};

// Write singular A as G * N with G invertible and N^n = 0. Constructed
// from A = F H (rank r): choose F' with H F' equal to the r x r upper
// shift M (first column from the kernel of H, the rest right-inverse
// images of e_1..e_{r-1}), so N = F' H satisfies N^{r+1} = 0, and G maps
// a basis extending F' onto one extending F.
template <DivisionScalar R>
InvertibleNilpotentSplit<R> invertible_nilpotent_split(const Matrix<R>& a) {
    if (!a.square()) throw not_square();
    const std::size_t n = a.rows();
    if (a.is_zero()) return {Matrix<R>::identity(n, a.model()), a};
    auto rf = rank_factorization(a);
    const std::size_t r = rf.rank;
    if (r == n) throw not_singular();
    auto right_inv = solve(rf.full_row, Matrix<R>::identity(r, a.model()));
    if (!right_inv) throw ring_error("rank factorization lost full row rank");
    Matrix<R> ker = right_kernel(rf.full_row);
    Matrix<R> fprime(n, r, a.model());
    fprime.paste(0, 0, ker.column(0));
    for (std::size_t m = 1; m < r; ++m) fprime.paste(0, m, right_inv->column(m - 1));
    Matrix<R> basis_from = extend_to_basis(fprime);
    Matrix<R> basis_to = extend_to_basis(rf.full_col);
    Matrix<R> g = basis_to * inverse(basis_from);
    Matrix<R> nmat = fprime * rf.full_row;
    return {g, nmat};
}

// --- XHY form -------------------------------------------------------------

template <DivisionScalar R>
struct XhyForm {
    Matrix<R> p;      // similarity: p^-1 A p = x * h * y
    Matrix<R> x;      // lower unitriangular
    Matrix<R> h;      // diag(1, ..., 1, h_last), h_last != 0
    Matrix<R> y;      // upper unitriangular
};

namespace detail {

// candidate vectors for the pivot scans: standard vectors, signed pairs
// (including pairs twisted by non-central basis directions when the ring
// has them), triples, then seeded random small vectors
template <DivisionScalar R>
std::vector<Matrix<R>> pivot_candidates(std::size_t n, const R& model, std::uint64_t seed,
                                        std::size_t random_count) {
    std::vector<Matrix<R>> out;
    auto unit = [&](std::size_t i) {
        Matrix<R> e(n, 1, model);
        e(i, 0) = R::one(model);
        return e;
    };
    constexpr int cd = ring_traits<R>::centre_dim;
    for (std::size_t i = 0; i < n; ++i) out.push_back(unit(i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            out.push_back(unit(i) + unit(j));
            out.push_back(unit(i) - unit(j));
            if constexpr (cd > 1) {
                for (int m = 1; m < cd; ++m) {
                    Matrix<R> v = unit(i);
                    v(j, 0) = ring_traits<R>::centre_basis(model, m);
                    out.push_back(v);
                }
            }
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) out.push_back(unit(i) + unit(j) + unit(k));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> pick(0, cd - 1);
    for (std::size_t t = 0; t < random_count; ++t) {
        Matrix<R> v(n, 1, model);
        bool nonzero = false;
        for (std::size_t i = 0; i < n; ++i) {
            R entry = ring_int(model, coef(rng));
            if constexpr (cd > 1) {
                int m = pick(rng);
                if (m > 0)
                    entry = entry + ring_int(model, coef(rng)) * ring_traits<R>::centre_basis(model, m);
            }
            v(i, 0) = entry;
            nonzero = nonzero || !v(i, 0).is_zero();
        }
        if (nonzero) out.push_back(v);
    }
    return out;
}

template <DivisionScalar R>
bool xhy_recurse(const Matrix<R>& a, std::uint64_t seed, Matrix<R>& p_out, Matrix<R>& x_out,
                 Matrix<R>& h_out, Matrix<R>& y_out) {
    const std::size_t n = a.rows();
    const R one = R::one(a.model());
    if (n == 1) {
        p_out = x_out = y_out = Matrix<R>::identity(1, a.model());
        h_out = a;
        return !a(0, 0).is_zero();
    }
    Matrix<R> s = a - Matrix<R>::identity(n, a.model());
    for (const auto& v : pivot_candidates(n, a.model(), seed, 4 * n + 16)) {
        Matrix<R> sv = s * v;
        Matrix<R> chain(n, 2, a.model());
        chain.paste(0, 0, v);
        chain.paste(0, 1, sv);
        std::size_t chain_rank = rank(chain);
        if (!sv.is_zero() && chain_rank < 2) continue;  // v is an eigenvector with value != 1
        Matrix<R> start = sv.is_zero() ? v : chain;
        Matrix<R> q;
        try {
            q = extend_to_basis(start.submatrix(0, 0, n, sv.is_zero() ? 1 : 2));
        } catch (const ring_error&) {
            continue;
        }
        Matrix<R> b = conjugate(a, q);
        if (b(0, 0) != one) continue;
        Matrix<R> rho = b.submatrix(0, 1, 1, n - 1);
        Matrix<R> gam = b.submatrix(1, 0, n - 1, 1);
        Matrix<R> schur = b.submatrix(1, 1, n - 1, n - 1) - gam * rho;
        if (n - 1 >= 2 && is_central_matrix(schur) && schur != Matrix<R>::identity(n - 1, a.model()))
            continue;  // central non-identity tail cannot carry unit pivots
        Matrix<R> p_sub, x_sub, h_sub, y_sub;
        if (schur == Matrix<R>::identity(n - 1, a.model())) {
            p_sub = x_sub = h_sub = y_sub = Matrix<R>::identity(n - 1, a.model());
        } else if (!xhy_recurse(schur, seed + 1, p_sub, x_sub, h_sub, y_sub)) {
            continue;
        }
        Matrix<R> t = Matrix<R>::identity(n, a.model());
        t.paste(1, 1, p_sub);
        Matrix<R> rho2 = rho * p_sub;
        Matrix<R> gam2 = inverse(p_sub) * gam;
        x_out = Matrix<R>::identity(n, a.model());
        x_out.paste(1, 0, gam2);
        x_out.paste(1, 1, x_sub);
        h_out = Matrix<R>::identity(n, a.model());
        h_out.paste(1, 1, h_sub);
        y_out = Matrix<R>::identity(n, a.model());
        y_out.paste(0, 1, rho2);
        y_out.paste(1, 1, y_sub);
        p_out = q * t;
        return true;
    }
    return false;
}

}  // namespace detail

// P^-1 A P = X H Y for invertible non-central A, with X lower
// unitriangular, Y upper unitriangular and H = diag(1,...,1,h).
template <DivisionScalar R>
XhyForm<R> xhy(const Matrix<R>& a, std::uint64_t seed = 1) {
    if (!a.square()) throw not_square();
    if (a.rows() < 2) throw ring_error("xhy needs size >= 2");
    if (is_central_matrix(a)) throw central_input();
    if (!is_invertible(a)) throw not_invertible();
    XhyForm<R> out{Matrix<R>(), Matrix<R>(), Matrix<R>(), Matrix<R>()};
    if (!detail::xhy_recurse(a, seed, out.p, out.x, out.h, out.y))
        throw ring_error("xhy: pivot scan exhausted");
    return out;
}

}  // namespace tracefactor
