#pragma once

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <utility>
#include <vector>

#include "tracefactor/ring.hpp"

namespace tracefactor {

struct dimension_mismatch : ring_error {
    dimension_mismatch() : ring_error("dimension mismatch") {}
};
struct not_square : ring_error {
    not_square() : ring_error("matrix is not square") {}
};
struct not_invertible : ring_error {
    not_invertible() : ring_error("matrix is not invertible") {}
};

template <typename R>
bool ring_compatible(const R& a, const R& b) {
    if constexpr (requires { a.modulus(); }) {
        return a.modulus() == b.modulus();
    } else {
        (void)a;
        (void)b;
        return true;
    }
}

// Dense row-major matrix over a ring scalar. Immutable in spirit: the
// mutating accessors exist for construction, all algorithms treat inputs
// as values. A model element carries the runtime ring (e.g. the modulus)
// so that empty and zero matrices still know their ring.
template <RingScalar R>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0), model_(R{}) {}
    Matrix(std::size_t rows, std::size_t cols, const R& model)
        : rows_(rows), cols_(cols), model_(R::zero(model)), entries_(rows * cols, R::zero(model)) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<R>> rows) {
        std::vector<std::vector<R>> vv;
        for (const auto& r : rows) vv.emplace_back(r);
        return from_rows(vv);
    }
    static Matrix from_rows(const std::vector<std::vector<R>>& rows) {
        if (rows.empty() || rows[0].empty()) throw ring_error("empty matrix literal");
        Matrix m(rows.size(), rows[0].size(), rows[0][0]);
        for (std::size_t i = 0; i < m.rows_; ++i) {
            if (rows[i].size() != m.cols_) throw dimension_mismatch();
            for (std::size_t j = 0; j < m.cols_; ++j) {
                if (!ring_compatible(rows[i][j], m.model_)) throw ring_mismatch("matrix entries");
                m(i, j) = rows[i][j];
            }
        }
        return m;
    }

    static Matrix identity(std::size_t n, const R& model) {
        Matrix m(n, n, model);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = R::one(model);
        return m;
    }
    static Matrix zero_matrix(std::size_t rows, std::size_t cols, const R& model) {
        return Matrix(rows, cols, model);
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    const R& model() const { return model_; }

    const R& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    R& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

    Matrix operator+(const Matrix& o) const {
        require_same_shape(o);
        Matrix m = *this;
        for (std::size_t t = 0; t < entries_.size(); ++t) m.entries_[t] = entries_[t] + o.entries_[t];
        return m;
    }
    Matrix operator-(const Matrix& o) const {
        require_same_shape(o);
        Matrix m = *this;
        for (std::size_t t = 0; t < entries_.size(); ++t) m.entries_[t] = entries_[t] - o.entries_[t];
        return m;
    }
    Matrix operator-() const {
        Matrix m = *this;
        for (auto& e : m.entries_) e = -e;
        return m;
    }

    // Entry order (AB)_ij = sum_k a_ik * b_kj, products taken left to
    // right and never reordered: the scalars need not commute.
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw dimension_mismatch();
        if (!ring_compatible(model_, o.model_)) throw ring_mismatch("matrix product");
        Matrix m(rows_, o.cols_, model_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const R& a = (*this)(i, k);
                if (a.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) m(i, j) = m(i, j) + a * o(k, j);
            }
        return m;
    }

    friend Matrix scale_left(const R& c, const Matrix& m) {
        Matrix r = m;
        for (auto& e : r.entries_) e = c * e;
        return r;
    }
    friend Matrix scale_right(const Matrix& m, const R& c) {
        Matrix r = m;
        for (auto& e : r.entries_) e = e * c;
        return r;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& e : entries_)
            if (!e.is_zero()) return false;
        return true;
    }

    R trace() const {
        if (!square()) throw not_square();
        R t = R::zero(model_);
        for (std::size_t i = 0; i < rows_; ++i) t = t + (*this)(i, i);
        return t;
    }

    Matrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix m(nr, nc, model_);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
        return m;
    }
    void paste(std::size_t r0, std::size_t c0, const Matrix& block) {
        for (std::size_t i = 0; i < block.rows_; ++i)
            for (std::size_t j = 0; j < block.cols_; ++j) (*this)(r0 + i, c0 + j) = block(i, j);
    }

    Matrix column(std::size_t j) const { return submatrix(0, j, rows_, 1); }

private:
    void require_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw dimension_mismatch();
        if (!ring_compatible(model_, o.model_)) throw ring_mismatch("matrix sum");
    }

    std::size_t rows_;
    std::size_t cols_;
    R model_;
    std::vector<R> entries_;
};

// --- structural predicates ------------------------------------------------

template <RingScalar R>
bool is_traceless(const Matrix<R>& a) {
    return a.trace().is_zero();
}

enum class Triangle { upper, lower };

template <RingScalar R>
bool is_unitriangular(const Matrix<R>& a, Triangle side) {
    if (!a.square()) throw not_square();
    const R one = R::one(a.model());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (a(i, i) != one) return false;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            bool below = i > j;
            if (side == Triangle::upper && below && !a(i, j).is_zero()) return false;
            if (side == Triangle::lower && !below && i != j && !a(i, j).is_zero()) return false;
        }
    }
    return true;
}

template <RingScalar R>
bool is_strictly_upper(const Matrix<R>& a) {
    if (!a.square()) throw not_square();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j <= i && j < a.cols(); ++j)
            if (!a(i, j).is_zero()) return false;
    return true;
}

// Checks A^m = 0 for m up to the dimension.
template <RingScalar R>
bool is_nilpotent(const Matrix<R>& a) {
    if (!a.square()) throw not_square();
    if (a.rows() == 0) return true;
    Matrix<R> p = a;
    for (std::size_t m = 1; m <= a.rows(); ++m) {
        if (p.is_zero()) return true;
        if (m < a.rows()) p = p * a;
    }
    return false;
}

template <RingScalar R>
bool is_diagonal(const Matrix<R>& a) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j && !a(i, j).is_zero()) return false;
    return true;
}

// A = c * I for some scalar c (the central elements of a matrix ring over
// a division ring are the central-scalar multiples of I; for similarity
// preconditions the scalar test is the useful one).
template <RingScalar R>
bool is_scalar_matrix(const Matrix<R>& a) {
    if (!a.square()) throw not_square();
    if (!is_diagonal(a)) return false;
    for (std::size_t i = 1; i < a.rows(); ++i)
        if (a(i, i) != a(0, 0)) return false;
    return true;
}

// central means: scalar c*I with c commuting with every ring element.
// Over the commutative rings every scalar matrix is central; over the
// quaternions only rational-multiples of I are.
template <RingScalar R>
bool is_central_matrix(const Matrix<R>& a) {
    if (!is_scalar_matrix(a)) return false;
    if constexpr (ring_traits<R>::is_commutative) {
        return true;
    } else {
        const R& c = a.rows() ? a(0, 0) : R{};
        if (a.rows() == 0) return true;
        // test against the centre_dim basis elements
        for (int m = 0; m < ring_traits<R>::centre_dim; ++m) {
            R b = ring_traits<R>::centre_basis(a.model(), m);
            if (c * b != b * c) return false;
        }
        return true;
    }
}

// --- constructors ----------------------------------------------------------

// Bijection on {0..n-1}; images[i] = sigma(i). The permutation matrix has
// a one at (sigma(i), i), so P e_i = e_sigma(i).
struct Permutation {
    std::vector<std::size_t> images;

    explicit Permutation(std::vector<std::size_t> im) : images(std::move(im)) {
        std::vector<bool> seen(images.size(), false);
        for (auto v : images) {
            if (v >= images.size() || seen[v]) throw ring_error("not a permutation");
            seen[v] = true;
        }
    }
    static Permutation identity(std::size_t n) {
        std::vector<std::size_t> im(n);
        std::iota(im.begin(), im.end(), 0);
        return Permutation(std::move(im));
    }
    static Permutation forward_cycle(std::size_t n) {
        std::vector<std::size_t> im(n);
        for (std::size_t i = 0; i < n; ++i) im[i] = (i + 1) % n;
        return Permutation(std::move(im));
    }

    std::size_t size() const { return images.size(); }
    std::size_t operator()(std::size_t i) const { return images[i]; }

    Permutation inverse() const {
        std::vector<std::size_t> im(images.size());
        for (std::size_t i = 0; i < images.size(); ++i) im[images[i]] = i;
        return Permutation(std::move(im));
    }
    Permutation compose(const Permutation& inner) const {  // (this o inner)(i)
        std::vector<std::size_t> im(images.size());
        for (std::size_t i = 0; i < images.size(); ++i) im[i] = images[inner.images[i]];
        return Permutation(std::move(im));
    }
    std::size_t fixed_points() const {
        std::size_t f = 0;
        for (std::size_t i = 0; i < images.size(); ++i)
            if (images[i] == i) ++f;
        return f;
    }
    bool is_derangement() const { return fixed_points() == 0; }
    bool is_identity() const { return fixed_points() == images.size(); }
};

template <RingScalar R>
Matrix<R> permutation_matrix(const Permutation& sigma, const R& model) {
    Matrix<R> p(sigma.size(), sigma.size(), model);
    for (std::size_t i = 0; i < sigma.size(); ++i) p(sigma(i), i) = R::one(model);
    return p;
}

enum class CompanionSign { plain, negated };

// coefficients a_0 .. a_{n-1}; subdiagonal of ones; last column +a_i
// (plain) or -a_i (negated).
template <RingScalar R>
struct CompanionSpec {
    std::vector<R> coefficients;
    CompanionSign sign = CompanionSign::negated;
};

template <RingScalar R>
Matrix<R> companion(const CompanionSpec<R>& spec) {
    const std::size_t n = spec.coefficients.size();
    if (n == 0) throw ring_error("companion of degree 0");
    const R& model = spec.coefficients[0];
    Matrix<R> c(n, n, model);
    for (std::size_t i = 1; i < n; ++i) c(i, i - 1) = R::one(model);
    for (std::size_t i = 0; i < n; ++i)
        c(i, n - 1) = spec.sign == CompanionSign::plain ? spec.coefficients[i] : -spec.coefficients[i];
    return c;
}

// J_n(alpha, beta): alpha on the diagonal, beta on the first superdiagonal.
template <RingScalar R>
Matrix<R> jordan_like(std::size_t n, const R& alpha, const R& beta) {
    Matrix<R> j(n, n, alpha);
    for (std::size_t i = 0; i < n; ++i) {
        j(i, i) = alpha;
        if (i + 1 < n) j(i, i + 1) = beta;
    }
    return j;
}

template <RingScalar R>
Matrix<R> block_diag(const std::vector<Matrix<R>>& blocks) {
    if (blocks.empty()) throw ring_error("block_diag of nothing");
    std::size_t n = 0;
    for (const auto& b : blocks) {
        if (!b.square()) throw not_square();
        n += b.rows();
    }
    Matrix<R> m(n, n, blocks[0].model());
    std::size_t at = 0;
    for (const auto& b : blocks) {
        m.paste(at, at, b);
        at += b.rows();
    }
    return m;
}

template <RingScalar R>
Matrix<R> diagonal_matrix(const std::vector<R>& d) {
    if (d.empty()) throw ring_error("empty diagonal");
    Matrix<R> m(d.size(), d.size(), d[0]);
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

// single-entry matrix c * E_{ij}
template <RingScalar R>
Matrix<R> unit_entry(std::size_t n, std::size_t i, std::size_t j, const R& c) {
    Matrix<R> m(n, n, c);
    m(i, j) = c;
    return m;
}

}  // namespace tracefactor
