#pragma once

#include <vector>

#include "tracefactor/matrix.hpp"
#include "tracefactor/ring.hpp"

namespace tracefactor {

struct division_by_zero_poly : ring_error {
    division_by_zero_poly() : ring_error("polynomial division by zero") {}
};

enum class DivSide { left, right };

// Polynomials over a division scalar with a central variable: x commutes
// with every coefficient, the coefficients need not commute with each
// other. Products keep coefficient order (a_i then b_j).
template <RingScalar R>
class Polynomial {
public:
    explicit Polynomial(const R& model) : model_(R::zero(model)) {}
    Polynomial(std::vector<R> coeffs, const R& model) : model_(R::zero(model)), c_(std::move(coeffs)) {
        trim();
    }
    static Polynomial x_power(std::size_t k, const R& model) {
        std::vector<R> c(k + 1, R::zero(model));
        c[k] = R::one(model);
        return Polynomial(std::move(c), model);
    }
    static Polynomial constant(const R& v) { return Polynomial({v}, v); }

    bool is_zero() const { return c_.empty(); }
    // degree of the zero polynomial is reported as -1
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const R& model() const { return model_; }
    R coeff(std::size_t k) const { return k < c_.size() ? c_[k] : R::zero(model_); }
    const R& lead() const { return c_.back(); }
    const std::vector<R>& coeffs() const { return c_; }

    Polynomial operator+(const Polynomial& o) const {
        std::vector<R> c(std::max(c_.size(), o.c_.size()), R::zero(model_));
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = coeff(k) + o.coeff(k);
        return Polynomial(std::move(c), model_);
    }
    Polynomial operator-(const Polynomial& o) const {
        std::vector<R> c(std::max(c_.size(), o.c_.size()), R::zero(model_));
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = coeff(k) - o.coeff(k);
        return Polynomial(std::move(c), model_);
    }
    Polynomial operator*(const Polynomial& o) const {
        if (is_zero() || o.is_zero()) return Polynomial(model_);
        std::vector<R> c(c_.size() + o.c_.size() - 1, R::zero(model_));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] = c[i + j] + c_[i] * o.c_[j];
        return Polynomial(std::move(c), model_);
    }
    bool operator==(const Polynomial& o) const { return c_ == o.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    R model_;
    std::vector<R> c_;
};

// f = q*g + r (left) or f = g*q + r (right), deg r < deg g.
template <DivisionScalar R>
std::pair<Polynomial<R>, Polynomial<R>> poly_divmod(const Polynomial<R>& f, const Polynomial<R>& g,
                                                    DivSide side) {
    if (g.is_zero()) throw division_by_zero_poly();
    Polynomial<R> q(f.model());
    Polynomial<R> r = f;
    const R lead_inv = g.lead().inverse();
    while (!r.is_zero() && r.degree() >= g.degree()) {
        std::size_t shift = static_cast<std::size_t>(r.degree() - g.degree());
        R t = side == DivSide::left ? r.lead() * lead_inv : lead_inv * r.lead();
        Polynomial<R> term = Polynomial<R>::x_power(shift, f.model()) * Polynomial<R>::constant(t);
        q = q + term;
        r = side == DivSide::left ? r - term * g : r - g * term;
    }
    return {q, r};
}

template <DivisionScalar R>
bool divides(const Polynomial<R>& g, const Polynomial<R>& f, DivSide side) {
    return poly_divmod(f, g, side).second.is_zero();
}

// f(A) over a commutative scalar ring. Over noncommutative scalars the
// polynomial action lives on vectors (Krylov chains), never on matrices:
// the scalar would land between matrix entry and vector entry.
template <DivisionScalar R>
Matrix<R> apply_poly(const Polynomial<R>& f, const Matrix<R>& a) {
    static_assert(ring_traits<R>::is_commutative);
    Matrix<R> acc(a.rows(), a.cols(), a.model());
    Matrix<R> p = Matrix<R>::identity(a.rows(), a.model());
    for (std::size_t k = 0; k <= static_cast<std::size_t>(std::max<long>(f.degree(), 0)); ++k) {
        if (f.degree() < 0) break;
        acc = acc + scale_right(p, f.coeff(k));
        if (static_cast<long>(k) < f.degree()) p = p * a;
    }
    return acc;
}

}  // namespace tracefactor
