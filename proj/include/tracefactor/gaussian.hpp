#pragma once

#include "tracefactor/rational.hpp"
#include "tracefactor/ring.hpp"

namespace tracefactor {

// Q(i): rationals adjoined a square root of -1. A commutative field.
class Gaussian {
public:
    Gaussian() = default;
    Gaussian(Rational re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
    Gaussian(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}
    Gaussian(long n) : re_(n) {}  // NOLINT(google-explicit-constructor)

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    static Gaussian zero(const Gaussian&) { return Gaussian(); }
    static Gaussian one(const Gaussian&) { return Gaussian(Rational(1)); }
    static Gaussian i() { return Gaussian(Rational(0), Rational(1)); }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    Gaussian operator+(const Gaussian& o) const { return {re_ + o.re_, im_ + o.im_}; }
    Gaussian operator-(const Gaussian& o) const { return {re_ - o.re_, im_ - o.im_}; }
    Gaussian operator-() const { return {-re_, -im_}; }
    Gaussian operator*(const Gaussian& o) const {
        return {re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_};
    }
    Gaussian inverse() const {
        if (is_zero()) throw zero_inverse();
        Rational n = re_ * re_ + im_ * im_;
        return {re_ / n, -im_ / n};
    }
    Gaussian operator/(const Gaussian& o) const { return *this * o.inverse(); }

    bool operator==(const Gaussian& o) const { return re_ == o.re_ && im_ == o.im_; }
    bool operator!=(const Gaussian& o) const { return !(*this == o); }

private:
    Rational re_;
    Rational im_;
};

template <>
struct ring_traits<Gaussian> {
    static constexpr bool is_field = true;
    static constexpr bool is_division_ring = true;
    static constexpr bool is_exact = true;
    static constexpr bool is_commutative = true;
    static long characteristic(const Gaussian&) { return 0; }
    static constexpr int centre_dim = 1;
    static Gaussian centre_basis(const Gaussian& model, int) { return Gaussian::one(model); }
    static std::string tag(const Gaussian&) { return "Qi"; }
};

}  // namespace tracefactor
