#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdlib>
#include <string>

#include "tracefactor/ring.hpp"

namespace tracefactor {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary-precision rational, always reduced, denominator >= 1.
// Factorisation pipelines compound entry growth, so the representation
// never overflows and reduction is eager.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long n) : num_(n), den_(1) {}           // NOLINT(google-explicit-constructor)
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    static Rational zero(const Rational&) { return Rational(0); }
    static Rational one(const Rational&) { return Rational(1); }

    bool is_zero() const { return num_ == 0; }

    Rational operator+(const Rational& o) const {
        return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Rational operator-(const Rational& o) const {
        return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    Rational operator*(const Rational& o) const {
        return Rational(num_ * o.num_, den_ * o.den_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rational inverse() const {
        if (is_zero()) throw zero_inverse();
        return Rational(den_, num_);
    }
    Rational operator/(const Rational& o) const { return *this * o.inverse(); }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    std::strong_ordering operator<=>(const Rational& o) const {
        BigInt l = num_ * o.den_, r = o.num_ * den_;
        if (l < r) return std::strong_ordering::less;
        if (l > r) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    // "a/b", or just "a" when the denominator is 1.
    std::string str() const {
        std::string s = num_.str();
        if (den_ != 1) s += "/" + den_.str();
        return s;
    }

    // Accepts "a" and "a/b"; anything else is a parse_error.
    static Rational parse(const std::string& text) {
        auto bad = [&] { throw parse_error("bad rational '" + text + "'"); };
        if (text.empty()) bad();
        auto slash = text.find('/');
        try {
            if (slash == std::string::npos) return Rational(BigInt(text));
            std::string n = text.substr(0, slash), d = text.substr(slash + 1);
            if (n.empty() || d.empty() || d.find('/') != std::string::npos) bad();
            return Rational(BigInt(n), BigInt(d));
        } catch (const std::runtime_error&) {
            bad();
        }
        return Rational();  // unreachable
    }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

private:
    void reduce() {
        if (den_ == 0) throw ring_error("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    BigInt num_;
    BigInt den_;
};

template <>
struct ring_traits<Rational> {
    static constexpr bool is_field = true;
    static constexpr bool is_division_ring = true;
    static constexpr bool is_exact = true;
    static constexpr bool is_commutative = true;
    static long characteristic(const Rational&) { return 0; }
    static constexpr int centre_dim = 1;
    static Rational centre_basis(const Rational& model, int) { return Rational::one(model); }
    // coordinates of x over the centre basis, as rationals
    static void centre_coords(const Rational& x, Rational* out) { out[0] = x; }
    static std::string tag(const Rational&) { return "Q"; }
};

// Exact integer square root test; used by the exact quaternion
// complexification fast path.
inline bool perfect_square(const BigInt& n, BigInt& root) {
    if (n < 0) return false;
    root = boost::multiprecision::sqrt(n);
    return root * root == n;
}

inline bool rational_sqrt(const Rational& x, Rational& out) {
    BigInt rn, rd;
    if (!perfect_square(x.num(), rn) || !perfect_square(x.den(), rd)) return false;
    out = Rational(rn, rd);
    return true;
}

}  // namespace tracefactor
