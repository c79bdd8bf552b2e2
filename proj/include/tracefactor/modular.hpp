#pragma once

#include <cstdint>
#include <string>

#include "tracefactor/ring.hpp"

namespace tracefactor {

namespace detail {

// extended Euclid: returns gcd(a, m) and a coefficient x with a*x = gcd (mod m)
inline std::int64_t egcd_inverse(std::int64_t a, std::int64_t m, std::int64_t& x_out) {
    std::int64_t old_r = a, r = m;
    std::int64_t old_x = 1, x = 0;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::int64_t tr = old_r - q * r;
        old_r = r;
        r = tr;
        std::int64_t tx = old_x - q * x;
        old_x = x;
        x = tx;
    }
    x_out = old_x;
    return old_r;
}

}  // namespace detail

// Residue mod m, m >= 2 and not necessarily prime. A commutative ring;
// inversion is partial (units only). With a prime modulus this is the
// desk-scale field used by the brute-force oracles; PrimeField below
// tags that usage.
class Modular {
public:
    Modular() : residue_(0), modulus_(2) {}
    Modular(std::int64_t value, std::int64_t modulus) : modulus_(modulus) {
        if (modulus < 2) throw ring_error("modulus must be >= 2");
        residue_ = value % modulus;
        if (residue_ < 0) residue_ += modulus;
    }

    std::int64_t residue() const { return residue_; }
    std::int64_t modulus() const { return modulus_; }

    static Modular zero(const Modular& model) { return Modular(0, model.modulus_); }
    static Modular one(const Modular& model) { return Modular(1, model.modulus_); }

    bool is_zero() const { return residue_ == 0; }

    Modular operator+(const Modular& o) const {
        check(o);
        return Modular(residue_ + o.residue_, modulus_);
    }
    Modular operator-(const Modular& o) const {
        check(o);
        return Modular(residue_ - o.residue_, modulus_);
    }
    Modular operator-() const { return Modular(-residue_, modulus_); }
    Modular operator*(const Modular& o) const {
        check(o);
        return Modular(residue_ * o.residue_, modulus_);
    }
    Modular inverse() const {
        if (is_zero()) throw zero_inverse();
        std::int64_t x;
        std::int64_t g = detail::egcd_inverse(residue_, modulus_, x);
        if (g != 1 && g != -1) throw not_a_unit(std::to_string(residue_) + " mod " + std::to_string(modulus_));
        return Modular(g < 0 ? -x : x, modulus_);
    }
    Modular operator/(const Modular& o) const { return *this * o.inverse(); }
    bool is_unit() const {
        std::int64_t x;
        std::int64_t g = detail::egcd_inverse(residue_, modulus_, x);
        return g == 1 || g == -1;
    }

    bool operator==(const Modular& o) const {
        return residue_ == o.residue_ && modulus_ == o.modulus_;
    }
    bool operator!=(const Modular& o) const { return !(*this == o); }

private:
    void check(const Modular& o) const {
        if (modulus_ != o.modulus_)
            throw ring_mismatch("moduli " + std::to_string(modulus_) + " vs " + std::to_string(o.modulus_));
    }

    std::int64_t residue_;
    std::int64_t modulus_;
};

// Prime-modulus residues form a field. The wrapper only exists so the
// type system can distinguish "field mod p" from "ring mod m"; arithmetic
// is identical.
class PrimeField : public Modular {
public:
    PrimeField() : Modular(0, 2) {}
    PrimeField(std::int64_t value, std::int64_t p) : Modular(value, p) {}
    explicit PrimeField(const Modular& m) : Modular(m) {}

    static PrimeField zero(const PrimeField& model) { return PrimeField(0, model.modulus()); }
    static PrimeField one(const PrimeField& model) { return PrimeField(1, model.modulus()); }

    PrimeField operator+(const PrimeField& o) const { return PrimeField(Modular::operator+(o)); }
    PrimeField operator-(const PrimeField& o) const { return PrimeField(Modular::operator-(o)); }
    PrimeField operator-() const { return PrimeField(Modular::operator-()); }
    PrimeField operator*(const PrimeField& o) const { return PrimeField(Modular::operator*(o)); }
    PrimeField inverse() const { return PrimeField(Modular::inverse()); }
    PrimeField operator/(const PrimeField& o) const { return *this * o.inverse(); }
};

template <>
struct ring_traits<Modular> {
    static constexpr bool is_field = false;
    static constexpr bool is_division_ring = false;
    static constexpr bool is_exact = true;
    static constexpr bool is_commutative = true;
    static long characteristic(const Modular& model) { return model.modulus(); }
    static constexpr int centre_dim = 1;
    static std::string tag(const Modular& model) { return "Zm:" + std::to_string(model.modulus()); }
};

template <>
struct ring_traits<PrimeField> {
    static constexpr bool is_field = true;
    static constexpr bool is_division_ring = true;
    static constexpr bool is_exact = true;
    static constexpr bool is_commutative = true;
    static long characteristic(const PrimeField& model) { return model.modulus(); }
    static constexpr int centre_dim = 1;
    static PrimeField centre_basis(const PrimeField& model, int) { return PrimeField::one(model); }
    static std::string tag(const PrimeField& model) { return "Fp:" + std::to_string(model.modulus()); }
};

}  // namespace tracefactor
