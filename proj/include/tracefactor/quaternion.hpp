#pragma once

#include <array>
#include <cmath>
#include <type_traits>

#include "tracefactor/rational.hpp"
#include "tracefactor/ring.hpp"

namespace tracefactor {

// Quaternions r + i*x + j*y + k*z over a commutative coefficient field,
// with i^2 = j^2 = k^2 = -1 and ij = -ji = k.
//
// Over the rationals the norm form r^2+x^2+y^2+z^2 vanishes only at zero,
// so inversion is total on nonzero elements and the type is an exact
// noncommutative division ring. Over double the same formulas run in
// floating point (needed where square roots leave the rationals).
template <typename T>
class Quaternion {
public:
    Quaternion() : c_{} {
        if constexpr (std::is_floating_point_v<T>) c_ = {0, 0, 0, 0};
    }
    Quaternion(T r, T i, T j, T k) : c_{std::move(r), std::move(i), std::move(j), std::move(k)} {}
    explicit Quaternion(T r) : Quaternion(std::move(r), scalar_zero(), scalar_zero(), scalar_zero()) {}
    Quaternion(long n) : Quaternion(T(n)) {}  // NOLINT(google-explicit-constructor)

    const T& r() const { return c_[0]; }
    const T& i() const { return c_[1]; }
    const T& j() const { return c_[2]; }
    const T& k() const { return c_[3]; }
    const T& operator[](int m) const { return c_[m]; }

    static Quaternion zero(const Quaternion&) { return Quaternion(); }
    static Quaternion one(const Quaternion&) { return Quaternion(T(1)); }
    static Quaternion unit_i() { return {T(0), T(1), T(0), T(0)}; }
    static Quaternion unit_j() { return {T(0), T(0), T(1), T(0)}; }
    static Quaternion unit_k() { return {T(0), T(0), T(0), T(1)}; }

    bool is_zero() const {
        return scalar_is_zero(c_[0]) && scalar_is_zero(c_[1]) && scalar_is_zero(c_[2]) &&
               scalar_is_zero(c_[3]);
    }

    Quaternion operator+(const Quaternion& o) const {
        return {c_[0] + o.c_[0], c_[1] + o.c_[1], c_[2] + o.c_[2], c_[3] + o.c_[3]};
    }
    Quaternion operator-(const Quaternion& o) const {
        return {c_[0] - o.c_[0], c_[1] - o.c_[1], c_[2] - o.c_[2], c_[3] - o.c_[3]};
    }
    Quaternion operator-() const { return {-c_[0], -c_[1], -c_[2], -c_[3]}; }

    Quaternion operator*(const Quaternion& o) const {
        const T &a = c_[0], &b = c_[1], &c = c_[2], &d = c_[3];
        const T &e = o.c_[0], &f = o.c_[1], &g = o.c_[2], &h = o.c_[3];
        return {a * e - b * f - c * g - d * h,
                a * f + b * e + c * h - d * g,
                a * g - b * h + c * e + d * f,
                a * h + b * g - c * f + d * e};
    }

    Quaternion conjugate() const { return {c_[0], -c_[1], -c_[2], -c_[3]}; }

    // reduced norm r^2 + x^2 + y^2 + z^2; q * conjugate(q) = norm(q)
    T norm() const { return c_[0] * c_[0] + c_[1] * c_[1] + c_[2] * c_[2] + c_[3] * c_[3]; }

    Quaternion inverse() const {
        if (is_zero()) throw zero_inverse();
        T n = norm();
        Quaternion cj = conjugate();
        return {cj.c_[0] / n, cj.c_[1] / n, cj.c_[2] / n, cj.c_[3] / n};
    }
    Quaternion operator/(const Quaternion& o) const { return *this * o.inverse(); }

    bool operator==(const Quaternion& o) const { return c_ == o.c_; }
    bool operator!=(const Quaternion& o) const { return !(*this == o); }

private:
    static T scalar_zero() { return T(0); }
    static bool scalar_is_zero(const T& v) {
        if constexpr (std::is_floating_point_v<T>) {
            return v == T(0);
        } else {
            return v.is_zero();
        }
    }

    std::array<T, 4> c_;
};

using QuaternionQ = Quaternion<Rational>;
using QuaternionF = Quaternion<double>;

// (conjugate, reduced norm), satisfying q * conjugate = norm * 1 exactly.
inline std::pair<QuaternionQ, Rational> quaternion_conjugate_norm(const QuaternionQ& q) {
    return {q.conjugate(), q.norm()};
}

template <>
struct ring_traits<QuaternionQ> {
    static constexpr bool is_field = false;
    static constexpr bool is_division_ring = true;
    static constexpr bool is_exact = true;
    static constexpr bool is_commutative = false;
    static long characteristic(const QuaternionQ&) { return 0; }
    // 4-dimensional over the central subfield Q with basis 1, i, j, k
    static constexpr int centre_dim = 4;
    static QuaternionQ centre_basis(const QuaternionQ&, int m) {
        switch (m) {
            case 0: return QuaternionQ(Rational(1));
            case 1: return QuaternionQ::unit_i();
            case 2: return QuaternionQ::unit_j();
            default: return QuaternionQ::unit_k();
        }
    }
    static void centre_coords(const QuaternionQ& x, Rational* out) {
        for (int m = 0; m < 4; ++m) out[m] = x[m];
    }
    static std::string tag(const QuaternionQ&) { return "HQ"; }
};

template <>
struct ring_traits<QuaternionF> {
    static constexpr bool is_field = false;
    static constexpr bool is_division_ring = true;
    static constexpr bool is_exact = false;
    static constexpr bool is_commutative = false;
    static long characteristic(const QuaternionF&) { return 0; }
    static constexpr int centre_dim = 4;
    static std::string tag(const QuaternionF&) { return "Hfloat"; }
};

inline double abs_value(const QuaternionF& q) { return std::sqrt(q.norm()); }

// Rotate q = x + yi + zj + tk into complex form: returns (p, x, s) with
// p^-1 q p = x + s i and s = sqrt(y^2+z^2+t^2) >= 0. A quaternion that is
// already of the form x + y i with y >= 0 reports p = 1, which keeps the
// pure-product anchors exact.
struct ComplexifyF {
    QuaternionF p;
    double x;
    double s;
};

inline ComplexifyF quat_complexify(const QuaternionF& q) {
    double x = q.r(), y = q.i(), z = q.j(), t = q.k();
    double s = std::sqrt(y * y + z * z + t * t);
    if (s == 0.0) return {QuaternionF(1.0), x, 0.0};
    double ux = y / s, uy = z / s, uz = t / s;
    if (uy == 0.0 && uz == 0.0 && ux > 0.0) return {QuaternionF(1.0), x, s};
    // p = i + u satisfies p i p^-1 = u, hence p^-1 q p = x + s i. Near
    // u = -i that sum cancels, so pre-conjugate by j (which sends
    // yi+zj+tk to -yi+zj-tk) and fold j into p.
    bool flip = ux < -0.5;
    if (flip) {
        ux = -ux;
        uz = -uz;
    }
    QuaternionF p(0.0, ux + 1.0, uy, uz);
    if (flip) p = QuaternionF::unit_j() * p;
    return {p, x, s};
}

// Exact-rational variant, applicable when y^2+z^2+t^2 is a perfect square.
struct ComplexifyQ {
    QuaternionQ p;
    Rational x;
    Rational s;
};

inline bool quat_complexify_exact(const QuaternionQ& q, ComplexifyQ& out) {
    Rational y = q.i(), z = q.j(), t = q.k();
    Rational n = y * y + z * z + t * t;
    Rational s;
    if (!rational_sqrt(n, s)) return false;
    if (s.is_zero()) {
        out = {QuaternionQ(Rational(1)), q.r(), Rational(0)};
        return true;
    }
    Rational ux = y / s, uy = z / s, uz = t / s;
    if (uy.is_zero() && uz.is_zero() && ux == Rational(1)) {
        out = {QuaternionQ(Rational(1)), q.r(), s};
        return true;
    }
    bool flip = ux < Rational(0);
    if (flip) {
        ux = -ux;
        uz = -uz;
    }
    QuaternionQ p(Rational(0), ux + Rational(1), uy, uz);
    if (flip) p = QuaternionQ::unit_j() * p;
    out = {p, q.r(), s};
    return true;
}

}  // namespace tracefactor
