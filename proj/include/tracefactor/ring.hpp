#pragma once

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Common ring machinery: error types, the ring concept, and per-scalar
// traits used by the generic algorithms.
//
// Conventions used throughout the library:
//   * scalars are immutable values; all operations return new values;
//   * multiplication is never assumed commutative;
//   * equality is exact structural equality on reduced forms
//     (float quaternions are the single tolerance-based exception).

namespace tracefactor {

struct ring_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct zero_inverse : ring_error {
    zero_inverse() : ring_error("inverse of zero") {}
};
struct not_a_unit : ring_error {
    explicit not_a_unit(const std::string& what) : ring_error("not a unit: " + what) {}
};
struct ring_mismatch : ring_error {
    explicit ring_mismatch(const std::string& what) : ring_error("ring mismatch: " + what) {}
};
struct parse_error : ring_error {
    explicit parse_error(const std::string& what) : ring_error("parse error: " + what) {}
};

// Unital ring scalar. Addition/multiplication are exact; multiplication
// need not commute.
template <typename R>
concept RingScalar = requires(const R& a, const R& b) {
    { a + b } -> std::convertible_to<R>;
    { a - b } -> std::convertible_to<R>;
    { a * b } -> std::convertible_to<R>;
    { -a } -> std::convertible_to<R>;
    { a == b } -> std::convertible_to<bool>;
    { R::zero(a) } -> std::convertible_to<R>;
    { R::one(a) } -> std::convertible_to<R>;
    { a.is_zero() } -> std::convertible_to<bool>;
};

// Division scalar: nonzero elements invert exactly. inverse() throws
// zero_inverse on zero.
template <typename R>
concept DivisionScalar = RingScalar<R> && requires(const R& a) {
    { a.inverse() } -> std::convertible_to<R>;
};

// Per-ring metadata consumed by the generic algorithms. Specialised next
// to each scalar type.
//
//   is_field          multiplication commutes and nonzero elements invert
//   is_division_ring  nonzero elements invert (fields included)
//   is_exact          equality is exact (everything except float quaternions)
//   characteristic()  additive order of one, 0 for characteristic zero
//   centre_dim()      dimension of the ring over its centre (1 for fields,
//                     4 for quaternions); used to turn one-sided linear
//                     equations over the ring into plain linear systems
//                     over the centre
template <typename R>
struct ring_traits;

// Convenience: n copies of one() added up, so integer literals land in the
// right characteristic.
template <RingScalar R>
R ring_int(const R& model, long n) {
    R one = R::one(model);
    R acc = R::zero(model);
    bool neg = n < 0;
    unsigned long k = neg ? -static_cast<unsigned long>(n) : static_cast<unsigned long>(n);
    for (unsigned long m = 0; m < k; ++m) acc = acc + one;
    return neg ? -acc : acc;
}

}  // namespace tracefactor
