#pragma once

#include <cstdint>
#include <random>

#include "tracefactor/gaussian.hpp"
#include "tracefactor/matrix.hpp"
#include "tracefactor/modular.hpp"
#include "tracefactor/quaternion.hpp"
#include "tracefactor/rational.hpp"

// Seeded small-height element generators. Determinism matters more than
// distribution quality: the same seed must reproduce the same certificate.

namespace tracefactor {

struct Sampler {
    std::mt19937_64 rng;

    explicit Sampler(std::uint64_t seed) : rng(seed) {}

    long small_int(int lo = -4, int hi = 4) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    }

    Rational rational() {
        long num = small_int();
        long den = 1 + std::abs(small_int(0, 3));
        return Rational(BigInt(num), BigInt(den));
    }
    Gaussian gaussian() { return Gaussian(rational(), rational()); }
    QuaternionQ quaternion() { return {rational(), rational(), rational(), rational()}; }
    QuaternionF quaternionf() {
        std::uniform_real_distribution<double> d(-2.0, 2.0);
        return {d(rng), d(rng), d(rng), d(rng)};
    }
    PrimeField prime_field(std::int64_t p) { return PrimeField(small_int(0, static_cast<int>(p)), p); }
    Modular modular(std::int64_t m) { return Modular(small_int(0, static_cast<int>(m)), m); }

    template <RingScalar R>
    R element(const R& model) {
        if constexpr (std::is_same_v<R, Rational>) {
            (void)model;
            return rational();
        } else if constexpr (std::is_same_v<R, Gaussian>) {
            (void)model;
            return gaussian();
        } else if constexpr (std::is_same_v<R, QuaternionQ>) {
            (void)model;
            return quaternion();
        } else if constexpr (std::is_same_v<R, QuaternionF>) {
            (void)model;
            return quaternionf();
        } else if constexpr (std::is_same_v<R, PrimeField>) {
            return prime_field(model.modulus());
        } else {
            return modular(model.modulus());
        }
    }

    template <RingScalar R>
    Matrix<R> matrix(std::size_t rows, std::size_t cols, const R& model) {
        Matrix<R> m(rows, cols, model);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = element(model);
        return m;
    }

    // random square matrix of the requested rank r: product of full-rank
    // tall and wide pieces plus retries
    template <RingScalar R>
    Matrix<R> matrix_of_rank(std::size_t n, std::size_t r, const R& model);

    template <RingScalar R>
    Matrix<R> invertible_matrix(std::size_t n, const R& model);
};

}  // namespace tracefactor

#include "tracefactor/elimination.hpp"

namespace tracefactor {

template <RingScalar R>
Matrix<R> Sampler::matrix_of_rank(std::size_t n, std::size_t r, const R& model) {
    while (true) {
        Matrix<R> f = matrix(n, r, model);
        Matrix<R> h = matrix(r, n, model);
        Matrix<R> a = f * h;
        if constexpr (ring_traits<R>::is_division_ring) {
            if (rank(a) == r) return a;
        } else {
            return a;
        }
    }
}

template <RingScalar R>
Matrix<R> Sampler::invertible_matrix(std::size_t n, const R& model) {
    while (true) {
        Matrix<R> a = matrix(n, n, model);
        if (is_invertible(a)) return a;
    }
}

}  // namespace tracefactor
