#pragma once

// Reference computations for tests. These deliberately take the slow,
// obvious route (term-by-term running sums, reduced after every step) so
// they stay independent of the library's binary-splitting and expansion code.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "logser/coefficient_vector.hpp"
#include "logser/rational.hpp"
#include "logser/real.hpp"

namespace oracle {

using logser::coefficient_vector;
using logser::rational;
using logser::real;

/// Implementation-independent reference for the Euler-Mascheroni constant,
/// computed once with mpmath at 40 digits.
inline constexpr long double euler_gamma = 0.5772156649015328606065120900824024310422L;
inline constexpr long double pi = 3.1415926535897932384626433832795028841972L;

inline rational naive_block(const coefficient_vector& v, std::uint64_t k) {
    const auto T = v.modulus();
    rational s = 0;
    for (std::uint64_t j = 1; j <= T; ++j) s += v[j - 1] / rational(static_cast<unsigned long>(k * T + j));
    return s;
}

inline rational naive_partial_sum(const coefficient_vector& v, std::uint64_t K) {
    rational s = 0;
    for (std::uint64_t k = 0; k < K; ++k) s += naive_block(v, k);
    return s;
}

inline rational naive_harmonic(std::uint64_t n) {
    rational s = 0;
    for (std::uint64_t i = 1; i <= n; ++i) s += rational(1, static_cast<unsigned long>(i));
    return s;
}

/// Floating partial sum over K blocks, compensated, for large K.
inline real float_partial_sum(const coefficient_vector& v, std::uint64_t K) {
    const auto T = v.modulus();
    std::vector<real> a;
    for (const auto& c : v.coeffs()) a.push_back(logser::to_real(c));
    real sum = 0, comp = 0;
    for (std::uint64_t k = 0; k < K; ++k)
        for (std::uint64_t j = 1; j <= T; ++j) {
            real x = a[j - 1] / static_cast<real>(k * T + j);
            real y = x - comp;
            real t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    return sum;
}

/// Balanced vector with integer coefficients in [-9, 9]; the last slot absorbs the sum
/// and is re-drawn until it also falls in range.
template <typename Rng>
coefficient_vector random_balanced(Rng& rng, std::uint64_t T) {
    std::uniform_int_distribution<int> coeff(-9, 9);
    for (;;) {
        std::vector<rational> c(T);
        long total = 0;
        for (std::uint64_t j = 0; j + 1 < T; ++j) {
            int x = coeff(rng);
            c[j] = x;
            total += x;
        }
        if (T == 1 || (total >= -9 && total <= 9)) {
            c[T - 1] = -total;
            return {T, std::move(c)};
        }
    }
}

}  // namespace oracle
