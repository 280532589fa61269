#pragma once

// Balanced coefficient vectors a = (a_1, ..., a_T) with a_1 + ... + a_T = 0.
// Each one names the convergent series
//
//     S_T(a) = sum_{k >= 0} sum_{j = 1..T} a_j / (kT + j).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace logser {

class coefficient_vector {
public:
    /// Validating constructor; see make_vector.
    coefficient_vector(std::uint64_t modulus, std::vector<rational> coeffs) : coeffs_(std::move(coeffs)) {
        if (modulus < 1) throw invalid_argument("modulus must be at least 1");
        if (coeffs_.size() != modulus)
            throw length_mismatch("expected " + std::to_string(modulus) + " coefficients, got " +
                                  std::to_string(coeffs_.size()));
        rational total = std::accumulate(coeffs_.begin(), coeffs_.end(), rational(0));
        if (total != 0)
            throw unbalanced_coefficients("coefficients sum to " + to_string(total) +
                                          "; the series converges if and only if they sum to zero");
    }

    std::uint64_t modulus() const { return coeffs_.size(); }
    std::span<const rational> coeffs() const { return coeffs_; }
    const rational& operator[](std::size_t i) const { return coeffs_[i]; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    friend bool operator==(const coefficient_vector&, const coefficient_vector&) = default;

    coefficient_vector operator-() const {
        std::vector<rational> out;
        out.reserve(coeffs_.size());
        for (const auto& c : coeffs_) out.push_back(-c);
        return {modulus(), std::move(out)};
    }

private:
    std::vector<rational> coeffs_;
};

inline std::string to_string(const coefficient_vector& v) {
    std::string s = "(";
    for (std::size_t j = 0; j < v.modulus(); ++j) {
        if (j) s += ",";
        s += to_string(v[j]);
    }
    return s + ") over " + std::to_string(v.modulus());
}

inline std::ostream& operator<<(std::ostream& os, const coefficient_vector& v) { return os << to_string(v); }

/// Throws length_mismatch or unbalanced_coefficients.
inline coefficient_vector make_vector(std::uint64_t T, std::vector<rational> coeffs) {
    return coefficient_vector(T, std::move(coeffs));
}

inline coefficient_vector zero_vector(std::uint64_t T) { return {T, std::vector<rational>(T)}; }

/// (1, 1, ..., 1, -(T-1)); its series sums to ln T. T = 1 gives (0).
inline coefficient_vector ln_vector(std::uint64_t T) {
    if (T < 1) throw invalid_argument("ln_vector needs T >= 1");
    std::vector<rational> c(T, rational(1));
    c.back() = -rational(static_cast<long>(T - 1));
    return {T, std::move(c)};
}

/// Repeats the coefficients m times, moving to modulus m*T.
/// Block k of the result regroups blocks mk..mk+m-1 of v, so the value is unchanged.
inline coefficient_vector lift(const coefficient_vector& v, std::uint64_t m) {
    if (m < 1) throw invalid_argument("lift factor must be at least 1");
    std::vector<rational> c;
    c.reserve(v.modulus() * m);
    for (std::uint64_t r = 0; r < m; ++r) c.insert(c.end(), v.coeffs().begin(), v.coeffs().end());
    return {v.modulus() * m, std::move(c)};
}

/// Exact sum of scalar * vector over a shared modulus.
inline coefficient_vector linear_combine(std::span<const std::pair<rational, coefficient_vector>> terms) {
    if (terms.empty()) throw invalid_argument("linear_combine needs at least one term");
    const auto T = terms.front().second.modulus();
    std::vector<rational> c(T);
    for (const auto& [scalar, v] : terms) {
        if (v.modulus() != T)
            throw modulus_mismatch("cannot combine modulus " + std::to_string(v.modulus()) + " with modulus " +
                                   std::to_string(T) + "; lift to a common modulus first");
        for (std::uint64_t j = 0; j < T; ++j) c[j] += scalar * v[j];
    }
    return {T, std::move(c)};
}

inline coefficient_vector linear_combine(std::initializer_list<std::pair<rational, coefficient_vector>> terms) {
    return linear_combine(std::span<const std::pair<rational, coefficient_vector>>(terms.begin(), terms.size()));
}

/// Sorted distinct prime divisors by trial division.
inline std::vector<std::uint64_t> factor_radical(std::uint64_t n) {
    if (n < 1 || n > static_cast<std::uint64_t>(INT64_MAX)) throw invalid_argument("factor_radical needs 1 <= n < 2^63");
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            primes.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) primes.push_back(n);
    return primes;
}

namespace detail {

inline long exponent_of(std::uint64_t n, std::uint64_t p) {
    long e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

}  // namespace detail

/// Largest modulus ln_rational_vector will materialize.
inline constexpr std::uint64_t max_materialized_modulus = 10'000'000;

/// Balanced vector over the radical of M*L whose series sums to ln(M/L):
/// sum over primes p | ML of (e_p(M) - e_p(L)) * lift(ln_vector(p), rad/p).
inline coefficient_vector ln_rational_vector(std::uint64_t M, std::uint64_t L) {
    if (M < 1 || L < 1) throw invalid_argument("ln_rational_vector needs M, L >= 1");
    if (M == L) return zero_vector(1);
    auto primes = factor_radical(M);
    for (auto p : factor_radical(L))
        if (M % p != 0) primes.push_back(p);
    std::sort(primes.begin(), primes.end());
    std::uint64_t T = 1;
    for (auto p : primes) {
        if (T > max_materialized_modulus / p)
            throw budget_exceeded("radical of M*L exceeds " + std::to_string(max_materialized_modulus));
        T *= p;
    }
    std::vector<std::pair<rational, coefficient_vector>> terms;
    for (auto p : primes)
        terms.emplace_back(rational(detail::exponent_of(M, p) - detail::exponent_of(L, p)), lift(ln_vector(p), T / p));
    return linear_combine(terms);
}

}  // namespace logser
