#pragma once

// Numeric evaluation of S_T(a): exact partial sums, a rigorous truncation
// bound, a moment-expansion tail for acceleration, the interleaved
// "harmonic minus 1/(k+1)" stream, and the partials A_n = H_n - ln n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coefficient_vector.hpp"
#include "errors.hpp"
#include "rational.hpp"
#include "real.hpp"

namespace logser {

inline constexpr std::uint64_t default_block_budget = 1'000'000;

enum class method { raw, accelerated };

inline std::string_view to_string(method m) { return m == method::raw ? "raw" : "accelerated"; }

inline std::optional<method> parse_method(std::string_view s) {
    if (s == "raw") return method::raw;
    if (s == "accelerated") return method::accelerated;
    return std::nullopt;
}

struct eval_options {
    /// Cap on block-terms (K*T) for exact sums and on blocks K for raw summation.
    std::uint64_t block_budget = default_block_budget;
    /// Exact prefix length K0 before the expanded tail (accelerated only).
    std::uint64_t prefix_blocks = 1000;
    /// Highest moment used in the tail expansion; raised up to 16 when needed.
    int expansion_order = 8;
};

struct eval_result {
    real value = 0;
    real error_bound = 0;
    std::uint64_t blocks_used = 0;
    logser::method method = method::raw;
    bool bound_is_heuristic = false;
};

struct gamma_partial_value {
    std::uint64_t n = 1;
    real value = 0;
};

/// Smallest tolerance evaluate() accepts.
inline constexpr real precision_floor = 256 * real_epsilon;

namespace detail {

struct split_sum {
    integer num;
    integer den;
};

// sum over i in [lo, hi) of coeff(i) / (i + 1), as an unreduced fraction.
template <typename Coeff>
split_sum binary_split(std::uint64_t lo, std::uint64_t hi, const Coeff& coeff) {
    if (hi - lo == 1) {
        const integer& c = coeff(lo);
        if (c == 0) return {integer(0), integer(1)};
        return {c, integer(static_cast<unsigned long>(lo + 1))};
    }
    std::uint64_t mid = lo + (hi - lo) / 2;
    auto left = binary_split(lo, mid, coeff);
    auto right = binary_split(mid, hi, coeff);
    if (left.num == 0) return right;
    if (right.num == 0) return left;
    return {left.num * right.den + right.num * left.den, left.den * right.den};
}

// Integer coefficients c_j = a_j * D with D the lcm of the denominators.
inline std::pair<std::vector<integer>, integer> clear_denominators(const coefficient_vector& v) {
    integer D = 1;
    for (const auto& a : v.coeffs()) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), a.get_den_mpz_t());
    std::vector<integer> c;
    c.reserve(v.modulus());
    for (const auto& a : v.coeffs()) c.push_back(a.get_num() * (D / a.get_den()));
    return {std::move(c), std::move(D)};
}

// sum over the terms with global index in [first, last): term i is a_{i mod T} / (i + 1),
// since block k, slot j has denominator kT + j.
inline rational exact_range_sum(const coefficient_vector& v, std::uint64_t first, std::uint64_t last) {
    if (first >= last) return 0;
    auto [c, D] = clear_denominators(v);
    const std::uint64_t T = v.modulus();
    auto s = binary_split(first, last, [&](std::uint64_t i) -> const integer& { return c[i % T]; });
    return make_rational(s.num, s.den * D);
}

inline void check_budget(std::uint64_t work, std::uint64_t budget, std::string_view what) {
    if (work > budget)
        throw budget_exceeded(std::string(what) + " needs " + std::to_string(work) + " block-terms, budget is " +
                              std::to_string(budget));
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
    return a * b;
}

}  // namespace detail

/// Block k: sum_j a_j / (kT + j), exactly.
inline rational block_term(const coefficient_vector& v, std::uint64_t k) {
    const auto T = v.modulus();
    return detail::exact_range_sum(v, k * T, (k + 1) * T);
}

/// Sum of the first K blocks, exactly.
inline rational partial_sum_exact(const coefficient_vector& v, std::uint64_t K,
                                  std::uint64_t block_budget = default_block_budget) {
    const auto work = detail::checked_mul(K, v.modulus());
    detail::check_budget(work, block_budget, "partial_sum_exact");
    return detail::exact_range_sum(v, 0, work);
}

/// H_n = 1 + 1/2 + ... + 1/n, exactly; H_0 = 0.
inline rational harmonic(std::uint64_t n, std::uint64_t block_budget = default_block_budget) {
    detail::check_budget(n, block_budget, "harmonic");
    if (n == 0) return 0;
    const integer one = 1;
    auto s = detail::binary_split(0, n, [&](std::uint64_t) -> const integer& { return one; });
    return make_rational(s.num, s.den);
}

/// M = sum_j |a_j| (T - j), the constant behind tail_bound.
inline rational tail_constant(const coefficient_vector& v) {
    const auto T = v.modulus();
    rational M = 0;
    for (std::uint64_t j = 1; j <= T; ++j) M += abs(v[j - 1]) * static_cast<unsigned long>(T - j);
    return M;
}

/// Rigorous bound on |S_T(a) - partial_sum_exact(a, K)|, namely M / (T^2 (K - 1)).
///
/// Using balance, block k equals sum_j a_j (T - j) / ((kT + j)(kT + T)), which is
/// at most M / (kT)^2 in magnitude; the tail k >= K is then dominated by the
/// integral of M / (T x)^2 from K - 1. Rounded upward.
inline real tail_bound(const coefficient_vector& v, std::uint64_t K) {
    if (K < 2) throw invalid_argument("tail_bound needs K >= 2");
    const auto T = v.modulus();
    if (T == 1) return 0;
    rational M = tail_constant(v);
    integer scale = integer(static_cast<unsigned long>(T)) * static_cast<unsigned long>(T) *
                    integer(static_cast<unsigned long>(K - 1));
    return to_real(M / rational(scale), MPFR_RNDU);
}

/// mu_m = sum_j a_j j^m for m = 1..m_max.
inline std::vector<rational> moments(const coefficient_vector& v, int m_max) {
    if (m_max < 1 || m_max > 16) throw invalid_argument("moments needs 1 <= m_max <= 16");
    std::vector<rational> mu(m_max, rational(0));
    for (std::uint64_t j = 1; j <= v.modulus(); ++j) {
        if (v[j - 1] == 0) continue;
        rational power = v[j - 1];
        for (int m = 0; m < m_max; ++m) {
            power *= static_cast<unsigned long>(j);
            mu[m] += power;
        }
    }
    return mu;
}

struct zeta_tail_value {
    real value = 0;
    /// Magnitude of the first omitted Euler-Maclaurin correction.
    real remainder_bound = 0;
};

/// sum_{k >= a} k^{-s} for integer s >= 2, a >= 1.
///
/// Sums directly up to N = max(a, 64), then applies Euler-Maclaurin at N with
/// corrections through B_6. The B_8 term bounds the remainder because every
/// derivative of k^{-s} has constant sign.
inline zeta_tail_value hurwitz_zeta_tail(int s, std::uint64_t a) {
    if (s < 2) throw invalid_argument("hurwitz_zeta_tail needs s >= 2");
    if (a < 1) throw invalid_argument("hurwitz_zeta_tail needs a >= 1");
    constexpr std::uint64_t min_start = 64;
    compensated_sum direct;
    std::uint64_t N = a;
    for (; N < min_start; ++N) direct.add(std::pow(static_cast<real>(N), -static_cast<real>(s)));

    // B_{2i} / (2i)! for i = 1..4
    constexpr real bernoulli_over_factorial[] = {1.0L / 12, -1.0L / 720, 1.0L / 30240, -1.0L / 1209600};
    const real x = static_cast<real>(N);
    const real sr = static_cast<real>(s);
    const real x_pow = std::pow(x, -sr);
    real sum = x * x_pow / (sr - 1) + x_pow / 2;
    // rising factorial s (s+1) ... (s+2i-2) times x^{-s-2i+1}
    real rising = sr;
    real term_pow = x_pow / x;
    real next = 0;
    for (int i = 0; i < 4; ++i) {
        real term = bernoulli_over_factorial[i] * rising * term_pow;
        if (i < 3)
            sum += term;
        else
            next = std::fabs(term);
        rising *= (sr + 2 * i + 1) * (sr + 2 * i + 2);
        term_pow /= x * x;
    }
    return {direct.value() + sum, next + direct.rounding_bound(4) + 8 * real_epsilon * sum};
}

namespace detail {

inline eval_result evaluate_raw(const coefficient_vector& v, real abs_err, const eval_options& opts) {
    const auto T = v.modulus();
    eval_result r;
    r.method = method::raw;
    if (v.is_zero()) {
        r.blocks_used = 2;
        return r;
    }
    // Leave a sliver of the tolerance for rounding.
    const real target = abs_err * (1 - 1.0L / 1024);
    const rational M = tail_constant(v);
    const real blocks_needed = to_real(M, MPFR_RNDU) / (static_cast<real>(T) * static_cast<real>(T) * target);
    if (!(blocks_needed + 1 <= static_cast<real>(opts.block_budget)))
        throw budget_exceeded("raw evaluation at tolerance " + format_real(abs_err, 3) + " needs about " +
                              format_real(blocks_needed + 1, 3) + " blocks, budget is " +
                              std::to_string(opts.block_budget));
    std::uint64_t K = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(blocks_needed)) + 1);
    while (K > 2 && tail_bound(v, K - 1) <= target) --K;
    while (tail_bound(v, K) > target) ++K;
    detail::check_budget(K, opts.block_budget, "raw evaluation");

    std::vector<real> a(T);
    for (std::uint64_t j = 0; j < T; ++j) a[j] = to_real(v[j]);
    compensated_sum acc;
    for (std::uint64_t k = 0; k < K; ++k) {
        const real base = static_cast<real>(k) * static_cast<real>(T);
        for (std::uint64_t j = 0; j < T; ++j)
            if (a[j] != 0) acc.add(a[j] / (base + static_cast<real>(j + 1)));
    }
    r.value = acc.value();
    r.error_bound = tail_bound(v, K) + acc.rounding_bound(2);
    r.blocks_used = K;
    return r;
}

struct expansion_tail {
    real value = 0;
    real error_bound = 0;
};

// sum over k >= K0 of block k via sum_m (-1)^m mu_m T^{-(m+1)} zeta(m+1, K0).
// The omitted orders shrink by at least a factor 1/K0 each, so twice the
// first omitted term (with |a_j| in place of a_j) bounds them for K0 >= 2.
inline expansion_tail moment_tail(const coefficient_vector& v, std::uint64_t K0, int order) {
    const auto T = v.modulus();
    const auto mu = moments(v, order);
    expansion_tail tail;
    compensated_sum acc;
    rational t_power = static_cast<unsigned long>(T);
    for (int m = 1; m <= order; ++m) {
        t_power *= static_cast<unsigned long>(T);
        const real coeff = to_real(mu[m - 1] / t_power);
        const auto z = hurwitz_zeta_tail(m + 1, K0);
        const real term = (m % 2 ? -coeff : coeff) * z.value;
        acc.add(term);
        tail.error_bound += std::fabs(coeff) * z.remainder_bound;
    }
    rational abs_moment = 0;
    for (std::uint64_t j = 1; j <= T; ++j) {
        rational power = abs(v[j - 1]);
        for (int m = 0; m <= order; ++m) power *= static_cast<unsigned long>(j);
        abs_moment += power;
    }
    t_power *= static_cast<unsigned long>(T);
    const auto z_next = hurwitz_zeta_tail(order + 2, K0);
    const real first_omitted = to_real(abs_moment / t_power, MPFR_RNDU) * (z_next.value + z_next.remainder_bound);
    tail.value = acc.value();
    tail.error_bound += 2 * first_omitted + acc.rounding_bound(4);
    return tail;
}

inline eval_result evaluate_accelerated(const coefficient_vector& v, real abs_err, const eval_options& opts) {
    const auto T = v.modulus();
    eval_result r;
    r.method = method::accelerated;
    r.bound_is_heuristic = true;
    if (v.is_zero()) {
        r.blocks_used = std::max<std::uint64_t>(2, opts.prefix_blocks);
        return r;
    }
    std::uint64_t K0 = std::max<std::uint64_t>(2, opts.prefix_blocks);
    int order = std::clamp(opts.expansion_order, 1, 16);
    for (;;) {
        detail::check_budget(detail::checked_mul(K0, T), opts.block_budget, "accelerated prefix");
        const real prefix = to_real(partial_sum_exact(v, K0, opts.block_budget));
        for (;;) {
            auto tail = moment_tail(v, K0, order);
            const real rounding = 2 * real_epsilon * (std::fabs(prefix) + std::fabs(tail.value));
            const real bound = tail.error_bound + rounding;
            if (bound <= abs_err) {
                r.value = prefix + tail.value;
                r.error_bound = bound;
                r.blocks_used = K0;
                return r;
            }
            if (rounding > abs_err / 2)
                throw unachievable("tolerance " + format_real(abs_err, 3) + " is below the working-precision floor");
            if (order == 16) break;
            order = std::min(16, order + 4);
        }
        K0 *= 2;
    }
}

}  // namespace detail

/// Evaluates S_T(a) to absolute tolerance abs_err.
///
/// raw: smallest K >= 2 with tail_bound(K) <= abs_err, summed in floating
/// point; the reported bound is rigorous.
/// accelerated: K0 exact blocks plus the moment-expansion tail; the bound is
/// an estimate (bound_is_heuristic).
inline eval_result evaluate(const coefficient_vector& v, real abs_err, method m = method::accelerated,
                            const eval_options& opts = {}) {
    if (!(abs_err > 0)) throw invalid_argument("abs_err must be positive");
    if (abs_err < precision_floor)
        throw unachievable("tolerance " + format_real(abs_err, 3) +
                           " is below the working-precision floor; raise the working precision");
    if (v.modulus() == 1) {
        eval_result r;
        r.method = m;
        r.bound_is_heuristic = m == method::accelerated;
        r.blocks_used = 2;
        return r;
    }
    return m == method::raw ? detail::evaluate_raw(v, abs_err, opts) : detail::evaluate_accelerated(v, abs_err, opts);
}

/// Floating sum of the first K blocks with tail_bound(K) plus rounding as the
/// bound. Fixed-work variant of raw evaluation, used for benchmarks.
inline eval_result evaluate_raw_blocks(const coefficient_vector& v, std::uint64_t K,
                                       std::uint64_t block_budget = default_block_budget) {
    if (K < 2) throw invalid_argument("raw evaluation needs K >= 2");
    detail::check_budget(K, block_budget, "raw evaluation");
    const auto T = v.modulus();
    compensated_sum acc;
    std::vector<real> a(T);
    for (std::uint64_t j = 0; j < T; ++j) a[j] = to_real(v[j]);
    for (std::uint64_t k = 0; k < K; ++k)
        for (std::uint64_t j = 0; j < T; ++j)
            if (a[j] != 0) acc.add(a[j] / (static_cast<real>(k) * static_cast<real>(T) + static_cast<real>(j + 1)));
    return {acc.value(), tail_bound(v, K) + acc.rounding_bound(2), K, method::raw, false};
}

/// Fixed-work variant of accelerated evaluation: K0 exact blocks, given order.
inline eval_result evaluate_accelerated_blocks(const coefficient_vector& v, std::uint64_t K0, int order = 8,
                                               std::uint64_t block_budget = default_block_budget) {
    if (K0 < 2) throw invalid_argument("accelerated evaluation needs K0 >= 2");
    if (v.modulus() == 1) return {0, 0, K0, method::accelerated, true};
    const real prefix = to_real(partial_sum_exact(v, K0, block_budget));
    auto tail = detail::moment_tail(v, K0, std::clamp(order, 1, 16));
    const real value = prefix + tail.value;
    return {value, tail.error_bound + 2 * real_epsilon * (std::fabs(prefix) + std::fabs(tail.value)), K0,
            method::accelerated, true};
}

/// First n terms of: for each block k, 1/(kT+1), ..., 1/(kT+T), then -1/(k+1).
inline std::vector<rational> rearranged_terms(std::uint64_t T, std::uint64_t n,
                                              std::uint64_t block_budget = default_block_budget) {
    if (T < 1) throw invalid_argument("rearranged_terms needs T >= 1");
    detail::check_budget(n, block_budget, "rearranged_terms");
    std::vector<rational> out;
    out.reserve(n);
    for (std::uint64_t k = 0; out.size() < n; ++k) {
        for (std::uint64_t j = 1; j <= T && out.size() < n; ++j)
            out.push_back(make_rational(1, static_cast<std::int64_t>(k * T + j)));
        if (out.size() < n) out.push_back(make_rational(-1, static_cast<std::int64_t>(k + 1)));
    }
    return out;
}

/// A_n = H_n - ln n with H_n exact and the logarithm in working precision.
inline gamma_partial_value gamma_partial(std::uint64_t n, std::uint64_t block_budget = default_block_budget) {
    if (n < 1) throw invalid_argument("gamma_partial needs n >= 1");
    const rational h = harmonic(n, block_budget);
    return {n, to_real(h) - std::log(static_cast<real>(n))};
}

/// A_1, ..., A_{n_max} with H_n accumulated in compensated floating point.
inline std::vector<real> gamma_partial_sequence(std::uint64_t n_max,
                                                std::uint64_t block_budget = default_block_budget) {
    detail::check_budget(n_max, block_budget, "gamma_partial_sequence");
    std::vector<real> out;
    out.reserve(n_max);
    compensated_sum h;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        h.add(1 / static_cast<real>(n));
        out.push_back(h.value() - std::log(static_cast<real>(n)));
    }
    return out;
}

}  // namespace logser
