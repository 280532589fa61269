#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "logser/logser.hpp"
#include "oracles.hpp"

using namespace logser;

namespace {

coefficient_vector vec(std::vector<std::int64_t> c) {
    std::vector<rational> q;
    for (auto x : c) q.push_back(make_rational(x));
    return make_vector(c.size(), std::move(q));
}

double d(real x) { return static_cast<double>(x); }

}  // namespace

TEST(BlockTerm, Examples) {
    EXPECT_EQ(block_term(ln_vector(2), 0), make_rational(1, 2));
    EXPECT_EQ(block_term(ln_vector(2), 1), make_rational(1, 12));
    EXPECT_EQ(block_term(vec({1, -3, 1, 1}), 0), make_rational(1, 12));
}

TEST(BlockTerm, MatchesNaive) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        auto v = oracle::random_balanced(rng, 2 + rng() % 9);
        auto k = rng() % 500;
        EXPECT_EQ(block_term(v, k), oracle::naive_block(v, k));
    }
}

TEST(PartialSumExact, Examples) {
    EXPECT_EQ(partial_sum_exact(ln_vector(2), 2), make_rational(7, 12));
    EXPECT_EQ(partial_sum_exact(vec({3, -1, -2}), 0), 0);
    EXPECT_EQ(partial_sum_exact(lift(ln_vector(2), 2), 1), make_rational(7, 12));
}

TEST(PartialSumExact, RationalCoefficients) {
    auto v = make_vector(3, {make_rational(1, 2), make_rational(-2, 3), make_rational(1, 6)});
    for (std::uint64_t K : {1u, 5u, 33u}) EXPECT_EQ(partial_sum_exact(v, K), oracle::naive_partial_sum(v, K));
}

TEST(PartialSumExact, Budget) {
    EXPECT_THROW(partial_sum_exact(ln_vector(10), 200'000), budget_exceeded);
    EXPECT_NO_THROW(partial_sum_exact(ln_vector(10), 100, 1000));
    EXPECT_THROW(partial_sum_exact(ln_vector(10), 101, 1000), budget_exceeded);
}

TEST(Harmonic, Examples) {
    EXPECT_EQ(harmonic(1), 1);
    EXPECT_EQ(harmonic(4), make_rational(25, 12));
    EXPECT_EQ(harmonic(0), 0);
    EXPECT_EQ(harmonic(300), oracle::naive_harmonic(300));
    EXPECT_THROW(harmonic(1'000'001), budget_exceeded);
}

TEST(FiniteIdentity, PartialSumIsHarmonicDifference) {
    for (std::uint64_t T = 1; T <= 8; ++T)
        for (std::uint64_t n : {0u, 1u, 2u, 17u, 200u})
            EXPECT_EQ(partial_sum_exact(ln_vector(T), n), harmonic(n * T) - harmonic(n)) << T << " " << n;
}

TEST(TailBound, Examples) {
    EXPECT_NEAR(d(tail_bound(ln_vector(2), 101)), 1.0 / 400, 1e-18);
    // reference tail ln 2 - S_101, from mpmath
    const double true_tail = 0.0024691207495165919;
    EXPECT_NEAR(d(std::log(2.0L) - to_real(partial_sum_exact(ln_vector(2), 101))), true_tail, 1e-15);
    EXPECT_LE(true_tail, d(tail_bound(ln_vector(2), 101)));
    EXPECT_EQ(tail_bound(zero_vector(5), 2), 0);
    EXPECT_NEAR(d(tail_bound(ln_vector(3), 2)), 1.0 / 3, 1e-18);
    EXPECT_EQ(tail_bound(zero_vector(1), 2), 0);
    EXPECT_THROW(tail_bound(ln_vector(2), 1), invalid_argument);
}

TEST(TailBound, SoundOnRandomVectors) {
    // reference: float sum at 1000 K; its own tail is at most tail_bound(1000 K), charged against the bound
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const std::uint64_t T = 2 + rng() % 11;
        auto v = oracle::random_balanced(rng, T);
        for (std::uint64_t K : {2u, 10u, 100u}) {
            const real reference = oracle::float_partial_sum(v, K * 1000);
            const real partial = to_real(partial_sum_exact(v, K));
            EXPECT_LE(std::fabs(reference - partial), tail_bound(v, K) - tail_bound(v, K * 1000) + 1e-15L)
                << to_string(v) << " K=" << K;
        }
    }
}

TEST(Moments, Examples) {
    EXPECT_EQ(moments(ln_vector(2), 1), (std::vector<rational>{-1}));
    EXPECT_EQ(moments(ln_vector(3), 2), (std::vector<rational>{-3, -13}));
    for (const auto& m : moments(zero_vector(4), 5)) EXPECT_EQ(m, 0);
    EXPECT_THROW(moments(ln_vector(2), 0), invalid_argument);
    EXPECT_THROW(moments(ln_vector(2), 17), invalid_argument);
}

TEST(HurwitzZetaTail, AgainstClosedForms) {
    const real pi2_6 = std::numbers::pi_v<real> * std::numbers::pi_v<real> / 6;
    EXPECT_NEAR(d(hurwitz_zeta_tail(2, 1).value), d(pi2_6), 1e-17);
    // zeta(4) = pi^4 / 90
    EXPECT_NEAR(d(hurwitz_zeta_tail(4, 1).value), d(pi2_6 * pi2_6 / 2.5L), 1e-17);
    // sum_{k >= 1000} k^-2 = zeta(2) - H_999^(2), by direct subtraction
    real partial = 0;
    for (int k = 999; k >= 1; --k) partial += 1.0L / (static_cast<real>(k) * k);
    EXPECT_NEAR(d(hurwitz_zeta_tail(2, 1000).value), d(pi2_6 - partial), 1e-17);
}

TEST(HurwitzZetaTail, RemainderBoundsBruteForce) {
    for (int s : {2, 3, 5, 9}) {
        // brute force over [20, 20000) plus Euler-Maclaurin's leading term for the rest
        real brute = 0;
        for (int k = 19999; k >= 20; --k) brute += std::pow(static_cast<real>(k), -static_cast<real>(s));
        brute += hurwitz_zeta_tail(s, 20000).value;
        auto z = hurwitz_zeta_tail(s, 20);
        EXPECT_LE(std::fabs(z.value - brute), z.remainder_bound + 1e-18L) << s;
    }
}

TEST(Evaluate, RawLn2) {
    auto r = evaluate(ln_vector(2), 1e-6L, method::raw);
    EXPECT_NEAR(d(r.value), std::log(2.0), 1e-6);
    EXPECT_LE(r.error_bound, 1e-6L);
    EXPECT_FALSE(r.bound_is_heuristic);
    EXPECT_LE(std::fabs(r.value - std::log(2.0L)), r.error_bound);
    EXPECT_GE(r.blocks_used, 250'000u);
    // smallest K: one block fewer no longer meets the tolerance
    EXPECT_GT(tail_bound(ln_vector(2), r.blocks_used - 1), 1e-6L * (1 - 1.0L / 1024));
}

TEST(Evaluate, ZeroVector) {
    for (auto m : {method::raw, method::accelerated}) {
        auto r = evaluate(zero_vector(5), 1e-3L, m);
        EXPECT_EQ(r.value, 0);
        EXPECT_EQ(r.error_bound, 0);
    }
    auto r = evaluate(zero_vector(5), 1e-3L, method::raw);
    EXPECT_EQ(r.blocks_used, 2u);
}

TEST(Evaluate, AcceleratedPiSeries) {
    auto r = evaluate(vec({1, -1, 0}), 1e-9L, method::accelerated);
    // pi / (3 sqrt 3)
    EXPECT_NEAR(d(r.value), 0.60459978807807261686, 1e-9);
    EXPECT_TRUE(r.bound_is_heuristic);
    EXPECT_LE(r.error_bound, 1e-9L);
    EXPECT_EQ(r.blocks_used, 1000u);
}

TEST(Evaluate, Errors) {
    EXPECT_THROW(evaluate(ln_vector(2), 0), invalid_argument);
    EXPECT_THROW(evaluate(ln_vector(2), -1), invalid_argument);
    EXPECT_THROW(evaluate(ln_vector(2), 1e-25L), unachievable);
    EXPECT_THROW(evaluate(ln_vector(2), 1e-9L, method::raw), budget_exceeded);
    eval_options tight;
    tight.block_budget = 100;
    EXPECT_THROW(evaluate(ln_vector(2), 1e-9L, method::accelerated, tight), budget_exceeded);
}

TEST(Evaluate, AcceleratedGrowsWorkWhenNeeded) {
    eval_options opts;
    opts.prefix_blocks = 4;
    opts.expansion_order = 2;
    auto r = evaluate(ln_vector(7), 1e-15L, method::accelerated, opts);
    EXPECT_NEAR(d(r.value), std::log(7.0), 1e-14);
    EXPECT_LE(r.error_bound, 1e-15L);
}

TEST(Evaluate, Linearity) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const std::uint64_t T = 2 + rng() % 6;
        auto u = oracle::random_balanced(rng, T);
        auto v = oracle::random_balanced(rng, T);
        rational alpha = make_rational(static_cast<std::int64_t>(rng() % 7) - 3, 1 + rng() % 3);
        rational beta = make_rational(static_cast<std::int64_t>(rng() % 7) - 3, 1 + rng() % 3);
        auto w = linear_combine({{alpha, u}, {beta, v}});
        for (auto m : {method::raw, method::accelerated}) {
            const real tol = m == method::raw ? 1e-4L : 1e-12L;
            auto ru = evaluate(u, tol, m), rv = evaluate(v, tol, m), rw = evaluate(w, tol, m);
            const real a = to_real(alpha), b = to_real(beta);
            EXPECT_LE(std::fabs(rw.value - (a * ru.value + b * rv.value)),
                      rw.error_bound + std::fabs(a) * ru.error_bound + std::fabs(b) * rv.error_bound + 1e-17L);
        }
    }
}

TEST(Evaluate, RawAndAcceleratedAgree) {
    // raw at 1e-9 needs ~5e8 blocks, beyond the default budget; compare at the raw
    // mode's budget-compatible tolerance instead
    for (std::uint64_t T = 2; T <= 10; ++T) {
        auto raw = evaluate(ln_vector(T), 1e-6L, method::raw);
        auto acc = evaluate(ln_vector(T), 1e-9L, method::accelerated);
        EXPECT_LE(std::fabs(raw.value - acc.value), raw.error_bound + acc.error_bound) << T;
        EXPECT_NEAR(d(acc.value), std::log(double(T)), 1e-9);
    }
}

TEST(RearrangedTerms, Examples) {
    using r = std::vector<rational>;
    EXPECT_EQ(rearranged_terms(2, 3), (r{1, make_rational(1, 2), -1}));
    EXPECT_EQ(rearranged_terms(1, 4), (r{1, -1, make_rational(1, 2), make_rational(-1, 2)}));
    EXPECT_EQ(rearranged_terms(3, 4), (r{1, make_rational(1, 2), make_rational(1, 3), -1}));
    EXPECT_THROW(rearranged_terms(2, 1'000'001), budget_exceeded);
}

TEST(RearrangedTerms, BlocksMatchLnVector) {
    for (std::uint64_t T = 1; T <= 10; ++T) {
        const std::uint64_t blocks = 101;
        auto terms = rearranged_terms(T, blocks * (T + 1));
        for (std::uint64_t k = 0; k < blocks; ++k) {
            rational s = 0;
            for (std::uint64_t i = 0; i <= T; ++i) s += terms[k * (T + 1) + i];
            ASSERT_EQ(s, block_term(ln_vector(T), k)) << T << " " << k;
        }
    }
}

TEST(GammaPartial, Examples) {
    EXPECT_EQ(gamma_partial(1).value, 1);
    EXPECT_NEAR(d(gamma_partial(2).value), 0.80685281944005469058, 1e-15);
    auto g = gamma_partial(10000);
    EXPECT_NEAR(d(g.value), 0.57726566406819952811, 1e-15);
    EXPECT_NEAR(d(g.value), d(oracle::euler_gamma), 1e-4);
    EXPECT_THROW(gamma_partial(0), invalid_argument);
}

TEST(GammaPartial, SequenceMatchesExact) {
    auto seq = gamma_partial_sequence(5000);
    for (std::uint64_t n : {1u, 2u, 10u, 999u, 5000u}) EXPECT_NEAR(d(seq[n - 1]), d(gamma_partial(n).value), 1e-17);
}

TEST(GammaPartial, DifferenceBracket) {
    auto seq = gamma_partial_sequence(10001);
    for (std::uint64_t n = 1; n <= 10000; ++n) {
        const real diff = seq[n] - seq[n - 1];
        const real nn = static_cast<real>(n);
        ASSERT_LT(diff, 1e-12L) << n;
        ASSERT_GT(diff, -1 / (nn * (nn + 1)) - 1e-12L) << n;
    }
}
