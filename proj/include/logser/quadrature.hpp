#pragma once

// Integral route: S_T(0,..,1,-1,..,0) with the +1 in slot j equals
//
//     I(T, j) = int_0^1 (u^j - u^{j-1}) / (u^T - 1) du,
//
// and ln T = sum_j j * I(T, j). The integrand is evaluated in the cancelled
// form u^{j-1} / (1 + u + ... + u^{T-1}), which is smooth on [0, 1].

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "coefficient_vector.hpp"
#include "errors.hpp"
#include "evaluator.hpp"
#include "real.hpp"

namespace logser {

namespace detail {

struct gauss_rule {
    static constexpr int points = 15;
    std::array<real, points> nodes{};
    std::array<real, points> weights{};
};

// Newton iteration on P_15 from the Chebyshev initial guesses.
inline const gauss_rule& gauss_legendre_15() {
    static const gauss_rule rule = [] {
        gauss_rule r;
        constexpr int n = gauss_rule::points;
        for (int i = 0; i < n; ++i) {
            real x = std::cos(std::numbers::pi_v<real> * (i + 0.75L) / (n + 0.5L));
            real dp = 0;
            for (int iter = 0; iter < 100; ++iter) {
                real p0 = 1, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1);
                real dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 4 * real_epsilon) break;
            }
            r.nodes[i] = x;
            r.weights[i] = 2 / ((1 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

template <typename F>
real gauss_panel(const F& f, real a, real b) {
    const auto& rule = gauss_legendre_15();
    const real half = (b - a) / 2, mid = (a + b) / 2;
    real s = 0;
    for (int i = 0; i < gauss_rule::points; ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return s * half;
}

}  // namespace detail

struct quadrature_result {
    real value = 0;
    real error_estimate = 0;
    std::uint64_t panels = 0;
};

inline constexpr std::uint64_t default_panel_budget = 100'000;

/// Adaptive 15-point Gauss-Legendre with bisection. A panel is accepted when
/// it agrees with the sum of its two halves to within its share of tol.
template <typename F>
quadrature_result adaptive_gauss_legendre(const F& f, real a, real b, real tol,
                                          std::uint64_t panel_budget = default_panel_budget) {
    struct panel {
        real a, b, whole, tol;
        int depth;
    };
    constexpr int max_depth = 48;
    quadrature_result out;
    compensated_sum total;
    std::vector<panel> stack{{a, b, detail::gauss_panel(f, a, b), tol, 0}};
    out.panels = 1;
    while (!stack.empty()) {
        panel p = stack.back();
        stack.pop_back();
        const real mid = (p.a + p.b) / 2;
        const real left = detail::gauss_panel(f, p.a, mid);
        const real right = detail::gauss_panel(f, mid, p.b);
        out.panels += 2;
        const real diff = std::fabs(left + right - p.whole);
        if (diff <= p.tol || diff <= 8 * real_epsilon * std::fabs(left + right)) {
            total.add(left);
            total.add(right);
            out.error_estimate += diff;
            continue;
        }
        if (p.depth >= max_depth || out.panels >= panel_budget)
            throw no_convergence("adaptive quadrature exhausted its refinement budget");
        stack.push_back({p.a, mid, left, p.tol / 2, p.depth + 1});
        stack.push_back({mid, p.b, right, p.tol / 2, p.depth + 1});
    }
    out.value = total.value();
    out.error_estimate += total.rounding_bound(16);
    return out;
}

/// Composite 15-point Gauss-Legendre on `panels` equal panels; the error
/// estimate compares against half as many panels.
template <typename F>
quadrature_result composite_gauss_legendre(const F& f, real a, real b, std::uint64_t panels) {
    if (panels < 1) throw invalid_argument("composite quadrature needs at least one panel");
    auto run = [&](std::uint64_t n) {
        compensated_sum s;
        const real h = (b - a) / static_cast<real>(n);
        for (std::uint64_t i = 0; i < n; ++i)
            s.add(detail::gauss_panel(f, a + h * static_cast<real>(i), a + h * static_cast<real>(i + 1)));
        return s.value();
    };
    const real fine = run(panels);
    const real coarse = panels > 1 ? run(panels / 2) : detail::gauss_panel(f, a, b);
    return {fine, std::fabs(fine - coarse) + 16 * real_epsilon * std::fabs(fine), panels};
}

namespace detail {

inline void check_slot(std::uint64_t T, std::uint64_t j) {
    if (T < 2) throw invalid_argument("integral route needs T >= 2");
    if (j < 1 || j > T - 1) throw invalid_argument("slot j must lie in [1, T-1]");
}

inline real check_tol(real tol, real floor) {
    if (!(tol >= floor)) throw invalid_argument("tolerance must be at least " + format_real(floor, 3));
    return tol;
}

}  // namespace detail

/// u^{j-1} / (1 + u + ... + u^{T-1}); equals 1/T at u = 1.
inline real integrand(std::uint64_t T, std::uint64_t j, real u) {
    detail::check_slot(T, j);
    if (!(u >= 0 && u <= 1)) throw invalid_argument("integrand is defined on [0, 1]");
    real denom = 0;
    for (std::uint64_t i = 0; i < T; ++i) denom = denom * u + 1;
    return std::pow(u, static_cast<real>(j - 1)) / denom;
}

/// The original form (u^j - u^{j-1}) / (u^T - 1), singular at u = 1.
inline real integrand_unsimplified(std::uint64_t T, std::uint64_t j, real u) {
    return (std::pow(u, static_cast<real>(j)) - std::pow(u, static_cast<real>(j - 1))) /
           (std::pow(u, static_cast<real>(T)) - 1);
}

inline quadrature_result integrate_detailed(std::uint64_t T, std::uint64_t j, real tol) {
    detail::check_slot(T, j);
    detail::check_tol(tol, 1e-13L);
    return adaptive_gauss_legendre([T, j](real u) { return integrand(T, j, u); }, 0, 1, tol);
}

/// I(T, j) to absolute tolerance tol (>= 1e-13).
inline real integrate(std::uint64_t T, std::uint64_t j, real tol) { return integrate_detailed(T, j, tol).value; }

/// The vector with +1 in slot j and -1 in slot j+1.
inline coefficient_vector difference_vector(std::uint64_t T, std::uint64_t j) {
    detail::check_slot(T, j);
    std::vector<rational> c(T);
    c[j - 1] = 1;
    c[j] = -1;
    return {T, std::move(c)};
}

struct integral_check {
    std::uint64_t T = 2;
    std::uint64_t j = 1;
    real integral_value = 0;
    real series_value = 0;
    real discrepancy = 0;
    real tolerance = 0;
    real series_error_bound = 0;
};

inline integral_check integral_series_check(std::uint64_t T, std::uint64_t j, real tol) {
    integral_check c;
    c.T = T;
    c.j = j;
    c.tolerance = tol;
    c.integral_value = integrate(T, j, tol);
    const auto series = evaluate(difference_vector(T, j), tol, method::accelerated);
    c.series_value = series.value;
    c.series_error_bound = series.error_bound;
    c.discrepancy = std::fabs(c.integral_value - c.series_value);
    return c;
}

/// sum_{j=1}^{T-1} j * I(T, j); reconstructs ln T.
inline real decomposition_check(std::uint64_t T, real tol) {
    if (T < 2) throw invalid_argument("decomposition_check needs T >= 2");
    detail::check_tol(tol, 1e-12L);
    compensated_sum s;
    for (std::uint64_t j = 1; j < T; ++j) s.add(static_cast<real>(j) * integrate(T, j, tol / static_cast<real>(T)));
    return s.value();
}

/// Integrand of a general balanced vector: with prefix sums d_j = a_1 + ... + a_j,
/// S_T(a) = sum_j d_j I(T, j) = int_0^1 (sum_j d_j u^{j-1}) / (1 + ... + u^{T-1}) du.
class vector_integrand {
public:
    explicit vector_integrand(const coefficient_vector& v) : T_(v.modulus()) {
        if (T_ < 2) throw invalid_argument("integral route needs T >= 2");
        rational d = 0;
        for (std::uint64_t j = 0; j + 1 < T_; ++j) {
            d += v[j];
            weights_.push_back(to_real(d));
        }
    }

    real operator()(real u) const {
        real num = 0, denom = 0;
        for (auto it = weights_.rbegin(); it != weights_.rend(); ++it) num = num * u + *it;
        for (std::uint64_t i = 0; i < T_; ++i) denom = denom * u + 1;
        return num / denom;
    }

private:
    std::uint64_t T_;
    std::vector<real> weights_;
};

inline quadrature_result integrate_vector(const coefficient_vector& v, real tol) {
    detail::check_tol(tol, 1e-13L);
    return adaptive_gauss_legendre(vector_integrand(v), 0, 1, tol);
}

/// (1,-1,0) over 3; its series sums to pi / (3 sqrt 3).
inline coefficient_vector pi_vector() { return difference_vector(3, 1); }

struct pi_value {
    real value = 0;
    real error_bound = 0;
    eval_result series;
};

/// pi = 3 sqrt(3) * S_3(1, -1, 0).
inline pi_value pi_estimate(real tol) {
    detail::check_tol(tol, 1e-12L);
    const real scale = 3 * std::sqrt(static_cast<real>(3));
    auto series = evaluate(pi_vector(), tol / 6, method::accelerated);
    return {scale * series.value, scale * series.error_bound + 2 * real_epsilon * scale * series.value, series};
}

/// Closed form of the same integral: (2/sqrt 3)(arctan sqrt 3 - arctan(1/sqrt 3)).
inline real pi_series_arctan() {
    const real r3 = std::sqrt(static_cast<real>(3));
    return 2 / r3 * (std::atan(r3) - std::atan(1 / r3));
}

/// pi from the closed form: 3 sqrt(3) * pi_series_arctan() = 6 (arctan sqrt 3 - arctan(1/sqrt 3)).
inline real pi_arctan() {
    const real r3 = std::sqrt(static_cast<real>(3));
    return 6 * (std::atan(r3) - std::atan(1 / r3));
}

struct real_interval {
    real lower = 0;
    real upper = 0;
};

/// Every block of S_3(1,-1,0) is positive, so 3 sqrt 3 times the K-block partial
/// sum is below pi and adding tail_bound(K) puts it above.
inline real_interval pi_bracket(std::uint64_t K) {
    if (K < 2) throw invalid_argument("pi_bracket needs K >= 2");
    const auto v = pi_vector();
    const real scale = 3 * std::sqrt(static_cast<real>(3));
    const real partial = to_real(partial_sum_exact(v, K));
    const real slack = 4 * real_epsilon * scale * partial;
    return {scale * partial - slack, scale * (partial + tail_bound(v, K)) + slack};
}

}  // namespace logser
