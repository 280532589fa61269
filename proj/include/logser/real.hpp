#pragma once

#include <mpfr.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "rational.hpp"

namespace logser {

/// Working floating type. 80-bit extended on x86-64, binary128 elsewhere.
using real = long double;

static_assert(std::numeric_limits<real>::digits >= 64, "working precision needs a 64-bit significand");

inline constexpr real real_epsilon = std::numeric_limits<real>::epsilon();

/// Correctly rounded conversion of an exact rational.
inline real to_real(const rational& q, mpfr_rnd_t rounding = MPFR_RNDN) {
    mpfr_t x;
    mpfr_init2(x, std::numeric_limits<real>::digits);
    mpfr_set_q(x, q.get_mpq_t(), rounding);
    real r = mpfr_get_ld(x, rounding);
    mpfr_clear(x);
    return r;
}

/// Shortest decimal form that reads back to the same value.
inline std::string format_real(real x, int digits = std::numeric_limits<real>::max_digits10) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*Lg", digits, x);
    return buf;
}

inline real parse_real(const std::string& s) {
    std::size_t pos = 0;
    real x = std::stold(s, &pos);
    if (pos != s.size()) throw invalid_argument("malformed real '" + s + "'");
    return x;
}

/// Neumaier-compensated sum that also tracks sum |x_i| for rounding bounds.
struct compensated_sum {
    real sum = 0;
    real compensation = 0;
    real magnitude = 0;
    std::size_t count = 0;

    void add(real x) {
        real t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            compensation += (sum - t) + x;
        else
            compensation += (x - t) + sum;
        sum = t;
        magnitude += std::fabs(x);
        ++count;
    }

    real value() const { return sum + compensation; }

    /// Bound on the accumulated rounding of value(), assuming each input
    /// carries at most `per_term_ulps` units of relative error.
    real rounding_bound(real per_term_ulps = 2) const {
        real n = static_cast<real>(count);
        return (per_term_ulps + 2 + 2 * n * real_epsilon) * real_epsilon * magnitude + real_epsilon * std::fabs(value());
    }
};

}  // namespace logser
