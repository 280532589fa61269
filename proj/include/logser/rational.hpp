#pragma once

// Exact rationals backed by GMP. mpq_class keeps every result of its
// arithmetic operators canonical (den > 0, gcd(|num|, den) = 1); the only
// entry points that need an explicit canonicalize() are the ones here that
// build a value from a separate numerator and denominator.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace logser {

using rational = mpq_class;
using integer = mpz_class;

inline rational make_rational(const integer& num, const integer& den) {
    if (den == 0) throw invalid_argument("rational with zero denominator");
    rational q(num, den);
    q.canonicalize();
    return q;
}

inline rational make_rational(std::int64_t num, std::int64_t den = 1) {
    return make_rational(integer(static_cast<long>(num)), integer(static_cast<long>(den)));
}

/// Parses "p/q" or "p" (optional leading sign, decimal digits only).
inline rational parse_rational(std::string_view text) {
    auto is_integer = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return true;
    };
    auto to_integer = [](std::string_view s) {
        if (!s.empty() && s.front() == '+') s.remove_prefix(1);
        return integer(std::string(s), 10);
    };
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer(num) || !is_integer(den))
        throw invalid_argument("malformed rational '" + std::string(text) + "'");
    return make_rational(to_integer(num), to_integer(den));
}

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const rational& q) { return q.get_str(10); }

}  // namespace logser
