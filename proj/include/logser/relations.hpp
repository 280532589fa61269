#pragma once

// Linear algebra over the space of balanced series with modulus T:
// the difference-vector spanning set, exact rational null spaces, and
// numeric confirmation of series that sum to zero.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coefficient_vector.hpp"
#include "errors.hpp"
#include "evaluator.hpp"
#include "rational.hpp"

namespace logser {

struct kernel_basis {
    /// Primitive integer relation tuples, first nonzero entry positive.
    std::vector<std::vector<rational>> vectors;
    std::size_t family_size = 0;

    bool empty() const { return vectors.empty(); }
};

/// (1,-1,0,...), (0,1,-1,0,...), ..., (0,...,0,1,-1).
inline std::vector<coefficient_vector> spanning_basis(std::uint64_t T) {
    if (T < 2) throw invalid_argument("spanning_basis needs T >= 2");
    std::vector<coefficient_vector> out;
    out.reserve(T - 1);
    for (std::uint64_t j = 0; j + 1 < T; ++j) {
        std::vector<rational> c(T);
        c[j] = 1;
        c[j + 1] = -1;
        out.emplace_back(T, std::move(c));
    }
    return out;
}

/// Coordinates in spanning_basis: d_i = a_1 + ... + a_i, i = 1..T-1.
inline std::vector<rational> express_in_basis(const coefficient_vector& v) {
    const auto T = v.modulus();
    if (T < 2) return {};
    std::vector<rational> d;
    d.reserve(T - 1);
    rational running = 0;
    for (std::uint64_t i = 0; i + 1 < T; ++i) {
        running += v[i];
        d.push_back(running);
    }
    return d;
}

namespace detail {

// Scale to a primitive integer vector with its first nonzero entry positive.
inline std::vector<rational> normalize_relation(std::vector<rational> c) {
    integer den_lcm = 1, num_gcd = 0;
    for (const auto& x : c) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den_mpz_t());
    std::vector<integer> ints;
    ints.reserve(c.size());
    for (const auto& x : c) {
        ints.push_back(x.get_num() * (den_lcm / x.get_den()));
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), ints.back().get_mpz_t());
    }
    if (num_gcd == 0) return c;
    auto first = std::find_if(ints.begin(), ints.end(), [](const integer& x) { return x != 0; });
    if (*first < 0) num_gcd = -num_gcd;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = rational(ints[i] / num_gcd);
    return c;
}

/// Null space of a rows x cols rational matrix.
///
/// Columns are first scaled to integers, then reduced by fraction-free
/// (Bareiss) elimination with the first nonzero entry as pivot. Each free
/// column yields one kernel vector by back substitution.
inline std::vector<std::vector<rational>> null_space(const std::vector<std::vector<rational>>& matrix,
                                                     std::size_t cols) {
    const std::size_t rows = matrix.size();
    std::vector<integer> col_scale(cols, integer(1));
    for (const auto& row : matrix)
        for (std::size_t c = 0; c < cols; ++c)
            mpz_lcm(col_scale[c].get_mpz_t(), col_scale[c].get_mpz_t(), row[c].get_den_mpz_t());
    std::vector<std::vector<integer>> m(rows, std::vector<integer>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m[r][c] = matrix[r][c].get_num() * (col_scale[c] / matrix[r][c].get_den());

    std::vector<std::size_t> pivot_cols;
    integer prev = 1;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            for (std::size_t k = c + 1; k < cols; ++k) {
                m[r][k] = m[rank][c] * m[r][k] - m[r][c] * m[rank][k];
                mpz_divexact(m[r][k].get_mpz_t(), m[r][k].get_mpz_t(), prev.get_mpz_t());
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        pivot_cols.push_back(c);
        ++rank;
    }

    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<rational>> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<rational> x(cols, rational(0));
        x[free] = 1;
        for (std::size_t i = rank; i-- > 0;) {
            const std::size_t pc = pivot_cols[i];
            rational s = 0;
            for (std::size_t k = pc + 1; k < cols; ++k)
                if (x[k] != 0) s += rational(m[i][k]) * x[k];
            x[pc] = -s / rational(m[i][pc]);
        }
        // undo the column scaling: a relation on scaled columns is x_c * scale_c on the originals
        for (std::size_t c = 0; c < cols; ++c) x[c] *= rational(col_scale[c]);
        basis.push_back(normalize_relation(std::move(x)));
    }
    return basis;
}

}  // namespace detail

/// Exact rational relations c with sum_i c_i family_i = 0 coefficient-wise.
inline kernel_basis kernel(const std::vector<coefficient_vector>& family) {
    if (family.empty()) throw invalid_argument("kernel needs a non-empty family");
    const auto T = family.front().modulus();
    for (const auto& v : family)
        if (v.modulus() != T)
            throw modulus_mismatch("kernel family mixes modulus " + std::to_string(T) + " and " +
                                   std::to_string(v.modulus()) + "; lift to a common modulus first");
    std::vector<std::vector<rational>> matrix(T, std::vector<rational>(family.size()));
    for (std::size_t c = 0; c < family.size(); ++c)
        for (std::uint64_t r = 0; r < T; ++r) matrix[r][c] = family[c][r];
    return {detail::null_space(matrix, family.size()), family.size()};
}

/// Combines the family with relation coefficients.
inline coefficient_vector apply_relation(const std::vector<coefficient_vector>& family,
                                         const std::vector<rational>& relation) {
    if (relation.size() != family.size()) throw length_mismatch("relation length differs from family size");
    std::vector<std::pair<rational, coefficient_vector>> terms;
    for (std::size_t i = 0; i < family.size(); ++i) terms.emplace_back(relation[i], family[i]);
    return linear_combine(terms);
}

struct zero_check {
    bool is_zero_within_bound = false;
    eval_result result;
};

/// Raw (rigorously bounded) evaluation to eps; zero when |value| <= error_bound.
inline zero_check verify_zero(const coefficient_vector& v, real eps, const eval_options& opts = {}) {
    auto r = evaluate(v, eps, method::raw, opts);
    return {std::fabs(r.value) <= r.error_bound, r};
}

struct divisor_relation_report {
    std::uint64_t T = 0;
    /// ln_vector(T) first, then lifts of ln_vector(d) for every proper divisor d >= 2.
    std::vector<coefficient_vector> family;
    std::vector<std::uint64_t> family_moduli;
    /// Relations among the family's series values.
    kernel_basis relations;
    /// sum_i c_i family_i for each relation: nonzero vectors whose series is 0.
    std::vector<coefficient_vector> witnesses;
    /// Each witness in spanning_basis(T) coordinates, i.e. a rational
    /// dependency among the T-1 spanning values.
    std::vector<std::vector<rational>> basis_coordinates;
};

/// Zero-value witnesses for composite T.
///
/// Family members are ln_vector(T) and lift(ln_vector(d), T/d) for proper
/// divisors d >= 2, whose values are ln d. By unique factorization, value
/// relations are exactly the kernel of the prime-exponent matrix (rows:
/// primes of T, columns: exponent vectors of each d). Each relation gives a
/// witness vector that differs from zero but sums to zero.
inline divisor_relation_report divisor_relations(std::uint64_t T) {
    if (T > 64) throw invalid_argument("divisor_relations supports T <= 64");
    const auto primes = factor_radical(T);
    if (T < 4 || (primes.size() == 1 && primes.front() == T))
        throw not_composite(std::to_string(T) + " is not composite");

    divisor_relation_report out;
    out.T = T;
    out.family.push_back(ln_vector(T));
    out.family_moduli.push_back(T);
    for (std::uint64_t d = 2; d < T; ++d) {
        if (T % d) continue;
        out.family.push_back(lift(ln_vector(d), T / d));
        out.family_moduli.push_back(d);
    }

    std::vector<std::vector<rational>> exponents(primes.size(), std::vector<rational>(out.family.size()));
    for (std::size_t r = 0; r < primes.size(); ++r)
        for (std::size_t c = 0; c < out.family.size(); ++c)
            exponents[r][c] = rational(detail::exponent_of(out.family_moduli[c], primes[r]));
    out.relations = {detail::null_space(exponents, out.family.size()), out.family.size()};

    for (const auto& rel : out.relations.vectors) {
        auto w = apply_relation(out.family, rel);
        if (w.is_zero()) continue;
        out.basis_coordinates.push_back(express_in_basis(w));
        out.witnesses.push_back(std::move(w));
    }
    return out;
}

}  // namespace logser
