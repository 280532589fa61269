// ln 4 written two ways over modulus 4; their difference is a nonzero
// coefficient vector whose series sums to zero.

#include <iostream>

#include "logser/logser.hpp"

int main() {
    using namespace logser;
    const auto twice_ln2 = lift(linear_combine({{rational(2), ln_vector(2)}}), 2);
    const auto ln4 = ln_vector(4);
    const auto diff = linear_combine({{rational(1), twice_ln2}, {rational(-1), ln4}});

    std::cout << "2 ln 2 : " << to_string(twice_ln2) << "\n"
              << "ln 4   : " << to_string(ln4) << "\n"
              << "diff   : " << to_string(diff) << "\n";

    const auto check = verify_zero(diff, 1e-6L);
    std::cout << "value " << format_real(check.result.value) << " +/- " << format_real(check.result.error_bound, 3)
              << " after " << check.result.blocks_used << " blocks: "
              << (check.is_zero_within_bound ? "zero within bound" : "nonzero") << "\n";

    const auto kb = kernel({twice_ln2, ln4, diff});
    for (const auto& rel : kb.vectors) {
        std::cout << "relation:";
        for (const auto& c : rel) std::cout << " " << to_string(c);
        std::cout << "\n";
    }
    return check.is_zero_within_bound ? 0 : 1;
}
