#pragma once

// Shared helpers for the test binaries: deterministic random polynomials and
// lattice points built straight from mt19937_64 output, so every platform
// sees the same instances.

#include <random>
#include <vector>

#include "diosim/polynomial.hpp"

namespace testsupport {

inline std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

inline diosim::DiophantinePolynomial random_poly(std::mt19937_64& rng, int max_vars,
                                                 int max_degree, int coeff_lo, int coeff_hi) {
    const int vars = 1 + static_cast<int>(pick(rng, static_cast<std::uint64_t>(max_vars)));
    const int terms = 1 + static_cast<int>(pick(rng, 6));
    std::vector<diosim::Monomial> monomials;
    for (int t = 0; t < terms; ++t) {
        std::vector<int> exps(static_cast<std::size_t>(vars), 0);
        const int degree = static_cast<int>(pick(rng, static_cast<std::uint64_t>(max_degree) + 1));
        for (int d = 0; d < degree; ++d)
            ++exps[pick(rng, static_cast<std::uint64_t>(vars))];
        const auto span = static_cast<std::uint64_t>(coeff_hi - coeff_lo + 1);
        const int coeff = coeff_lo + static_cast<int>(pick(rng, span));
        monomials.push_back({diosim::BigInt(coeff), std::move(exps)});
    }
    return diosim::DiophantinePolynomial(vars, std::move(monomials));
}

inline diosim::LatticePoint random_point(std::mt19937_64& rng, int vars, int upper) {
    diosim::LatticePoint pt(static_cast<std::size_t>(vars));
    for (auto& c : pt) c = static_cast<std::int64_t>(pick(rng, static_cast<std::uint64_t>(upper) + 1));
    return pt;
}

}  // namespace testsupport
