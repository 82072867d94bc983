#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace diosim {

/// Damping weights beta_i(s) = (1/i!)^s attached to the shifted copies of a
/// problem polynomial. s = 1 is the fully regularized sum; s -> 0 removes the
/// regulator. i_max bounds how many shifted copies are retained numerically.
struct RegulatorFamily {
    double s = 1.0;
    int i_max = 30;

    void validate() const {
        if (!(s > 0.0) || s > 1.0)
            throw std::invalid_argument("regulator exponent s must lie in (0,1], got " +
                                        std::to_string(s));
        if (i_max < 1)
            throw std::invalid_argument("regulator i_max must be at least 1, got " +
                                        std::to_string(i_max));
    }
};

/// beta_i(s) = (1/i!)^s, evaluated in log space so large i never overflows.
inline double beta(long long i, double s) {
    if (i < 0) throw std::invalid_argument("beta index must be non-negative");
    if (!(s > 0.0) || s > 1.0)
        throw std::invalid_argument("beta exponent s must lie in (0,1]");
    return std::exp(-s * std::lgamma(static_cast<double>(i) + 1.0));
}

}  // namespace diosim
