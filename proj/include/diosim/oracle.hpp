#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "polynomial.hpp"
#include "regulator.hpp"

namespace diosim {

using Real50 = boost::multiprecision::cpp_bin_float_50;
using Rational = boost::multiprecision::cpp_rational;

namespace oracle {

/// Finite enumeration domain [0,upper_0] x ... x [0,upper_{K-1}].
struct SearchBox {
    std::vector<std::int64_t> upper;
    std::size_t max_points = 100000000;

    std::size_t size() const {
        if (upper.empty()) throw std::invalid_argument("search box has no dimensions");
        std::size_t n = 1;
        for (const auto u : upper) {
            if (u < 0) throw std::invalid_argument("box upper bound must be non-negative");
            const std::size_t w = static_cast<std::size_t>(u) + 1;
            if (n > max_points / w)
                throw std::length_error("search box size exceeds limit of " +
                                        std::to_string(max_points) + " points");
            n *= w;
        }
        return n;
    }
};

namespace detail {

// Direct evaluator with per-variable power tables; powers are rebuilt by
// repeated multiplication only when a coordinate changes, so sweeping the
// fastest coordinate costs O(deg + terms) per point.
class PointEvaluator {
public:
    explicit PointEvaluator(const DiophantinePolynomial& p) : p_(p) {
        const int k = p.num_vars();
        degs_.resize(k);
        powers_.resize(k);
        for (int v = 0; v < k; ++v) {
            degs_[v] = p.degree_in(v);
            powers_[v].assign(static_cast<std::size_t>(degs_[v]) + 1, BigInt(1));
        }
    }

    void set_coordinate(int v, const BigInt& x) {
        auto& pw = powers_[v];
        for (int e = 1; e <= degs_[v]; ++e) pw[e] = pw[e - 1] * x;
    }

    BigInt value() const {
        BigInt total = 0;
        for (const auto& t : p_.terms()) {
            BigInt prod = t.coeff;
            for (int v = 0; v < p_.num_vars(); ++v) {
                const int e = t.exponents[v];
                if (e != 0) prod *= powers_[v][e];
            }
            total += prod;
        }
        return total;
    }

private:
    const DiophantinePolynomial& p_;
    std::vector<int> degs_;
    std::vector<std::vector<BigInt>> powers_;
};

// Enumerates the box in lexicographic order (last coordinate fastest) and
// calls fn(point, exact value) for every point.
template <class Fn>
void for_each_point(const DiophantinePolynomial& p, const SearchBox& box, Fn&& fn) {
    if (box.upper.size() != static_cast<std::size_t>(p.num_vars()))
        throw std::invalid_argument("search box dimension does not match polynomial");
    box.size();  // enforce the point limit before enumerating
    PointEvaluator ev(p);
    LatticePoint pt(box.upper.size(), 0);
    for (std::size_t v = 0; v < pt.size(); ++v) ev.set_coordinate(static_cast<int>(v), 0);
    while (true) {
        fn(static_cast<const LatticePoint&>(pt), ev.value());
        int v = static_cast<int>(pt.size()) - 1;
        while (v >= 0 && pt[static_cast<std::size_t>(v)] == box.upper[static_cast<std::size_t>(v)]) {
            pt[static_cast<std::size_t>(v)] = 0;
            ev.set_coordinate(v, 0);
            --v;
        }
        if (v < 0) break;
        ++pt[static_cast<std::size_t>(v)];
        ev.set_coordinate(v, pt[static_cast<std::size_t>(v)]);
    }
}

}  // namespace detail

/// All roots of p inside the box, in lexicographic order. Exact arithmetic.
inline std::vector<LatticePoint> find_solutions(const DiophantinePolynomial& p,
                                                const SearchBox& box) {
    std::vector<LatticePoint> roots;
    detail::for_each_point(p, box, [&](const LatticePoint& pt, const BigInt& value) {
        if (value == 0) roots.push_back(pt);
    });
    return roots;
}

struct SquareMinimum {
    BigInt min_value;                  // min of p(n)^2 over the box, exact
    std::vector<LatticePoint> argmins; // every attaining point, lexicographic
};

inline SquareMinimum min_of_square(const DiophantinePolynomial& p, const SearchBox& box) {
    SquareMinimum result;
    bool have = false;
    detail::for_each_point(p, box, [&](const LatticePoint& pt, const BigInt& value) {
        BigInt sq = value * value;
        if (!have || sq < result.min_value) {
            result.min_value = std::move(sq);
            result.argmins.assign(1, pt);
            have = true;
        } else if (sq == result.min_value) {
            result.argmins.push_back(pt);
        }
    });
    return result;
}

struct RegularizedMinimum {
    Real50 value;                      // min over the box of the damped shifted sum
    std::vector<LatticePoint> argmins; // attaining points, lexicographic
    bool exact = false;                // true when computed in exact rationals (s = 1)
};

/// Reference value of min_n sum_{i=0..i_max} beta_i(s) * p(n + i*e_sv)^2 over
/// the box. At s = 1 the sum is a rational number and the comparison is exact;
/// otherwise 50-digit floats are used. Independent of the Hamiltonian builders.
inline RegularizedMinimum regularized_min(const DiophantinePolynomial& p,
                                          const RegulatorFamily& family, const SearchBox& box,
                                          int shift_var = 0) {
    family.validate();
    if (shift_var < 0 || shift_var >= p.num_vars())
        throw std::out_of_range("shift variable out of range");
    if (box.upper.size() != static_cast<std::size_t>(p.num_vars()))
        throw std::invalid_argument("search box dimension does not match polynomial");

    std::vector<Rational> inv_factorials(static_cast<std::size_t>(family.i_max) + 1);
    std::vector<Real50> betas(static_cast<std::size_t>(family.i_max) + 1);
    {
        BigInt fact = 1;
        for (int i = 0; i <= family.i_max; ++i) {
            if (i > 0) fact *= i;
            inv_factorials[static_cast<std::size_t>(i)] = Rational(1, fact);
            betas[static_cast<std::size_t>(i)] =
                boost::multiprecision::pow(Real50(1) / Real50(fact), Real50(family.s));
        }
    }
    const bool exact = family.s == 1.0;

    RegularizedMinimum result;
    result.exact = exact;
    Rational best_rat;
    Real50 best_real;
    bool have = false;

    std::vector<BigInt> point(static_cast<std::size_t>(p.num_vars()));
    detail::for_each_point(p, box, [&](const LatticePoint& pt, const BigInt&) {
        for (std::size_t v = 0; v < pt.size(); ++v) point[v] = pt[v];
        Rational sum_rat = 0;
        Real50 sum_real = 0;
        for (int i = 0; i <= family.i_max; ++i) {
            point[static_cast<std::size_t>(shift_var)] = pt[static_cast<std::size_t>(shift_var)] + i;
            const BigInt value = p.evaluate(point);
            const BigInt sq = value * value;
            if (exact)
                sum_rat += Rational(sq) * inv_factorials[static_cast<std::size_t>(i)];
            else
                sum_real += betas[static_cast<std::size_t>(i)] * Real50(sq);
        }
        bool better, equal;
        if (exact) {
            better = !have || sum_rat < best_rat;
            equal = have && sum_rat == best_rat;
        } else {
            better = !have || sum_real < best_real;
            equal = have && sum_real == best_real;
        }
        if (better) {
            best_rat = sum_rat;
            best_real = sum_real;
            result.argmins.assign(1, pt);
            have = true;
        } else if (equal) {
            result.argmins.push_back(pt);
        }
    });
    result.value = exact ? Real50(best_rat) : best_real;
    return result;
}

}  // namespace oracle
}  // namespace diosim
