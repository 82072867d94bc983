#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "fock.hpp"
#include "polynomial.hpp"

namespace diosim {

/// Linear ramp s(t) = t/T discretized into step_count midpoint slices.
struct Schedule {
    double total_time = 0.0;
    int step_count = 0;

    void validate() const {
        if (!(total_time > 0.0)) throw std::invalid_argument("total_time must be positive");
        if (step_count < 100)
            throw std::invalid_argument("step_count must be at least 100, got " +
                                        std::to_string(step_count));
    }
};

/// H(s) = (1-s) H_I + s H_P. Stays diagonal when both inputs are diagonal.
inline HermitianOperator interpolate(const HermitianOperator& hi, const HermitianOperator& hp,
                                     double s) {
    if (!(hi.space() == hp.space()))
        throw std::invalid_argument("operators live on different spaces");
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("s must lie in [0,1]");
    if (hi.is_diagonal() && hp.is_diagonal()) {
        Eigen::VectorXd d = (1.0 - s) * hi.diagonal_values() + s * hp.diagonal_values();
        return HermitianOperator::diagonal(hi.space(), std::move(d));
    }
    Eigen::MatrixXcd m = (1.0 - s) * hi.to_dense() + s * hp.to_dense();
    return HermitianOperator::dense(hi.space(), std::move(m));
}

struct GroundState {
    double energy;
    StateVector state;
};

/// Lowest eigenpair. Diagonal operators are solved exactly (argmin entry,
/// lowest index on ties); dense ones go through the Hermitian eigensolver
/// with a residual check and a deterministic phase convention: the
/// largest-magnitude amplitude (lowest index on ties) is made real positive.
inline GroundState ground_state(const HermitianOperator& h, std::size_t max_dense_dim = 4096) {
    if (h.is_diagonal()) {
        const auto& d = h.diagonal_values();
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < d.size(); ++i)
            if (d[i] < d[best]) best = i;
        auto occ = h.space().occupation(static_cast<std::size_t>(best));
        return GroundState{d[best], StateVector::basis_state(h.space(), occ)};
    }
    if (h.dim() > max_dense_dim)
        throw std::length_error("dimension " + std::to_string(h.dim()) +
                                " exceeds dense-eigensolve limit " +
                                std::to_string(max_dense_dim));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.dense_matrix());
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
    const double energy = solver.eigenvalues()(0);
    Eigen::VectorXcd v = solver.eigenvectors().col(0);
    const double residual = (h.dense_matrix() * v - energy * v).norm();
    if (residual > 1e-8 * std::max(1.0, h.max_abs()))
        throw std::runtime_error("eigenpair residual " + std::to_string(residual) +
                                 " too large");
    Eigen::Index top = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[top])) top = i;
    if (std::abs(v[top]) > 0) v *= std::conj(v[top]) / std::abs(v[top]);
    return GroundState{energy, StateVector(h.space(), std::move(v))};
}

struct GapScan {
    std::vector<double> s_values;
    std::vector<double> e0;
    std::vector<double> e1;
    std::vector<double> gaps;
    double min_gap = 0.0;
    double min_gap_s = 0.0;
    bool degenerate_final = false;  // ground level of H_P attained more than once
};

namespace detail {

// Two smallest eigenvalues of an interpolated operator.
inline std::pair<double, double> lowest_two(const HermitianOperator& h) {
    if (h.dim() < 2) throw std::invalid_argument("gap needs dimension at least 2");
    if (h.is_diagonal()) {
        const auto& d = h.diagonal_values();
        double e0 = std::min(d[0], d[1]);
        double e1 = std::max(d[0], d[1]);
        for (Eigen::Index i = 2; i < d.size(); ++i) {
            if (d[i] < e0) {
                e1 = e0;
                e0 = d[i];
            } else if (d[i] < e1) {
                e1 = d[i];
            }
        }
        return {e0, e1};
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.dense_matrix(),
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
    return {solver.eigenvalues()(0), solver.eigenvalues()(1)};
}

}  // namespace detail

/// E0/E1 spectrum along the interpolation on a uniform s grid, with the
/// minimum gap and a flag for a degenerate final ground level.
inline GapScan gap_scan(const HermitianOperator& hi, const HermitianOperator& hp, int grid_size) {
    if (grid_size < 11) throw std::invalid_argument("grid_size must be at least 11");
    if (!(hi.space() == hp.space()))
        throw std::invalid_argument("operators live on different spaces");
    GapScan scan;
    scan.min_gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid_size; ++j) {
        const double s = static_cast<double>(j) / (grid_size - 1);
        const auto [e0, e1] = detail::lowest_two(interpolate(hi, hp, s));
        scan.s_values.push_back(s);
        scan.e0.push_back(e0);
        scan.e1.push_back(e1);
        scan.gaps.push_back(e1 - e0);
        if (e1 - e0 < scan.min_gap) {
            scan.min_gap = e1 - e0;
            scan.min_gap_s = s;
        }
    }
    if (hp.has_exact_diagonal()) {
        const auto& exact = hp.exact_diagonal();
        const BigInt lo = *std::min_element(exact.begin(), exact.end());
        scan.degenerate_final = std::count(exact.begin(), exact.end(), lo) > 1;
    } else if (hp.is_diagonal()) {
        const auto& d = hp.diagonal_values();
        const double lo = d.minCoeff();
        scan.degenerate_final =
            std::count(d.begin(), d.end(), lo) > 1;
    } else {
        const auto [e0, e1] = detail::lowest_two(hp);
        scan.degenerate_final = (e1 - e0) <= 1e-9 * std::max(1.0, hp.max_abs());
    }
    return scan;
}

struct EvolutionResult {
    StateVector state;
    double norm_defect = 0.0;           // cumulative |norm - 1| over all steps
    std::vector<double> energy_trace;   // <psi|H(s_mid)|psi> after each step, if requested
};

/// Piecewise-constant adiabatic propagation: step k applies
/// exp(-i H(s_mid) dt) with s_mid the midpoint of [k,k+1]/step_count and
/// dt = T/step_count. Diagonal pairs evolve by exact phases; otherwise each
/// step takes a dense matrix exponential (scaling and squaring).
inline EvolutionResult evolve(const HermitianOperator& hi, const HermitianOperator& hp,
                              const Schedule& schedule, const StateVector& initial,
                              bool record_energy_trace = false) {
    schedule.validate();
    if (!(hi.space() == hp.space()) || !(initial.space() == hi.space()))
        throw std::invalid_argument("operators and state live on different spaces");
    const double dt = schedule.total_time / schedule.step_count;
    Eigen::VectorXcd psi = initial.amplitudes();
    const bool diagonal_pair = hi.is_diagonal() && hp.is_diagonal();
    Eigen::MatrixXcd hi_dense, hp_dense;
    if (!diagonal_pair) {
        hi_dense = hi.to_dense();
        hp_dense = hp.to_dense();
    }

    EvolutionResult result{initial, 0.0, {}};
    for (int k = 0; k < schedule.step_count; ++k) {
        const double s_mid = (k + 0.5) / schedule.step_count;
        Eigen::VectorXd d;
        Eigen::MatrixXcd h;
        if (diagonal_pair) {
            d = (1.0 - s_mid) * hi.diagonal_values() + s_mid * hp.diagonal_values();
            psi = psi.cwiseProduct(
                (Complex(0.0, -dt) * d.array().cast<Complex>()).exp().matrix());
        } else {
            h = (1.0 - s_mid) * hi_dense + s_mid * hp_dense;
            psi = (Complex(0.0, -dt) * h).exp() * psi;
        }
        const double norm = psi.norm();
        const double defect = std::abs(norm - 1.0);
        if (defect > 1e-8)
            throw std::runtime_error("norm-defect blowup at step " + std::to_string(k) +
                                     " (defect " + std::to_string(defect) + ")");
        result.norm_defect += defect;
        psi /= norm;
        if (record_energy_trace) {
            double energy;
            if (diagonal_pair)
                energy = (d.array() * psi.array().abs2()).sum();
            else
                energy = (psi.adjoint() * (h * psi))(0).real();
            result.energy_trace.push_back(energy);
        }
    }
    result.state = StateVector(hi.space(), std::move(psi));
    return result;
}

struct MeasurementHistogram {
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
    std::map<std::vector<int>, std::int64_t> counts;  // occupation tuple -> count
};

/// Samples occupation tuples from |amplitude|^2. Fully deterministic for a
/// fixed seed: mt19937_64 with explicit 53-bit uniforms and a CDF inversion,
/// no implementation-defined distribution adapters.
inline MeasurementHistogram measure_occupation(const StateVector& state, std::int64_t shots,
                                               std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("shots must be positive");
    const auto dim = state.space().dim();
    std::vector<double> cdf(dim);
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        acc += std::norm(state.amplitudes()[static_cast<Eigen::Index>(i)]);
        cdf[i] = acc;
    }
    for (auto& c : cdf) c /= acc;
    cdf.back() = 1.0;

    MeasurementHistogram hist{shots, seed, {}};
    std::mt19937_64 rng(seed);
    std::map<std::size_t, std::int64_t> index_counts;
    for (std::int64_t shot = 0; shot < shots; ++shot) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto idx = static_cast<std::size_t>(std::distance(cdf.begin(), it));
        ++index_counts[std::min(idx, dim - 1)];
    }
    for (const auto& [idx, count] : index_counts)
        hist.counts.emplace(state.space().occupation(idx), count);
    return hist;
}

/// Exact classical post-check of measurement candidates.
struct CandidateCheck {
    std::vector<LatticePoint> certified;  // tuples with P = 0 exactly, lexicographic
    BigInt min_p_squared;                 // smallest P^2 among observed tuples
    LatticePoint min_tuple;               // first tuple (lex) attaining it
    MeasurementHistogram histogram;
};

/// Measures the state and evaluates P exactly at every observed tuple. A
/// certified witness is an exact integer root; the simulation only proposes
/// candidates and can never certify by itself.
inline CandidateCheck verify_minimum(const StateVector& state, const DiophantinePolynomial& p,
                                     std::int64_t shots, std::uint64_t seed) {
    if (p.num_vars() != state.space().num_modes())
        throw std::invalid_argument("polynomial variables do not match space modes");
    CandidateCheck check;
    check.histogram = measure_occupation(state, shots, seed);
    bool have = false;
    for (const auto& [occ, count] : check.histogram.counts) {
        LatticePoint pt(occ.begin(), occ.end());
        const BigInt value = p.evaluate(pt);
        if (value == 0) check.certified.push_back(pt);
        BigInt sq = value * value;
        if (!have || sq < check.min_p_squared) {
            check.min_p_squared = std::move(sq);
            check.min_tuple = std::move(pt);
            have = true;
        }
    }
    return check;
}

}  // namespace diosim
