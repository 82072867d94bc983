#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polynomial.hpp"

namespace diosim {

using Complex = std::complex<double>;

struct FockLimits {
    std::size_t max_dim = 1u << 16;
};

/// Product of per-mode truncated oscillator spaces. Basis states are
/// occupation tuples (n_0..n_{K-1}) with 0 <= n_i <= cutoff_i, flattened
/// with mode 0 varying fastest.
class TruncatedFockSpace {
public:
    explicit TruncatedFockSpace(std::vector<int> cutoffs, FockLimits limits = {})
        : cutoffs_(std::move(cutoffs)) {
        if (cutoffs_.empty()) throw std::invalid_argument("need at least one mode");
        dim_ = 1;
        strides_.reserve(cutoffs_.size());
        for (const int c : cutoffs_) {
            if (c < 1) throw std::invalid_argument("cutoff must be at least 1");
            strides_.push_back(dim_);
            const std::size_t w = static_cast<std::size_t>(c) + 1;
            if (dim_ > limits.max_dim / w)
                throw std::length_error("Hilbert-space dimension exceeds limit of " +
                                        std::to_string(limits.max_dim));
            dim_ *= w;
        }
    }

    int num_modes() const noexcept { return static_cast<int>(cutoffs_.size()); }
    const std::vector<int>& cutoffs() const noexcept { return cutoffs_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t stride(int mode) const { return strides_.at(static_cast<std::size_t>(mode)); }

    std::vector<int> occupation(std::size_t index) const {
        if (index >= dim_) throw std::out_of_range("basis index out of range");
        std::vector<int> occ(cutoffs_.size());
        for (std::size_t m = 0; m < cutoffs_.size(); ++m) {
            const std::size_t w = static_cast<std::size_t>(cutoffs_[m]) + 1;
            occ[m] = static_cast<int>(index % w);
            index /= w;
        }
        return occ;
    }

    std::size_t index_of(const std::vector<int>& occ) const {
        if (occ.size() != cutoffs_.size())
            throw std::invalid_argument("occupation tuple has wrong number of modes");
        std::size_t index = 0;
        for (std::size_t m = 0; m < occ.size(); ++m) {
            if (occ[m] < 0 || occ[m] > cutoffs_[m])
                throw std::out_of_range("occupation exceeds cutoff in mode " + std::to_string(m));
            index += static_cast<std::size_t>(occ[m]) * strides_[m];
        }
        return index;
    }

    bool operator==(const TruncatedFockSpace& rhs) const { return cutoffs_ == rhs.cutoffs_; }

private:
    std::vector<int> cutoffs_;
    std::vector<std::size_t> strides_;
    std::size_t dim_ = 0;
};

/// Hermitian operator on a TruncatedFockSpace with either diagonal or dense
/// storage. Diagonal operators built from integer data keep the exact values
/// alongside the float ones, so zero-versus-nonzero questions stay exact.
class HermitianOperator {
public:
    static HermitianOperator diagonal(TruncatedFockSpace space, Eigen::VectorXd entries) {
        if (static_cast<std::size_t>(entries.size()) != space.dim())
            throw std::invalid_argument("diagonal length does not match space dimension");
        HermitianOperator op(std::move(space));
        op.diag_ = std::move(entries);
        return op;
    }

    static HermitianOperator diagonal_exact(TruncatedFockSpace space, std::vector<BigInt> entries) {
        if (entries.size() != space.dim())
            throw std::invalid_argument("diagonal length does not match space dimension");
        Eigen::VectorXd d(static_cast<Eigen::Index>(entries.size()));
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const double v = entries[i].convert_to<double>();
            if (!std::isfinite(v))
                throw std::overflow_error("diagonal entry does not fit a double at index " +
                                          std::to_string(i));
            d[static_cast<Eigen::Index>(i)] = v;
        }
        HermitianOperator op = diagonal(std::move(space), std::move(d));
        op.exact_diag_ = std::move(entries);
        return op;
    }

    static HermitianOperator dense(TruncatedFockSpace space, Eigen::MatrixXcd matrix) {
        const auto n = static_cast<Eigen::Index>(space.dim());
        if (matrix.rows() != n || matrix.cols() != n)
            throw std::invalid_argument("matrix shape does not match space dimension");
        const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
        const double defect = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
        if (defect > 1e-12 * scale)
            throw std::invalid_argument("matrix is not Hermitian (defect " +
                                        std::to_string(defect) + ")");
        HermitianOperator op(std::move(space));
        op.dense_ = ((matrix + matrix.adjoint()) / 2.0).eval();  // remove rounding skew
        op.is_diagonal_ = false;
        return op;
    }

    bool is_diagonal() const noexcept { return is_diagonal_; }
    const TruncatedFockSpace& space() const noexcept { return space_; }
    std::size_t dim() const noexcept { return space_.dim(); }

    const Eigen::VectorXd& diagonal_values() const {
        if (!is_diagonal_) throw std::logic_error("operator is not stored diagonally");
        return diag_;
    }

    const Eigen::MatrixXcd& dense_matrix() const {
        if (is_diagonal_) throw std::logic_error("operator is not stored densely");
        return dense_;
    }

    bool has_exact_diagonal() const noexcept { return !exact_diag_.empty(); }

    const std::vector<BigInt>& exact_diagonal() const {
        if (exact_diag_.empty()) throw std::logic_error("no exact diagonal attached");
        return exact_diag_;
    }

    Eigen::MatrixXcd to_dense() const {
        if (!is_diagonal_) return dense_;
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(diag_.size(), diag_.size());
        m.diagonal() = diag_.cast<Complex>();
        return m;
    }

    double max_abs() const {
        if (dim() == 0) return 0.0;
        return is_diagonal_ ? diag_.cwiseAbs().maxCoeff() : dense_.cwiseAbs().maxCoeff();
    }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const {
        if (static_cast<std::size_t>(v.size()) != dim())
            throw std::invalid_argument("vector length does not match space dimension");
        if (is_diagonal_) return diag_.cast<Complex>().cwiseProduct(v);
        return dense_ * v;
    }

private:
    explicit HermitianOperator(TruncatedFockSpace space) : space_(std::move(space)) {}

    TruncatedFockSpace space_;
    bool is_diagonal_ = true;
    Eigen::VectorXd diag_;
    std::vector<BigInt> exact_diag_;
    Eigen::MatrixXcd dense_;
};

/// Per-mode coherent amplitudes for the initial Hamiltonian and state.
struct CoherentParams {
    std::vector<Complex> alphas;

    /// Truncation-safety rule: |alpha_i|^2 <= cutoff_i / 4. Working far from
    /// the cutoff keeps the discarded coherent-state tail negligible.
    void validate_for(const TruncatedFockSpace& space) const {
        if (alphas.size() != static_cast<std::size_t>(space.num_modes()))
            throw std::invalid_argument("one alpha per mode required");
        for (std::size_t m = 0; m < alphas.size(); ++m) {
            const double a2 = std::norm(alphas[m]);
            if (a2 > space.cutoffs()[m] / 4.0)
                throw std::invalid_argument(
                    "truncation-safety rule violated in mode " + std::to_string(m) +
                    ": |alpha|^2 = " + std::to_string(a2) + " > cutoff/4 = " +
                    std::to_string(space.cutoffs()[m] / 4.0));
        }
    }
};

/// Normalized state on a TruncatedFockSpace.
class StateVector {
public:
    StateVector(TruncatedFockSpace space, Eigen::VectorXcd amplitudes)
        : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
        if (static_cast<std::size_t>(amplitudes_.size()) != space_.dim())
            throw std::invalid_argument("amplitude length does not match space dimension");
        const double n = amplitudes_.norm();
        if (std::abs(n - 1.0) > 1e-6)
            throw std::invalid_argument("state is not normalized (norm " + std::to_string(n) + ")");
        amplitudes_ /= n;
    }

    static StateVector basis_state(TruncatedFockSpace space, const std::vector<int>& occ) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dim()));
        v[static_cast<Eigen::Index>(space.index_of(occ))] = 1.0;
        return StateVector(std::move(space), std::move(v));
    }

    const TruncatedFockSpace& space() const noexcept { return space_; }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    double norm() const { return amplitudes_.norm(); }

private:
    TruncatedFockSpace space_;
    Eigen::VectorXcd amplitudes_;
};

/// Truncated annihilation operator of one mode on the full product space:
/// <n-1|a|n> = sqrt(n). The truncation shows up only in [a,a†], whose
/// (cutoff,cutoff) corner reads -cutoff instead of 1.
inline Eigen::MatrixXcd annihilation_matrix(const TruncatedFockSpace& space, int mode) {
    if (mode < 0 || mode >= space.num_modes()) throw std::out_of_range("mode index out of range");
    const auto dim = static_cast<Eigen::Index>(space.dim());
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    const std::size_t stride = space.stride(mode);
    for (std::size_t idx = 0; idx < space.dim(); ++idx) {
        const int n = space.occupation(idx)[static_cast<std::size_t>(mode)];
        if (n > 0)
            a(static_cast<Eigen::Index>(idx - stride), static_cast<Eigen::Index>(idx)) =
                std::sqrt(static_cast<double>(n));
    }
    return a;
}

/// Exact diagonal of H_P = P(n_0..n_{K-1})^2 in the occupation basis. Number
/// operators commute, so P evaluated at the occupations is already the full
/// operator; squaring happens in exact integers.
inline std::vector<BigInt> problem_diagonal(const DiophantinePolynomial& p,
                                            const TruncatedFockSpace& space) {
    if (p.num_vars() != space.num_modes())
        throw std::invalid_argument("polynomial has " + std::to_string(p.num_vars()) +
                                    " variables but space has " +
                                    std::to_string(space.num_modes()) + " modes");
    std::vector<BigInt> diag(space.dim());
    std::vector<BigInt> point(static_cast<std::size_t>(p.num_vars()));
    for (std::size_t idx = 0; idx < space.dim(); ++idx) {
        const auto occ = space.occupation(idx);
        for (std::size_t v = 0; v < occ.size(); ++v) point[v] = occ[v];
        const BigInt value = p.evaluate(point);
        diag[idx] = value * value;
    }
    return diag;
}

/// Problem Hamiltonian for "does P have a root with n_i <= cutoff_i".
inline HermitianOperator build_hp(const DiophantinePolynomial& p,
                                  const TruncatedFockSpace& space) {
    auto diag = problem_diagonal(p, space);
    for (std::size_t idx = 0; idx < diag.size(); ++idx) {
        if (!std::isfinite(diag[idx].convert_to<double>())) {
            const auto occ = space.occupation(idx);
            std::string tuple;
            for (std::size_t v = 0; v < occ.size(); ++v)
                tuple += (v ? "," : "") + std::to_string(occ[v]);
            throw std::overflow_error("P(n)^2 does not fit a double at occupation (" + tuple +
                                      ")");
        }
    }
    return HermitianOperator::diagonal_exact(space, std::move(diag));
}

/// Initial Hamiltonian sum_i (a_i† - conj(alpha_i)) (a_i - alpha_i). Each mode
/// contributes a tridiagonal block: diagonal n + |alpha|^2, couplings
/// -alpha*sqrt(n) between n-1 and n; assembled directly on the product space.
inline HermitianOperator build_hi(const CoherentParams& params, const TruncatedFockSpace& space) {
    params.validate_for(space);
    const auto dim = static_cast<Eigen::Index>(space.dim());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t idx = 0; idx < space.dim(); ++idx) {
        const auto occ = space.occupation(idx);
        const auto row = static_cast<Eigen::Index>(idx);
        for (int m = 0; m < space.num_modes(); ++m) {
            const int n = occ[static_cast<std::size_t>(m)];
            const Complex alpha = params.alphas[static_cast<std::size_t>(m)];
            h(row, row) += n + std::norm(alpha);
            if (n > 0) {
                const auto col = static_cast<Eigen::Index>(idx - space.stride(m));
                const double root = std::sqrt(static_cast<double>(n));
                h(row, col) = -alpha * root;
                h(col, row) = -std::conj(alpha) * root;
            }
        }
    }
    return HermitianOperator::dense(space, std::move(h));
}

/// Truncated product coherent state, renormalized. The pre-normalization tail
/// weight (what truncation discarded) must stay below 1e-6; the safety rule
/// makes that automatic except at extreme corner cases, which are rejected.
inline StateVector coherent_state(const CoherentParams& params, const TruncatedFockSpace& space) {
    params.validate_for(space);
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(space.dim()));
    double retained_weight = 1.0;
    for (int m = 0; m < space.num_modes(); ++m) {
        const Complex alpha = params.alphas[static_cast<std::size_t>(m)];
        const int cutoff = space.cutoffs()[static_cast<std::size_t>(m)];
        std::vector<Complex> amp(static_cast<std::size_t>(cutoff) + 1);
        amp[0] = std::exp(-std::norm(alpha) / 2.0);
        double mode_weight = std::norm(amp[0]);
        for (int n = 1; n <= cutoff; ++n) {
            amp[static_cast<std::size_t>(n)] =
                amp[static_cast<std::size_t>(n - 1)] * alpha / std::sqrt(static_cast<double>(n));
            mode_weight += std::norm(amp[static_cast<std::size_t>(n)]);
        }
        retained_weight *= mode_weight;
        for (std::size_t idx = 0; idx < space.dim(); ++idx)
            v[static_cast<Eigen::Index>(idx)] *=
                amp[static_cast<std::size_t>(space.occupation(idx)[static_cast<std::size_t>(m)])];
    }
    const double tail = 1.0 - retained_weight;
    if (tail > 1e-6)
        throw std::runtime_error("coherent-state truncation tail " + std::to_string(tail) +
                                 " exceeds 1e-6; raise the cutoffs");
    v /= v.norm();
    return StateVector(space, std::move(v));
}

}  // namespace diosim
