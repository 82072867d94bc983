#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adiabatic.hpp"
#include "fock.hpp"
#include "oracle.hpp"
#include "polynomial.hpp"
#include "regulator.hpp"

namespace diosim {

enum class Verdict {
    solution_found,
    no_solution_in_truncation,
    finite_halted_at_L,
    sweep_exhausted,
    infinite_suggested,
};

enum class OracleAgreement { agrees, disagrees, oracle_skipped };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::solution_found: return "solution_found";
        case Verdict::no_solution_in_truncation: return "no_solution_in_truncation";
        case Verdict::finite_halted_at_L: return "finite_halted_at_L";
        case Verdict::sweep_exhausted: return "sweep_exhausted";
        case Verdict::infinite_suggested: return "infinite_suggested";
    }
    throw std::logic_error("unknown verdict");
}

inline std::string to_string(OracleAgreement a) {
    switch (a) {
        case OracleAgreement::agrees: return "agrees";
        case OracleAgreement::disagrees: return "disagrees";
        case OracleAgreement::oracle_skipped: return "oracle_skipped";
    }
    throw std::logic_error("unknown agreement state");
}

/// Everything needed to reproduce a run, echoed in every report.
struct RunParameters {
    std::vector<int> cutoffs;
    std::vector<Complex> alphas;
    double total_time = 0.0;
    int step_count = 0;
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
    bool oracle_enabled = true;
    std::optional<int> sweep_var;
    std::optional<int> l_max;
    std::optional<double> regulator_s;
    std::optional<int> regulator_i_max;
    std::vector<double> s_grid;
};

struct SweepStep {
    int shift = 0;
    Verdict verdict = Verdict::no_solution_in_truncation;
    std::vector<LatticePoint> witnesses;
    BigInt min_p_squared;
    OracleAgreement oracle_agreement = OracleAgreement::oracle_skipped;
    std::size_t oracle_solution_count = 0;
    double norm_defect = 0.0;
};

struct DecisionReport {
    Verdict verdict = Verdict::no_solution_in_truncation;
    std::vector<LatticePoint> witnesses;  // exact roots only, certified by integer evaluation
    std::optional<BigInt> min_p_squared;  // smallest observed P^2 when no witness was found
    std::optional<LatticePoint> min_tuple;
    std::optional<int> halted_at;
    OracleAgreement oracle_agreement = OracleAgreement::oracle_skipped;
    std::optional<std::size_t> oracle_solution_count;
    double max_norm_defect = 0.0;
    std::vector<SweepStep> sweep;  // populated by finiteness_sweep
    RunParameters parameters;
};

struct ExistenceOptions {
    std::optional<std::vector<Complex>> alphas;  // default: 1+0i in every mode
    bool use_oracle = true;
};

/// End-to-end existence run: coherent start, adiabatic ramp, measurement,
/// exact candidate verification, and (by default) a brute-force cross-check
/// over the truncation box. The verdict never claims more than the exact
/// integer checks support.
inline DecisionReport decide_existence(const DiophantinePolynomial& p,
                                       const TruncatedFockSpace& space, const Schedule& schedule,
                                       std::int64_t shots, std::uint64_t seed,
                                       const ExistenceOptions& options = {}) {
    if (p.num_vars() != space.num_modes())
        throw std::invalid_argument("polynomial variables do not match space modes");
    CoherentParams params{options.alphas.value_or(
        std::vector<Complex>(static_cast<std::size_t>(space.num_modes()), Complex(1.0, 0.0)))};

    const HermitianOperator hi = build_hi(params, space);
    const HermitianOperator hp = build_hp(p, space);
    const StateVector start = coherent_state(params, space);
    const EvolutionResult run = evolve(hi, hp, schedule, start);
    const CandidateCheck check = verify_minimum(run.state, p, shots, seed);

    DecisionReport report;
    report.max_norm_defect = run.norm_defect;
    report.parameters.cutoffs = space.cutoffs();
    report.parameters.alphas = params.alphas;
    report.parameters.total_time = schedule.total_time;
    report.parameters.step_count = schedule.step_count;
    report.parameters.shots = shots;
    report.parameters.seed = seed;
    report.parameters.oracle_enabled = options.use_oracle;

    if (!check.certified.empty()) {
        report.verdict = Verdict::solution_found;
        report.witnesses = check.certified;
    } else {
        report.verdict = Verdict::no_solution_in_truncation;
        report.min_p_squared = check.min_p_squared;
        report.min_tuple = check.min_tuple;
    }

    if (options.use_oracle) {
        oracle::SearchBox box;
        box.upper.assign(space.cutoffs().begin(), space.cutoffs().end());
        const auto solutions = oracle::find_solutions(p, box);
        report.oracle_solution_count = solutions.size();
        const bool sim_found = report.verdict == Verdict::solution_found;
        report.oracle_agreement = (sim_found == !solutions.empty()) ? OracleAgreement::agrees
                                                                    : OracleAgreement::disagrees;
    }
    return report;
}

/// Shift-sweep finiteness procedure: decide existence for P with the sweep
/// variable shifted by i = 0,1,...,L_max and halt at the first shift with no
/// solution. While the oracle is enabled, halting additionally requires the
/// oracle to confirm emptiness, so a poorly converged simulation can delay
/// the halt but never produce an unsound one.
inline DecisionReport finiteness_sweep(const DiophantinePolynomial& p, int var, int l_max,
                                       const TruncatedFockSpace& space, const Schedule& schedule,
                                       std::int64_t shots, std::uint64_t seed,
                                       const ExistenceOptions& options = {}) {
    if (l_max < 1) throw std::invalid_argument("L_max must be at least 1");
    if (var < 0 || var >= p.num_vars()) throw std::out_of_range("sweep variable out of range");

    DecisionReport report;
    report.parameters.sweep_var = var;
    report.parameters.l_max = l_max;
    bool any_disagree = false;

    for (int i = 0; i <= l_max; ++i) {
        const DiophantinePolynomial shifted = p.shift(var, i);
        // decorrelate the per-shift measurement streams
        DecisionReport sub =
            decide_existence(shifted, space, schedule, shots, seed + static_cast<std::uint64_t>(i),
                             options);
        report.max_norm_defect = std::max(report.max_norm_defect, sub.max_norm_defect);
        if (report.parameters.cutoffs.empty()) {
            report.parameters.cutoffs = sub.parameters.cutoffs;
            report.parameters.alphas = sub.parameters.alphas;
            report.parameters.total_time = sub.parameters.total_time;
            report.parameters.step_count = sub.parameters.step_count;
            report.parameters.shots = shots;
            report.parameters.seed = seed;
            report.parameters.oracle_enabled = options.use_oracle;
        }

        SweepStep step;
        step.shift = i;
        step.verdict = sub.verdict;
        step.witnesses = sub.witnesses;
        if (sub.min_p_squared) step.min_p_squared = *sub.min_p_squared;
        step.oracle_agreement = sub.oracle_agreement;
        step.oracle_solution_count = sub.oracle_solution_count.value_or(0);
        step.norm_defect = sub.max_norm_defect;
        report.sweep.push_back(std::move(step));

        if (sub.oracle_agreement == OracleAgreement::disagrees) any_disagree = true;

        const bool oracle_sees_solution =
            options.use_oracle && sub.oracle_solution_count.value_or(0) > 0;
        const bool exists = sub.verdict == Verdict::solution_found || oracle_sees_solution;
        if (!exists) {
            report.verdict = Verdict::finite_halted_at_L;
            report.halted_at = i;
            if (sub.min_p_squared) {
                report.min_p_squared = sub.min_p_squared;
                report.min_tuple = sub.min_tuple;
            }
            break;
        }
        if (i == 0) report.witnesses = sub.witnesses;  // roots of the unshifted equation
    }

    if (!report.halted_at) report.verdict = Verdict::sweep_exhausted;
    if (!options.use_oracle)
        report.oracle_agreement = OracleAgreement::oracle_skipped;
    else
        report.oracle_agreement =
            any_disagree ? OracleAgreement::disagrees : OracleAgreement::agrees;
    return report;
}

/// Diagonal operator whose entry at tuple n is the damped sum over shifted
/// copies, sum_{i<=i_max} beta_i(s) P(.., n_sv + i, ..)^2, plus a certified
/// bound on the dropped tail at the minimizing tuple.
struct RegularizedHamiltonian {
    HermitianOperator op;
    double min_entry = 0.0;
    std::size_t argmin_index = 0;
    bool min_is_zero = false;  // exact: every retained shifted copy vanishes at the argmin
    double tail_bound = 0.0;   // upper bound on the dropped tail at the argmin
};

namespace detail {

// Majorant of |P| along the shifted ray through `base`: absolute coefficients,
// shifted coordinate at base_sv + i. Monotone non-decreasing in i.
inline BigInt shifted_majorant(const DiophantinePolynomial& p, const std::vector<int>& base,
                               int shift_var, long long i) {
    BigInt total = 0;
    for (const auto& t : p.terms()) {
        BigInt prod = t.coeff < 0 ? BigInt(-t.coeff) : t.coeff;
        for (int v = 0; v < p.num_vars(); ++v) {
            const int e = t.exponents[v];
            if (e == 0) continue;
            const BigInt x = v == shift_var ? BigInt(base[static_cast<std::size_t>(v)] + i)
                                            : BigInt(base[static_cast<std::size_t>(v)]);
            prod *= int_pow(x, e);
        }
        total += prod;
    }
    return total;
}

}  // namespace detail

inline RegularizedHamiltonian build_regularized_hp(
    const DiophantinePolynomial& p, const RegulatorFamily& rf, const TruncatedFockSpace& space,
    int shift_var = 0, std::optional<double> require_tail_below = std::nullopt) {
    rf.validate();
    if (p.num_vars() != space.num_modes())
        throw std::invalid_argument("polynomial variables do not match space modes");
    if (shift_var < 0 || shift_var >= p.num_vars())
        throw std::out_of_range("shift variable out of range");

    std::vector<double> betas(static_cast<std::size_t>(rf.i_max) + 1);
    for (int i = 0; i <= rf.i_max; ++i) {
        betas[static_cast<std::size_t>(i)] = beta(i, rf.s);
        if (betas[static_cast<std::size_t>(i)] <= 0.0)
            throw std::overflow_error("beta underflowed to zero at i = " + std::to_string(i) +
                                      "; lower i_max");
    }

    const std::size_t dim = space.dim();
    std::vector<Real50> entries(dim, Real50(0));
    std::vector<bool> is_zero(dim, true);
    for (int i = 0; i <= rf.i_max; ++i) {
        const auto diag = problem_diagonal(p.shift(shift_var, i), space);
        for (std::size_t idx = 0; idx < dim; ++idx) {
            if (diag[idx] != 0) {
                is_zero[idx] = false;
                entries[idx] += betas[static_cast<std::size_t>(i)] * Real50(diag[idx]);
            }
        }
    }

    std::size_t argmin = 0;
    for (std::size_t idx = 1; idx < dim; ++idx)
        if (entries[idx] < entries[argmin]) argmin = idx;

    Eigen::VectorXd d(static_cast<Eigen::Index>(dim));
    for (std::size_t idx = 0; idx < dim; ++idx) {
        const double v = entries[idx].convert_to<double>();
        if (!std::isfinite(v))
            throw std::overflow_error("regularized entry does not fit a double at index " +
                                      std::to_string(idx));
        d[static_cast<Eigen::Index>(idx)] = v;
    }

    // Tail bound at the argmin: each dropped term beta_i(s) P(.., n_sv+i, ..)^2
    // is at most beta_i(s) G(i)^2 with G the absolute-coefficient majorant,
    // and successive term ratios are at most rho < 1, giving a geometric sum.
    const auto base = space.occupation(argmin);
    int max_e = 0;
    for (const auto& t : p.terms()) max_e = std::max(max_e, t.exponents[shift_var]);
    const BigInt g_first = detail::shifted_majorant(p, base, shift_var, rf.i_max + 1);
    const Real50 first = Real50(beta(rf.i_max + 1, rf.s)) * Real50(g_first) * Real50(g_first);
    const long long b = base[static_cast<std::size_t>(shift_var)];
    const Real50 rho =
        boost::multiprecision::pow(Real50(rf.i_max + 2), Real50(-rf.s)) *
        boost::multiprecision::pow(Real50(b + rf.i_max + 2) / Real50(b + rf.i_max + 1),
                                   Real50(2 * max_e));
    if (rho >= 1)
        throw std::runtime_error("cannot certify the dropped tail (term ratio >= 1); "
                                 "increase i_max");
    const Real50 bound = first / (Real50(1) - rho) * Real50("1.000000001");

    RegularizedHamiltonian result{HermitianOperator::diagonal(space, std::move(d)),
                                  entries[argmin].convert_to<double>(), argmin, is_zero[argmin],
                                  bound.convert_to<double>()};
    if (require_tail_below && !result.min_is_zero &&
        result.tail_bound > *require_tail_below * result.min_entry)
        throw std::runtime_error("tail bound " + std::to_string(result.tail_bound) +
                                 " exceeds the requested tolerance; increase i_max");
    return result;
}

enum class RegulatorClassification { infinite_suggested, finite, inconclusive };

inline std::string to_string(RegulatorClassification c) {
    switch (c) {
        case RegulatorClassification::infinite_suggested: return "infinite_suggested";
        case RegulatorClassification::finite: return "finite";
        case RegulatorClassification::inconclusive: return "inconclusive";
    }
    throw std::logic_error("unknown classification");
}

struct RemovalPoint {
    double s = 0.0;
    double min_energy = 0.0;
    double tail_bound = 0.0;
    bool min_is_zero = false;
};

struct RemovalScan {
    std::vector<RemovalPoint> points;
    RegulatorClassification classification = RegulatorClassification::inconclusive;
};

/// Regulator-removal study: the regularized minimum as the damping exponent s
/// walks toward 0. An exactly zero minimum at every s suggests infinitely
/// many solutions; a minimum that beats its own truncation-error bound at any
/// s certifies a nonzero energy at that truncation.
inline RemovalScan regulator_removal_scan(const DiophantinePolynomial& p,
                                          const std::vector<double>& s_grid, int i_max,
                                          const TruncatedFockSpace& space, int shift_var = 0) {
    if (s_grid.empty()) throw std::invalid_argument("s_grid must not be empty");
    for (std::size_t j = 0; j < s_grid.size(); ++j) {
        if (!(s_grid[j] > 0.0) || s_grid[j] > 1.0)
            throw std::invalid_argument("s_grid values must lie in (0,1]");
        if (j > 0 && s_grid[j] >= s_grid[j - 1])
            throw std::invalid_argument("s_grid must be strictly descending");
    }
    RemovalScan scan;
    bool all_zero = true;
    bool any_finite = false;
    for (const double s : s_grid) {
        const auto reg = build_regularized_hp(p, RegulatorFamily{s, i_max}, space, shift_var);
        scan.points.push_back(RemovalPoint{s, reg.min_entry, reg.tail_bound, reg.min_is_zero});
        if (!reg.min_is_zero) all_zero = false;
        if (!reg.min_is_zero && reg.min_entry > reg.tail_bound) any_finite = true;
    }
    if (all_zero)
        scan.classification = RegulatorClassification::infinite_suggested;
    else if (any_finite)
        scan.classification = RegulatorClassification::finite;
    else
        scan.classification = RegulatorClassification::inconclusive;
    return scan;
}

/// Parameterized equation family C(k, N, x_0..x_{K-1}): variable 0 is the bit
/// index k, variable 1 the block parameter N, the rest are unknowns.
struct OmegaFamily {
    DiophantinePolynomial poly;
    int num_params = 2;

    int num_unknowns() const { return poly.num_vars() - num_params; }
};

/// Family text format: an optional `params=2` header line on top of the usual
/// polynomial syntax, with variables ordered (x0=k, x1=N, x2.. unknowns).
inline OmegaFamily parse_omega_family(std::string_view text, PolynomialLimits limits = {}) {
    std::string body(text);
    int params = 2;
    // lift a leading params= header out of the body; vars= stays for the parser
    std::size_t scan = 0;
    while (scan < body.size()) {
        std::size_t line_end = body.find('\n', scan);
        if (line_end == std::string::npos) line_end = body.size();
        std::size_t first = body.find_first_not_of(" \t\r", scan);
        if (first == std::string::npos || first >= line_end) {
            scan = line_end + 1;
            continue;
        }
        if (body.compare(first, 7, "params=") == 0) {
            const std::string value = body.substr(first + 7, line_end - first - 7);
            try {
                params = std::stoi(value);
            } catch (const std::exception&) {
                throw ParseError("malformed params header", first);
            }
            body.erase(scan, std::min(line_end + 1, body.size()) - scan);
            break;
        }
        if (body.compare(first, 4, "vars") == 0) {
            scan = line_end + 1;
            continue;
        }
        break;  // polynomial body reached
    }
    if (params != 2) throw ParseError("only params=2 families are supported", 0);
    OmegaFamily family{parse_polynomial(body, limits), params};
    if (family.poly.num_vars() < 3)
        throw std::invalid_argument("family needs the two parameters and at least one unknown");
    return family;
}

/// C with k and N substituted; remaining variables are the unknowns.
inline DiophantinePolynomial instantiate_family(const OmegaFamily& family, int k, int n) {
    if (k < 0 || n < 0) throw std::invalid_argument("parameters must be non-negative");
    return family.poly.substitute(0, k).substitute(0, n);
}

struct OmegaHamiltonian {
    HermitianOperator op;  // diagonal on the (N_max+1)-block product space
    TruncatedFockSpace block_space;
    int n_max = 0;
    std::vector<double> block_minima;  // min over block N of C(k,N,.)^2
    std::vector<bool> block_min_is_zero;
    double global_min = 0.0;
    std::size_t argmin_index = 0;
};

/// Truncation of the countable-block Hamiltonian sum_N beta_N(s) C(k,N,.)^2 to
/// blocks N <= N_max, each block carrying its own copy of the per-block
/// space. Blocks are independent, so the ground energy decomposes as
/// sum_N beta_N(s) * (block minimum) — asserted in the test suite.
inline OmegaHamiltonian build_omega_hamiltonian(const OmegaFamily& family, int k, int n_max,
                                                const RegulatorFamily& rf,
                                                const TruncatedFockSpace& per_block_space,
                                                FockLimits limits = {}) {
    rf.validate();
    if (n_max < 1) throw std::invalid_argument("N_max must be at least 1");
    if (per_block_space.num_modes() != family.num_unknowns())
        throw std::invalid_argument("per-block space must have one mode per unknown");

    std::vector<int> full_cutoffs;
    for (int n = 0; n <= n_max; ++n)
        full_cutoffs.insert(full_cutoffs.end(), per_block_space.cutoffs().begin(),
                            per_block_space.cutoffs().end());
    TruncatedFockSpace full_space(full_cutoffs, limits);  // throws on dimension blowup

    const std::size_t block_dim = per_block_space.dim();
    std::vector<std::vector<BigInt>> block_diagonals;
    std::vector<double> block_betas;
    std::vector<double> block_minima;
    std::vector<bool> block_min_is_zero;
    for (int n = 0; n <= n_max; ++n) {
        block_diagonals.push_back(
            problem_diagonal(instantiate_family(family, k, n), per_block_space));
        block_betas.push_back(beta(n, rf.s));
        const auto& diag = block_diagonals.back();
        const BigInt lo = *std::min_element(diag.begin(), diag.end());
        block_minima.push_back(lo.convert_to<double>());
        block_min_is_zero.push_back(lo == 0);
    }

    Eigen::VectorXd d(static_cast<Eigen::Index>(full_space.dim()));
    double global_min = 0.0;
    std::size_t argmin = 0;
    for (std::size_t idx = 0; idx < full_space.dim(); ++idx) {
        double entry = 0.0;
        std::size_t rest = idx;
        for (int n = 0; n <= n_max; ++n) {
            const std::size_t sub = rest % block_dim;
            rest /= block_dim;
            entry += block_betas[static_cast<std::size_t>(n)] *
                     block_diagonals[static_cast<std::size_t>(n)][sub].convert_to<double>();
        }
        d[static_cast<Eigen::Index>(idx)] = entry;
        if (idx == 0 || entry < global_min) {
            global_min = entry;
            argmin = idx;
        }
    }
    return OmegaHamiltonian{HermitianOperator::diagonal(full_space, std::move(d)),
                            per_block_space,
                            n_max,
                            std::move(block_minima),
                            std::move(block_min_is_zero),
                            global_min,
                            argmin};
}

struct OmegaCensusEntry {
    int n = 0;
    std::vector<LatticePoint> solutions;
};

/// Classical census over the family's blocks. Reports, for each N <= N_max,
/// the solutions of C(k,N,.)=0 inside the box. Only truncated evidence: no
/// bit of the underlying halting-probability constant is actually decided.
struct OmegaBitReport {
    int k = 0;
    int n_max = 0;
    std::vector<std::int64_t> box_upper;
    std::vector<OmegaCensusEntry> census;
    int count_with_solutions = 0;
    std::string caveat;
};

inline OmegaBitReport omega_bit_report(const OmegaFamily& family, int k, int n_max,
                                       const oracle::SearchBox& box) {
    OmegaBitReport report;
    report.k = k;
    report.n_max = n_max;
    report.box_upper = box.upper;
    report.caveat =
        "truncated census only: finite N and a finite search box decide no bit of the "
        "halting-probability constant";
    for (int n = 0; n <= n_max; ++n) {
        OmegaCensusEntry entry;
        entry.n = n;
        entry.solutions = oracle::find_solutions(instantiate_family(family, k, n), box);
        if (!entry.solutions.empty()) ++report.count_with_solutions;
        report.census.push_back(std::move(entry));
    }
    return report;
}

/// Combined finiteness study: shift sweep plus regulator-removal scan, with a
/// synthesized overall verdict. The sweep halting verdict wins; otherwise an
/// all-zero removal scan suggests infinitude; otherwise the sweep was merely
/// exhausted.
struct FinitenessReport {
    DecisionReport sweep;
    RemovalScan removal;
    Verdict combined = Verdict::sweep_exhausted;
};

inline FinitenessReport assess_finiteness(const DiophantinePolynomial& p, int var, int l_max,
                                          const TruncatedFockSpace& space,
                                          const Schedule& schedule, std::int64_t shots,
                                          std::uint64_t seed, int i_max,
                                          const std::vector<double>& s_grid = {1.0, 0.5, 0.25,
                                                                               0.1},
                                          const ExistenceOptions& options = {}) {
    FinitenessReport report;
    report.sweep = finiteness_sweep(p, var, l_max, space, schedule, shots, seed, options);
    report.sweep.parameters.regulator_i_max = i_max;
    report.sweep.parameters.s_grid = s_grid;
    report.removal = regulator_removal_scan(p, s_grid, i_max, space, var);
    if (report.sweep.verdict == Verdict::finite_halted_at_L)
        report.combined = Verdict::finite_halted_at_L;
    else if (report.removal.classification == RegulatorClassification::infinite_suggested)
        report.combined = Verdict::infinite_suggested;
    else
        report.combined = Verdict::sweep_exhausted;
    return report;
}

}  // namespace diosim
