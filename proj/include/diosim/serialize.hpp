#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adiabatic.hpp"
#include "decision.hpp"
#include "fock.hpp"
#include "polynomial.hpp"

namespace diosim {

using Json = nlohmann::json;

inline Json complex_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
    return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

inline std::string tuple_key(const std::vector<int>& occ) {
    std::string key;
    for (std::size_t i = 0; i < occ.size(); ++i) key += (i ? "," : "") + std::to_string(occ[i]);
    return key;
}

inline Json lattice_point_json(const LatticePoint& pt) {
    Json arr = Json::array();
    for (const auto c : pt) arr.push_back(c);
    return arr;
}

/// Operators serialize as (dim, cutoffs, storage kind, entries). Entries are
/// [re,im] pairs: the diagonal for diagonal storage, row-major full matrix
/// otherwise. Exact integer diagonals additionally ship as decimal strings.
inline Json operator_json(const HermitianOperator& op) {
    Json j;
    j["dim"] = op.dim();
    j["cutoffs"] = op.space().cutoffs();
    j["storage"] = op.is_diagonal() ? "diagonal" : "dense";
    Json entries = Json::array();
    if (op.is_diagonal()) {
        for (Eigen::Index i = 0; i < op.diagonal_values().size(); ++i)
            entries.push_back(Json::array({op.diagonal_values()[i], 0.0}));
        if (op.has_exact_diagonal()) {
            Json exact = Json::array();
            for (const auto& v : op.exact_diagonal()) exact.push_back(v.str());
            j["exact_entries"] = std::move(exact);
        }
    } else {
        const auto& m = op.dense_matrix();
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(complex_json(m(r, c)));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline HermitianOperator operator_from_json(const Json& j) {
    TruncatedFockSpace space(j.at("cutoffs").get<std::vector<int>>());
    const auto& entries = j.at("entries");
    if (j.at("storage") == "diagonal") {
        if (j.contains("exact_entries")) {
            std::vector<BigInt> exact;
            for (const auto& v : j.at("exact_entries")) exact.emplace_back(v.get<std::string>());
            return HermitianOperator::diagonal_exact(std::move(space), std::move(exact));
        }
        Eigen::VectorXd d(static_cast<Eigen::Index>(entries.size()));
        for (std::size_t i = 0; i < entries.size(); ++i)
            d[static_cast<Eigen::Index>(i)] = entries[i].at(0).get<double>();
        return HermitianOperator::diagonal(std::move(space), std::move(d));
    }
    const auto dim = static_cast<Eigen::Index>(space.dim());
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c)
            m(r, c) = complex_from_json(entries[static_cast<std::size_t>(r * dim + c)]);
    return HermitianOperator::dense(std::move(space), std::move(m));
}

inline Json state_json(const StateVector& state) {
    Json j;
    j["dim"] = state.space().dim();
    j["cutoffs"] = state.space().cutoffs();
    Json amps = Json::array();
    for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i)
        amps.push_back(complex_json(state.amplitudes()[i]));
    j["amplitudes"] = std::move(amps);
    return j;
}

inline StateVector state_from_json(const Json& j) {
    TruncatedFockSpace space(j.at("cutoffs").get<std::vector<int>>());
    const auto& amps = j.at("amplitudes");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = complex_from_json(amps[i]);
    return StateVector(std::move(space), std::move(v));
}

inline Json histogram_json(const MeasurementHistogram& hist) {
    Json counts = Json::object();
    for (const auto& [occ, count] : hist.counts) counts[tuple_key(occ)] = count;
    return Json{{"shots", hist.shots}, {"seed", hist.seed}, {"counts", std::move(counts)}};
}

inline Json gap_scan_json(const GapScan& scan) {
    return Json{{"s", scan.s_values},         {"e0", scan.e0},
                {"e1", scan.e1},              {"gaps", scan.gaps},
                {"min_gap", scan.min_gap},    {"min_gap_s", scan.min_gap_s},
                {"degenerate_final", scan.degenerate_final}};
}

inline Json parameters_json(const RunParameters& p) {
    Json j;
    j["cutoffs"] = p.cutoffs;
    Json alphas = Json::array();
    for (const auto& a : p.alphas) alphas.push_back(complex_json(a));
    j["alphas"] = std::move(alphas);
    j["total_time"] = p.total_time;
    j["step_count"] = p.step_count;
    j["shots"] = p.shots;
    j["seed"] = p.seed;
    j["oracle_enabled"] = p.oracle_enabled;
    if (p.sweep_var) j["sweep_var"] = *p.sweep_var;
    if (p.l_max) j["l_max"] = *p.l_max;
    if (p.regulator_s) j["regulator_s"] = *p.regulator_s;
    if (p.regulator_i_max) j["regulator_i_max"] = *p.regulator_i_max;
    if (!p.s_grid.empty()) j["s_grid"] = p.s_grid;
    return j;
}

inline Json sweep_step_json(const SweepStep& step) {
    Json j;
    j["shift"] = step.shift;
    j["verdict"] = to_string(step.verdict);
    Json witnesses = Json::array();
    for (const auto& w : step.witnesses) witnesses.push_back(lattice_point_json(w));
    j["witnesses"] = std::move(witnesses);
    j["min_p_squared"] = step.min_p_squared.str();
    j["oracle_agreement"] = to_string(step.oracle_agreement);
    j["oracle_solution_count"] = step.oracle_solution_count;
    j["norm_defect"] = step.norm_defect;
    return j;
}

inline Json report_json(const DecisionReport& report) {
    Json j;
    j["verdict"] = to_string(report.verdict);
    Json witnesses = Json::array();
    for (const auto& w : report.witnesses) witnesses.push_back(lattice_point_json(w));
    j["witnesses"] = std::move(witnesses);
    if (report.min_p_squared) j["min_p_squared"] = report.min_p_squared->str();
    if (report.min_tuple) j["min_tuple"] = lattice_point_json(*report.min_tuple);
    if (report.halted_at) j["halted_at"] = *report.halted_at;
    j["oracle_agreement"] = to_string(report.oracle_agreement);
    if (report.oracle_solution_count) j["oracle_solution_count"] = *report.oracle_solution_count;
    j["max_norm_defect"] = report.max_norm_defect;
    if (!report.sweep.empty()) {
        Json steps = Json::array();
        for (const auto& step : report.sweep) steps.push_back(sweep_step_json(step));
        j["sweep"] = std::move(steps);
    }
    j["parameters"] = parameters_json(report.parameters);
    return j;
}

inline Json removal_scan_json(const RemovalScan& scan) {
    Json points = Json::array();
    for (const auto& pt : scan.points)
        points.push_back(Json{{"s", pt.s},
                              {"min_energy", pt.min_energy},
                              {"tail_bound", pt.tail_bound},
                              {"min_is_zero", pt.min_is_zero}});
    return Json{{"points", std::move(points)}, {"classification", to_string(scan.classification)}};
}

inline Json finiteness_json(const FinitenessReport& report) {
    return Json{{"sweep", report_json(report.sweep)},
                {"removal", removal_scan_json(report.removal)},
                {"combined", to_string(report.combined)}};
}

inline Json omega_hamiltonian_json(const OmegaHamiltonian& omega) {
    Json j;
    j["dim"] = omega.op.dim();
    j["block_cutoffs"] = omega.block_space.cutoffs();
    j["n_max"] = omega.n_max;
    j["block_minima"] = omega.block_minima;
    Json zeros = Json::array();
    for (const bool z : omega.block_min_is_zero) zeros.push_back(z);
    j["block_min_is_zero"] = std::move(zeros);
    j["global_min"] = omega.global_min;
    j["argmin_occupation"] = omega.op.space().occupation(omega.argmin_index);
    return j;
}

inline Json omega_report_json(const OmegaBitReport& report) {
    Json census = Json::array();
    for (const auto& entry : report.census) {
        Json solutions = Json::array();
        for (const auto& s : entry.solutions) solutions.push_back(lattice_point_json(s));
        census.push_back(Json{{"n", entry.n}, {"solutions", std::move(solutions)}});
    }
    return Json{{"k", report.k},
                {"n_max", report.n_max},
                {"box_upper", report.box_upper},
                {"census", std::move(census)},
                {"count_with_solutions", report.count_with_solutions},
                {"caveat", report.caveat}};
}

// ---- CSV (RFC 4180 quoting, \n line endings) ----

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (const char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) row += ',';
        row += csv_escape(fields[i]);
    }
    row += '\n';
    return row;
}

inline std::string gap_scan_csv(const GapScan& scan) {
    std::string out = csv_row({"s", "E0", "E1"});
    for (std::size_t i = 0; i < scan.s_values.size(); ++i) {
        Json row = Json::array({scan.s_values[i], scan.e0[i], scan.e1[i]});
        out += csv_row({row[0].dump(), row[1].dump(), row[2].dump()});
    }
    return out;
}

inline std::string histogram_csv(const MeasurementHistogram& hist) {
    std::string out = csv_row({"tuple", "count"});
    for (const auto& [occ, count] : hist.counts)
        out += csv_row({tuple_key(occ), std::to_string(count)});
    return out;
}

inline std::string trace_csv(const std::vector<double>& energies, const Schedule& schedule) {
    std::string out = csv_row({"step", "s_mid", "energy"});
    for (std::size_t k = 0; k < energies.size(); ++k) {
        const double s_mid = (static_cast<double>(k) + 0.5) / schedule.step_count;
        out += csv_row({std::to_string(k), Json(s_mid).dump(), Json(energies[k]).dump()});
    }
    return out;
}

}  // namespace diosim
