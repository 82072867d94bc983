// diosim — desk-scale simulator of the adiabatic route to Diophantine
// decision problems: equation solving, shift-sweep finiteness runs,
// regularized Hamiltonians, and block-truncated parameterized families,
// every verdict cross-checked against an exact brute-force oracle.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diosim/oracle.hpp"
#include "diosim/serialize.hpp"

namespace {

using namespace diosim;

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
    std::string poly_text;
    std::string poly_file;
    std::vector<int> nmax;
    std::vector<std::string> alpha_text;
    double total_time = 100.0;
    int steps = 1000;
    std::int64_t shots = 10000;
    std::uint64_t seed = 12345;
    bool no_oracle = false;
    std::vector<std::int64_t> box;
    std::string format = "json";
    bool no_meta = false;
    std::string out_path;
};

// "1", "-2", "0.5i", "1+0.5i", "1-0.5i"
Complex parse_complex(const std::string& text) {
    const std::string msg = "cannot parse complex number '" + text + "'";
    std::string t;
    for (const char c : text)
        if (c != ' ') t += c;
    if (t.empty()) throw CLI::ValidationError(msg);
    // split at the last +/- that is not a leading sign or exponent sign
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < t.size(); ++i) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') split = i;
    }
    const auto to_double = [&](std::string part) {
        bool imag = false;
        if (!part.empty() && part.back() == 'i') {
            imag = true;
            part.pop_back();
            if (part.empty() || part == "+" || part == "-") part += "1";
        }
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(part, &used);
        } catch (const std::exception&) {
            throw CLI::ValidationError(msg);
        }
        if (used != part.size()) throw CLI::ValidationError(msg);
        return std::pair<double, bool>(value, imag);
    };
    double re = 0.0, im = 0.0;
    if (split == std::string::npos) {
        const auto [value, imag] = to_double(t);
        (imag ? im : re) = value;
    } else {
        const auto [a, a_imag] = to_double(t.substr(0, split));
        const auto [b, b_imag] = to_double(t.substr(split));
        if (a_imag == b_imag) throw CLI::ValidationError(msg);
        (a_imag ? im : re) = a;
        (b_imag ? im : re) = b;
    }
    return Complex(re, im);
}

std::vector<Complex> resolve_alphas(const std::vector<std::string>& texts, int modes) {
    std::vector<Complex> alphas;
    for (const auto& t : texts) alphas.push_back(parse_complex(t));
    if (alphas.empty()) alphas.assign(static_cast<std::size_t>(modes), Complex(1.0, 0.0));
    if (alphas.size() == 1 && modes > 1)
        alphas.assign(static_cast<std::size_t>(modes), alphas.front());
    if (alphas.size() != static_cast<std::size_t>(modes))
        throw CLI::ValidationError("expected 1 or " + std::to_string(modes) + " alpha values");
    return alphas;
}

std::string read_poly_source(const CommonOpts& o) {
    if (!o.poly_text.empty() && !o.poly_file.empty())
        throw CLI::ValidationError("give either --poly or --poly-file, not both");
    if (!o.poly_text.empty()) return o.poly_text;
    if (o.poly_file.empty()) throw CLI::ValidationError("a polynomial is required (--poly/--poly-file)");
    std::ifstream in(o.poly_file);
    if (!in) throw CLI::ValidationError("cannot open polynomial file '" + o.poly_file + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::int64_t> resolve_box(const CommonOpts& o, int vars) {
    std::vector<std::int64_t> upper = o.box;
    if (upper.empty()) upper.assign(static_cast<std::size_t>(vars), 10);
    if (upper.size() == 1 && vars > 1) upper.assign(static_cast<std::size_t>(vars), upper.front());
    if (upper.size() != static_cast<std::size_t>(vars))
        throw CLI::ValidationError("expected 1 or " + std::to_string(vars) + " box bounds");
    return upper;
}

// Cutoffs: explicit --nmax wins; otherwise, with the oracle available,
// n_max(i) = max(9, 2 * largest root coordinate i found in the oracle box).
// The floor must be 9, not 8: with the default alpha = 1 a cutoff of 8
// leaves a coherent-state tail of 1.13e-6, just over the 1e-6 contract.
std::vector<int> resolve_cutoffs(const CommonOpts& o, const DiophantinePolynomial& p) {
    const int vars = p.num_vars();
    std::vector<int> cutoffs = o.nmax;
    if (cutoffs.size() == 1 && vars > 1) cutoffs.assign(static_cast<std::size_t>(vars), cutoffs.front());
    if (!cutoffs.empty()) {
        if (cutoffs.size() != static_cast<std::size_t>(vars))
            throw CLI::ValidationError("expected 1 or " + std::to_string(vars) + " cutoffs");
        return cutoffs;
    }
    if (o.no_oracle)
        throw CLI::ValidationError("--nmax is required when the oracle is disabled");
    oracle::SearchBox box{resolve_box(o, vars)};
    const auto roots = oracle::find_solutions(p, box);
    cutoffs.assign(static_cast<std::size_t>(vars), 9);
    for (const auto& root : roots)
        for (int v = 0; v < vars; ++v)
            cutoffs[static_cast<std::size_t>(v)] =
                std::max(cutoffs[static_cast<std::size_t>(v)], 2 * static_cast<int>(root[static_cast<std::size_t>(v)]));
    return cutoffs;
}

Json config_json(const CommonOpts& o, const std::string& poly_printed,
                 const std::vector<int>& cutoffs, const std::vector<Complex>& alphas) {
    Json j;
    j["polynomial"] = poly_printed;
    j["cutoffs"] = cutoffs;
    Json as = Json::array();
    for (const auto& a : alphas) as.push_back(complex_json(a));
    j["alphas"] = std::move(as);
    j["total_time"] = o.total_time;
    j["steps"] = o.steps;
    j["shots"] = o.shots;
    j["seed"] = o.seed;
    j["oracle_enabled"] = !o.no_oracle;
    j["format"] = o.format;
    return j;
}

Json meta_json() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%FT%TZ", std::gmtime(&tt));
    return Json{{"version", kVersion}, {"timestamp", stamp}};
}

int emit(const std::string& text, const CommonOpts& o) {
    if (o.out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return 0;
    }
    std::ofstream out(o.out_path);
    if (!out) {
        std::cerr << "error: cannot write '" << o.out_path << "'\n";
        return 2;
    }
    out << text;
    return 0;
}

int emit_envelope(const std::string& command, Json config, Json report, const CommonOpts& o) {
    Json envelope;
    envelope["command"] = command;
    envelope["config"] = std::move(config);
    envelope["report"] = std::move(report);
    if (!o.no_meta) envelope["meta"] = meta_json();
    return emit(envelope.dump(2), o);
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_schedule) {
    cmd->add_option("-p,--poly", o.poly_text, "polynomial, e.g. \"x0^2 - 2\"");
    cmd->add_option("-f,--poly-file", o.poly_file, "file containing the polynomial");
    cmd->add_option("--nmax", o.nmax,
                    "per-mode occupation cutoffs (single value broadcasts)")
        ->delimiter(',');
    cmd->add_option("--alpha", o.alpha_text,
                    "coherent alphas, e.g. 1 or 1+0.5i (single value broadcasts)")
        ->delimiter(',');
    if (with_schedule) {
        cmd->add_option("-T,--total-time", o.total_time, "total evolution time")
            ->capture_default_str();
        cmd->add_option("--steps", o.steps, "number of propagation steps")
            ->capture_default_str();
        cmd->add_option("--shots", o.shots, "measurement shots")->capture_default_str();
    }
    cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    cmd->add_flag("--no-oracle", o.no_oracle, "skip the brute-force cross-check");
    cmd->add_option("--oracle-box", o.box,
                    "inclusive upper bounds for the oracle box (single value broadcasts)")
        ->delimiter(',');
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd->add_flag("--no-meta", o.no_meta, "omit timestamp/version metadata");
    cmd->add_option("-o,--out", o.out_path, "write output to a file instead of stdout");
}

int run_solve(const CommonOpts& o) {
    const auto p = parse_polynomial(read_poly_source(o));
    const auto cutoffs = resolve_cutoffs(o, p);
    TruncatedFockSpace space(cutoffs);
    const auto alphas = resolve_alphas(o.alpha_text, space.num_modes());
    ExistenceOptions options;
    options.alphas = alphas;
    options.use_oracle = !o.no_oracle;
    const Schedule schedule{o.total_time, o.steps};
    const DecisionReport report =
        decide_existence(p, space, schedule, o.shots, o.seed, options);
    const int rc = emit_envelope("solve", config_json(o, p.to_string(), cutoffs, alphas),
                                 report_json(report), o);
    if (rc != 0) return rc;
    return report.verdict == Verdict::solution_found ? 0 : 1;
}

int run_gap(const CommonOpts& o, int grid) {
    const auto p = parse_polynomial(read_poly_source(o));
    const auto cutoffs = resolve_cutoffs(o, p);
    TruncatedFockSpace space(cutoffs);
    const auto alphas = resolve_alphas(o.alpha_text, space.num_modes());
    const auto hi = build_hi(CoherentParams{alphas}, space);
    const auto hp = build_hp(p, space);
    const GapScan scan = gap_scan(hi, hp, grid);
    if (o.format == "csv") {
        std::cerr << "min_gap=" << scan.min_gap << " at s=" << scan.min_gap_s
                  << " degenerate_final=" << (scan.degenerate_final ? "true" : "false") << "\n";
        return emit(gap_scan_csv(scan), o);
    }
    Json config = config_json(o, p.to_string(), cutoffs, alphas);
    config["grid"] = grid;
    return emit_envelope("gap", std::move(config), gap_scan_json(scan), o);
}

int run_evolve(const CommonOpts& o, bool trace) {
    const auto p = parse_polynomial(read_poly_source(o));
    const auto cutoffs = resolve_cutoffs(o, p);
    TruncatedFockSpace space(cutoffs);
    const auto alphas = resolve_alphas(o.alpha_text, space.num_modes());
    const auto hi = build_hi(CoherentParams{alphas}, space);
    const auto hp = build_hp(p, space);
    const StateVector start = coherent_state(CoherentParams{alphas}, space);
    const Schedule schedule{o.total_time, o.steps};
    const EvolutionResult result = evolve(hi, hp, schedule, start, trace);
    const MeasurementHistogram hist = measure_occupation(result.state, o.shots, o.seed);
    const double final_energy =
        result.state.amplitudes().dot(hp.apply(result.state.amplitudes())).real();
    if (o.format == "csv")
        return emit(trace ? trace_csv(result.energy_trace, schedule) : histogram_csv(hist), o);
    Json report;
    report["final_energy"] = final_energy;
    report["norm_defect"] = result.norm_defect;
    report["histogram"] = histogram_json(hist);
    if (trace) report["energy_trace"] = result.energy_trace;
    Json config = config_json(o, p.to_string(), cutoffs, alphas);
    config["trace"] = trace;
    return emit_envelope("evolve", std::move(config), std::move(report), o);
}

int run_finiteness(const CommonOpts& o, int var, int l_max, int i_max,
                   const std::vector<double>& s_grid) {
    const auto p = parse_polynomial(read_poly_source(o));
    const auto cutoffs = resolve_cutoffs(o, p);
    TruncatedFockSpace space(cutoffs);
    const auto alphas = resolve_alphas(o.alpha_text, space.num_modes());
    ExistenceOptions options;
    options.alphas = alphas;
    options.use_oracle = !o.no_oracle;
    const Schedule schedule{o.total_time, o.steps};
    const FinitenessReport report = assess_finiteness(p, var, l_max, space, schedule, o.shots,
                                                      o.seed, i_max, s_grid, options);
    Json config = config_json(o, p.to_string(), cutoffs, alphas);
    config["sweep_var"] = var;
    config["l_max"] = l_max;
    config["i_max"] = i_max;
    config["s_grid"] = s_grid;
    return emit_envelope("finiteness", std::move(config), finiteness_json(report), o);
}

int run_omega(const CommonOpts& o, int k, int n_max_blocks, const std::vector<int>& block_nmax,
              double s, int i_max, bool with_hamiltonian) {
    const OmegaFamily family = parse_omega_family(read_poly_source(o));
    const int unknowns = family.num_unknowns();
    std::vector<std::int64_t> upper = o.box;
    if (upper.empty()) upper.assign(static_cast<std::size_t>(unknowns), 10);
    if (upper.size() == 1 && unknowns > 1)
        upper.assign(static_cast<std::size_t>(unknowns), upper.front());
    oracle::SearchBox box{upper};
    const OmegaBitReport census = omega_bit_report(family, k, n_max_blocks, box);
    Json report;
    report["census"] = omega_report_json(census);
    std::vector<int> block_cutoffs = block_nmax;
    if (block_cutoffs.empty()) block_cutoffs.assign(static_cast<std::size_t>(unknowns), 4);
    if (block_cutoffs.size() == 1 && unknowns > 1)
        block_cutoffs.assign(static_cast<std::size_t>(unknowns), block_cutoffs.front());
    if (with_hamiltonian) {
        const OmegaHamiltonian omega = build_omega_hamiltonian(
            family, k, n_max_blocks, RegulatorFamily{s, i_max}, TruncatedFockSpace(block_cutoffs));
        report["hamiltonian"] = omega_hamiltonian_json(omega);
    }
    Json config = config_json(o, family.poly.to_string(), block_cutoffs, {});
    config["k"] = k;
    config["n_max"] = n_max_blocks;
    config["regulator_s"] = s;
    config["i_max"] = i_max;
    config["oracle_box"] = upper;
    return emit_envelope("omega", std::move(config), std::move(report), o);
}

int run_oracle(const CommonOpts& o, bool regularized, double s, int i_max, int shift_var) {
    const auto p = parse_polynomial(read_poly_source(o));
    oracle::SearchBox box{resolve_box(o, p.num_vars())};
    Json report;
    if (regularized) {
        const auto reg = oracle::regularized_min(p, RegulatorFamily{s, i_max}, box, shift_var);
        report["regularized_min"] = reg.value.str();
        report["exact"] = reg.exact;
        Json argmins = Json::array();
        for (const auto& a : reg.argmins) argmins.push_back(lattice_point_json(a));
        report["argmins"] = std::move(argmins);
    } else {
        const auto solutions = oracle::find_solutions(p, box);
        Json roots = Json::array();
        for (const auto& r : solutions) roots.push_back(lattice_point_json(r));
        report["solutions"] = std::move(roots);
        const auto minimum = oracle::min_of_square(p, box);
        report["min_p_squared"] = minimum.min_value.str();
        Json argmins = Json::array();
        for (const auto& a : minimum.argmins) argmins.push_back(lattice_point_json(a));
        report["argmins"] = std::move(argmins);
    }
    Json config;
    config["polynomial"] = p.to_string();
    config["box"] = box.upper;
    if (regularized) {
        config["regulator_s"] = s;
        config["i_max"] = i_max;
        config["shift_var"] = shift_var;
    }
    config["format"] = o.format;
    return emit_envelope("oracle", std::move(config), std::move(report), o);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adiabatic simulator for Diophantine decision problems"};
    app.require_subcommand(1);
    app.set_config("--config", "", "configuration file (flags take precedence)")
        ->envname("DIOSIM_CONFIG");

    CommonOpts solve_opts, gap_opts, evolve_opts, fin_opts, omega_opts, oracle_opts;

    auto* solve = app.add_subcommand("solve", "decide solution existence in the truncation");
    add_common(solve, solve_opts, true);

    auto* gap = app.add_subcommand("gap", "scan the spectral gap along the interpolation");
    int grid = 101;
    add_common(gap, gap_opts, false);
    gap->add_option("--grid", grid, "number of s grid points")->capture_default_str();

    auto* evolve_cmd = app.add_subcommand("evolve", "run the adiabatic evolution and measure");
    bool trace = false;
    add_common(evolve_cmd, evolve_opts, true);
    evolve_cmd->add_flag("--trace", trace, "record per-step expected energy");

    auto* fin = app.add_subcommand("finiteness",
                                   "shift sweep plus regulator-removal scan");
    int var = 0, l_max = 10, i_max = 30;
    std::vector<double> s_grid{1.0, 0.5, 0.25, 0.1};
    add_common(fin, fin_opts, true);
    fin->add_option("--var", var, "variable to shift")->capture_default_str();
    fin->add_option("--lmax", l_max, "largest shift to try")->capture_default_str();
    fin->add_option("--imax", i_max, "regulator series truncation")->capture_default_str();
    fin->add_option("--s-grid", s_grid, "descending damping exponents")
        ->delimiter(',')
        ->capture_default_str();

    auto* omega = app.add_subcommand("omega", "census of a parameterized family");
    int k = 0, n_max_blocks = 3, omega_imax = 30;
    double omega_s = 1.0;
    bool with_hamiltonian = false;
    std::vector<int> block_nmax;
    add_common(omega, omega_opts, false);
    omega->add_option("-k,--bit", k, "bit index parameter k")->capture_default_str();
    omega->add_option("--nmax-blocks", n_max_blocks, "largest block parameter N")
        ->capture_default_str();
    omega->add_option("--block-nmax", block_nmax, "per-block occupation cutoffs")
        ->delimiter(',');
    omega->add_option("--s", omega_s, "damping exponent")->capture_default_str();
    omega->add_option("--imax", omega_imax, "regulator series truncation")->capture_default_str();
    omega->add_flag("--with-hamiltonian", with_hamiltonian,
                    "also build the block-truncated Hamiltonian");

    auto* oracle_cmd = app.add_subcommand("oracle", "exact brute-force search only");
    bool regularized = false;
    double oracle_s = 1.0;
    int oracle_imax = 30, shift_var = 0;
    add_common(oracle_cmd, oracle_opts, false);
    oracle_cmd->add_flag("--regularized", regularized, "minimize the damped shifted sum");
    oracle_cmd->add_option("--s", oracle_s, "damping exponent")->capture_default_str();
    oracle_cmd->add_option("--imax", oracle_imax, "series truncation")->capture_default_str();
    oracle_cmd->add_option("--shift-var", shift_var, "shifted variable")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(solve_opts);
        if (gap->parsed()) return run_gap(gap_opts, grid);
        if (evolve_cmd->parsed()) return run_evolve(evolve_opts, trace);
        if (fin->parsed()) return run_finiteness(fin_opts, var, l_max, i_max, s_grid);
        if (omega->parsed())
            return run_omega(omega_opts, k, n_max_blocks, block_nmax, omega_s, omega_imax,
                             with_hamiltonian);
        if (oracle_cmd->parsed())
            return run_oracle(oracle_opts, regularized, oracle_s, oracle_imax, shift_var);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
