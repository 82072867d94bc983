#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "diosim/decision.hpp"
#include "diosim/serialize.hpp"

using namespace diosim;

TEST_CASE("operator serialization") {
    SECTION("exact diagonal round-trip keeps the integers") {
        const auto hp = build_hp(parse_polynomial("x0 - 3"), TruncatedFockSpace({5}));
        const Json j = operator_json(hp);
        CHECK(j.at("dim") == 6);
        CHECK(j.at("storage") == "diagonal");
        CHECK(j.at("cutoffs") == Json::array({5}));
        CHECK(j.at("exact_entries")[0] == "9");
        CHECK(j.at("entries")[0] == Json::array({9.0, 0.0}));

        const auto back = operator_from_json(j);
        REQUIRE(back.has_exact_diagonal());
        CHECK(back.exact_diagonal() == hp.exact_diagonal());
        CHECK(back.space() == hp.space());
    }

    SECTION("dense round-trip through a dump/parse cycle is lossless") {
        const auto hi =
            build_hi(CoherentParams{{Complex(1.0, 0.5)}}, TruncatedFockSpace({6}));
        const Json j = Json::parse(operator_json(hi).dump());
        const auto back = operator_from_json(j);
        REQUIRE_FALSE(back.is_diagonal());
        CHECK((back.dense_matrix() - hi.dense_matrix()).cwiseAbs().maxCoeff() == 0.0);
    }

    SECTION("plain float diagonals round-trip without exact entries") {
        Eigen::VectorXd d(3);
        d << 0.25, -1.5, 2.0;
        const auto op = HermitianOperator::diagonal(TruncatedFockSpace({2}), d);
        const auto back = operator_from_json(Json::parse(operator_json(op).dump()));
        CHECK_FALSE(back.has_exact_diagonal());
        CHECK((back.diagonal_values() - op.diagonal_values()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("state serialization") {
    const auto psi = coherent_state(CoherentParams{{Complex(0.8, -0.3)}}, TruncatedFockSpace({9}));
    const auto back = state_from_json(Json::parse(state_json(psi).dump()));
    CHECK(back.space() == psi.space());
    CHECK((back.amplitudes() - psi.amplitudes()).norm() == 0.0);
}

TEST_CASE("histogram serialization") {
    MeasurementHistogram hist;
    hist.shots = 10;
    hist.seed = 3;
    hist.counts[{0, 3}] = 7;
    hist.counts[{1, 0}] = 3;

    SECTION("json keys are comma-joined tuples") {
        const Json j = histogram_json(hist);
        CHECK(j.at("shots") == 10);
        CHECK(j.at("seed") == 3);
        CHECK(j.at("counts").at("0,3") == 7);
        CHECK(j.at("counts").at("1,0") == 3);
    }

    SECTION("csv quotes the tuple field") {
        const std::string csv = histogram_csv(hist);
        CHECK(csv == "tuple,count\n\"0,3\",7\n\"1,0\",3\n");
    }
}

TEST_CASE("decision report serialization") {
    DecisionReport report;
    report.verdict = Verdict::solution_found;
    report.witnesses = {LatticePoint{3}};
    report.min_p_squared = BigInt("123456789012345678901234567890");
    report.oracle_agreement = OracleAgreement::agrees;
    report.oracle_solution_count = 1;
    report.max_norm_defect = 1e-12;
    report.parameters.cutoffs = {10};
    report.parameters.alphas = {Complex(1.0, 0.0)};
    report.parameters.total_time = 100.0;
    report.parameters.step_count = 1000;
    report.parameters.shots = 10000;
    report.parameters.seed = 12345;

    const Json j = report_json(report);
    CHECK(j.at("verdict") == "solution_found");
    CHECK(j.at("witnesses") == Json::array({Json::array({3})}));
    // big integers travel as decimal strings, immune to double rounding
    CHECK(j.at("min_p_squared") == "123456789012345678901234567890");
    CHECK(j.at("oracle_agreement") == "agrees");
    CHECK(j.at("parameters").at("seed") == 12345);
    CHECK(j.at("parameters").at("alphas") == Json::array({Json::array({1.0, 0.0})}));
    CHECK_FALSE(j.contains("sweep"));
    CHECK_FALSE(j.contains("halted_at"));
}

TEST_CASE("scan serialization") {
    SECTION("gap scans as json and csv") {
        GapScan scan;
        scan.s_values = {0.0, 1.0};
        scan.e0 = {0.5, 0.0};
        scan.e1 = {1.5, 1.0};
        scan.gaps = {1.0, 1.0};
        scan.min_gap = 1.0;
        scan.min_gap_s = 0.0;
        const Json j = gap_scan_json(scan);
        CHECK(j.at("min_gap") == 1.0);
        CHECK(j.at("degenerate_final") == false);

        const std::string csv = gap_scan_csv(scan);
        CHECK(csv == "s,E0,E1\n0.0,0.5,1.5\n1.0,0.0,1.0\n");
    }

    SECTION("removal scans carry the classification") {
        RemovalScan scan;
        scan.points = {RemovalPoint{1.0, 2.7, 1e-20, false}};
        scan.classification = RegulatorClassification::finite;
        const Json j = removal_scan_json(scan);
        CHECK(j.at("classification") == "finite");
        CHECK(j.at("points")[0].at("min_is_zero") == false);
        CHECK(to_string(RegulatorClassification::infinite_suggested) == "infinite_suggested");
        CHECK(to_string(RegulatorClassification::inconclusive) == "inconclusive");
    }

    SECTION("energy trace csv") {
        const std::string csv = trace_csv({5.0, 4.0}, Schedule{10.0, 2});
        CHECK(csv == "step,s_mid,energy\n0,0.25,5.0\n1,0.75,4.0\n");
    }
}

TEST_CASE("csv escaping") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
    CHECK(csv_row({"a", "b,c"}) == "a,\"b,c\"\n");
}

TEST_CASE("identical runs serialize identically") {
    TruncatedFockSpace space({10});
    const Schedule schedule{20.0, 200};
    const auto p = parse_polynomial("x0 - 3");
    const auto a = decide_existence(p, space, schedule, 1000, 9);
    const auto b = decide_existence(p, space, schedule, 1000, 9);
    CHECK(report_json(a).dump(2) == report_json(b).dump(2));
}

TEST_CASE("omega serialization") {
    const auto family = parse_omega_family("x2 + x1 - 2");
    const auto report = omega_bit_report(family, 0, 3, oracle::SearchBox{{4}});
    const Json j = omega_report_json(report);
    CHECK(j.at("k") == 0);
    CHECK(j.at("n_max") == 3);
    CHECK(j.at("count_with_solutions") == 3);
    CHECK(j.at("census").size() == 4);
    CHECK(j.at("census")[3].at("solutions") == Json::array());
    CHECK(j.at("caveat").get<std::string>().find("census") != std::string::npos);

    const auto omega =
        build_omega_hamiltonian(family, 0, 3, RegulatorFamily{1.0, 30}, TruncatedFockSpace({4}));
    const Json h = omega_hamiltonian_json(omega);
    CHECK(h.at("dim") == 625);
    CHECK(h.at("block_cutoffs") == Json::array({4}));
    CHECK(h.at("argmin_occupation") == Json::array({2, 1, 0, 0}));
}
