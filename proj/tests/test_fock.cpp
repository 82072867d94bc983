#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include <Eigen/Dense>

#include "diosim/fock.hpp"
#include "diosim/polynomial.hpp"

using namespace diosim;

TEST_CASE("truncated product space indexing") {
    TruncatedFockSpace space({2, 3});

    SECTION("dimension and strides") {
        CHECK(space.dim() == 12);
        CHECK(space.num_modes() == 2);
        CHECK(space.stride(0) == 1);  // mode 0 varies fastest
        CHECK(space.stride(1) == 3);
    }

    SECTION("occupation and index round-trip") {
        CHECK(space.occupation(0) == std::vector<int>{0, 0});
        CHECK(space.occupation(1) == std::vector<int>{1, 0});
        CHECK(space.occupation(3) == std::vector<int>{0, 1});
        CHECK(space.index_of({1, 0}) == 1);
        for (std::size_t idx = 0; idx < space.dim(); ++idx)
            CHECK(space.index_of(space.occupation(idx)) == idx);
    }

    SECTION("bounds checking") {
        CHECK_THROWS_AS(space.occupation(12), std::out_of_range);
        CHECK_THROWS_AS(space.index_of({3, 0}), std::out_of_range);
        CHECK_THROWS_AS(space.index_of({0, 0, 0}), std::invalid_argument);
    }

    SECTION("construction limits") {
        CHECK_THROWS_AS(TruncatedFockSpace({}), std::invalid_argument);
        CHECK_THROWS_AS(TruncatedFockSpace({0}), std::invalid_argument);
        CHECK_THROWS_AS(TruncatedFockSpace({10, 10}, FockLimits{100}), std::length_error);
        CHECK_NOTHROW(TruncatedFockSpace({10, 10}, FockLimits{121}));
    }
}

TEST_CASE("annihilation operator and the truncation artifact") {
    TruncatedFockSpace space({5});
    const Eigen::MatrixXcd a = annihilation_matrix(space, 0);

    SECTION("matrix elements are sqrt(n) on the superdiagonal") {
        for (int n = 1; n <= 5; ++n)
            CHECK(a(n - 1, n) == Complex(std::sqrt(static_cast<double>(n)), 0.0));
        CHECK(a.cwiseAbs().sum() == Catch::Approx((a.diagonal(1).cwiseAbs()).sum()));
    }

    SECTION("number operator a†a counts the occupation") {
        const Eigen::MatrixXcd num = a.adjoint() * a;
        for (int n = 0; n <= 5; ++n) CHECK(num(n, n).real() == Catch::Approx(n));
    }

    SECTION("commutator corner defect") {
        const Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
        CHECK(comm(0, 0).real() == Catch::Approx(1.0));
        CHECK(comm(3, 3).real() == Catch::Approx(1.0));
        CHECK(comm(5, 5).real() == Catch::Approx(-5.0));  // cutoff corner
    }

    SECTION("mode index validation") {
        CHECK_THROWS_AS(annihilation_matrix(space, 1), std::out_of_range);
        CHECK_THROWS_AS(annihilation_matrix(space, -1), std::out_of_range);
    }

    SECTION("multimode operators act on their own factor") {
        TruncatedFockSpace two({2, 2});
        const Eigen::MatrixXcd a0 = annihilation_matrix(two, 0);
        const Eigen::MatrixXcd a1 = annihilation_matrix(two, 1);
        // a0 connects (1,1) -> (0,1); a1 connects (1,1) -> (1,0)
        const auto from = static_cast<Eigen::Index>(two.index_of({1, 1}));
        CHECK(a0(static_cast<Eigen::Index>(two.index_of({0, 1})), from) == Complex(1.0, 0.0));
        CHECK(a1(static_cast<Eigen::Index>(two.index_of({1, 0})), from) == Complex(1.0, 0.0));
        CHECK((a0 * a1 - a1 * a0).cwiseAbs().maxCoeff() == Catch::Approx(0.0));
    }
}

TEST_CASE("problem Hamiltonian is the exact squared polynomial") {
    SECTION("single variable") {
        const auto hp = build_hp(parse_polynomial("x0 - 3"), TruncatedFockSpace({5}));
        REQUIRE(hp.is_diagonal());
        REQUIRE(hp.has_exact_diagonal());
        const std::vector<BigInt> expected{9, 4, 1, 0, 1, 4};
        CHECK(hp.exact_diagonal() == expected);
        for (int n = 0; n <= 5; ++n)
            CHECK(hp.diagonal_values()[n] == Catch::Approx((n - 3) * (n - 3)));
    }

    SECTION("two variables with two zeros") {
        TruncatedFockSpace space({2, 2});
        const auto hp = build_hp(parse_polynomial("x0 + x1 - 1"), space);
        const auto& exact = hp.exact_diagonal();
        for (std::size_t idx = 0; idx < space.dim(); ++idx) {
            const auto occ = space.occupation(idx);
            const BigInt p = occ[0] + occ[1] - 1;
            CHECK(exact[idx] == p * p);
        }
        CHECK(exact[space.index_of({1, 0})] == 0);
        CHECK(exact[space.index_of({0, 1})] == 0);
    }

    SECTION("variable count must match the mode count") {
        CHECK_THROWS_AS(build_hp(parse_polynomial("x0 + x1"), TruncatedFockSpace({3})),
                        std::invalid_argument);
    }

    SECTION("entries that overflow a double are rejected") {
        const std::string huge = "1" + std::string(160, '0');
        const auto p = parse_polynomial(huge + "*x0");
        CHECK_THROWS_AS(build_hp(p, TruncatedFockSpace({1})), std::overflow_error);
    }
}

TEST_CASE("initial Hamiltonian structure") {
    SECTION("single-mode tridiagonal block") {
        TruncatedFockSpace space({4});
        const Complex alpha(0.6, 0.3);
        const auto hi = build_hi(CoherentParams{{alpha}}, space);
        REQUIRE_FALSE(hi.is_diagonal());
        const auto& h = hi.dense_matrix();
        for (int n = 0; n <= 4; ++n)
            CHECK(h(n, n).real() == Catch::Approx(n + std::norm(alpha)));
        for (int n = 1; n <= 4; ++n) {
            // H = (a† - conj(alpha))(a - alpha) puts -alpha*sqrt(n) at (n, n-1)
            const double root = std::sqrt(static_cast<double>(n));
            CHECK(std::abs(h(n, n - 1) - (-alpha * root)) < 1e-14);
            CHECK(std::abs(h(n - 1, n) - (-std::conj(alpha) * root)) < 1e-14);
        }
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    }

    SECTION("modes contribute additively on the product space") {
        TruncatedFockSpace space({2, 2});
        const Complex a(0.5, 0.0), b(0.0, 0.5);
        const auto hi = build_hi(CoherentParams{{a, b}}, space);
        const auto& h = hi.dense_matrix();
        const auto i00 = static_cast<Eigen::Index>(space.index_of({0, 0}));
        const auto i10 = static_cast<Eigen::Index>(space.index_of({1, 0}));
        const auto i01 = static_cast<Eigen::Index>(space.index_of({0, 1}));
        CHECK(h(i00, i00).real() == Catch::Approx(std::norm(a) + std::norm(b)));
        CHECK(std::abs(h(i00, i10) - (-std::conj(a))) < 1e-14);
        CHECK(std::abs(h(i00, i01) - (-std::conj(b))) < 1e-14);
        CHECK(h(i10, i01) == Complex(0.0, 0.0));  // no cross-mode coupling
    }

    SECTION("matches the operator product form (a† - conj(alpha))(a - alpha)") {
        TruncatedFockSpace space({6});
        const Complex alpha(1.0, -0.5);
        const Eigen::MatrixXcd a = annihilation_matrix(space, 0);
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
        const Eigen::MatrixXcd direct =
            (a.adjoint() - std::conj(alpha) * id) * (a - alpha * id);
        const auto hi = build_hi(CoherentParams{{alpha}}, space);
        CHECK((hi.dense_matrix() - direct).cwiseAbs().maxCoeff() < 1e-12);
    }

    SECTION("truncation-safety rule is enforced") {
        TruncatedFockSpace space({10});
        CHECK_THROWS_AS(build_hi(CoherentParams{{Complex(2.0, 0.0)}}, space),
                        std::invalid_argument);  // |alpha|^2 = 4 > 10/4
        CHECK_THROWS_AS(build_hi(CoherentParams{{Complex(1.0, 0.0), Complex(1.0, 0.0)}}, space),
                        std::invalid_argument);  // one alpha per mode
        CHECK_NOTHROW(build_hi(CoherentParams{{Complex(1.0, 0.0)}}, space));
    }
}

TEST_CASE("truncated coherent state") {
    SECTION("amplitude recursion matches alpha^n / sqrt(n!)") {
        TruncatedFockSpace space({12});
        const Complex alpha(0.9, 0.4);
        const auto psi = coherent_state(CoherentParams{{alpha}}, space);
        const auto& v = psi.amplitudes();
        for (int n = 1; n <= 12; ++n) {
            const Complex ratio = v[n] / v[n - 1];
            CHECK(std::abs(ratio - alpha / std::sqrt(static_cast<double>(n))) < 1e-12);
        }
        CHECK(psi.norm() == Catch::Approx(1.0));
    }

    SECTION("the state is a near-null vector of the initial Hamiltonian") {
        TruncatedFockSpace space({12});
        const CoherentParams params{{Complex(1.0, 0.0)}};
        const auto psi = coherent_state(params, space);
        const auto hi = build_hi(params, space);
        const double energy = (psi.amplitudes().adjoint() * hi.apply(psi.amplitudes()))(0).real();
        CHECK(energy >= -1e-12);
        CHECK(energy < 1e-6);
    }

    SECTION("product structure across modes") {
        TruncatedFockSpace space({8, 8});
        const CoherentParams params{{Complex(0.5, 0.0), Complex(0.0, 0.8)}};
        const auto psi = coherent_state(params, space);
        const auto one0 = coherent_state(CoherentParams{{params.alphas[0]}},
                                         TruncatedFockSpace({8}));
        const auto one1 = coherent_state(CoherentParams{{params.alphas[1]}},
                                         TruncatedFockSpace({8}));
        for (std::size_t idx = 0; idx < space.dim(); ++idx) {
            const auto occ = space.occupation(idx);
            const Complex expected =
                one0.amplitudes()[occ[0]] * one1.amplitudes()[occ[1]];
            CHECK(std::abs(psi.amplitudes()[static_cast<Eigen::Index>(idx)] - expected) < 1e-12);
        }
    }

    SECTION("rejects a discarded tail above 1e-6 even when the safety rule holds") {
        // |alpha|^2 = 1 = cutoff/4 passes the rule, but at cutoff 4 the
        // discarded Poisson weight is ~3.7e-3
        TruncatedFockSpace space({4});
        CHECK_THROWS_AS(coherent_state(CoherentParams{{Complex(1.0, 0.0)}}, space),
                        std::runtime_error);
    }
}

TEST_CASE("operator storage contracts") {
    TruncatedFockSpace space({2});

    SECTION("diagonal accessors") {
        Eigen::VectorXd d(3);
        d << 1.0, 2.0, 3.0;
        const auto op = HermitianOperator::diagonal(space, d);
        CHECK(op.is_diagonal());
        CHECK(op.max_abs() == 3.0);
        CHECK_THROWS_AS(op.dense_matrix(), std::logic_error);
        CHECK_THROWS_AS(op.exact_diagonal(), std::logic_error);
        CHECK(op.to_dense()(1, 1) == Complex(2.0, 0.0));
        CHECK_THROWS_AS(HermitianOperator::diagonal(space, Eigen::VectorXd::Zero(2)),
                        std::invalid_argument);
    }

    SECTION("exact diagonals keep the integers") {
        const auto op = HermitianOperator::diagonal_exact(space, {BigInt(4), BigInt(0), BigInt(1)});
        CHECK(op.has_exact_diagonal());
        CHECK(op.exact_diagonal()[1] == 0);
        CHECK(op.diagonal_values()[0] == 4.0);
        CHECK_THROWS_AS(
            HermitianOperator::diagonal_exact(space, {BigInt("1" + std::string(400, '0')),
                                                      BigInt(0), BigInt(0)}),
            std::overflow_error);
    }

    SECTION("dense storage demands Hermiticity") {
        Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(3, 3);
        bad(0, 1) = Complex(1.0, 0.0);  // missing conjugate partner
        CHECK_THROWS_AS(HermitianOperator::dense(space, bad), std::invalid_argument);

        Eigen::MatrixXcd good = Eigen::MatrixXcd::Zero(3, 3);
        good(0, 1) = Complex(0.0, 1.0);
        good(1, 0) = Complex(0.0, -1.0);
        const auto op = HermitianOperator::dense(space, good);
        CHECK_FALSE(op.is_diagonal());
        CHECK_THROWS_AS(op.diagonal_values(), std::logic_error);
        CHECK(op.max_abs() == 1.0);
        CHECK_THROWS_AS(HermitianOperator::dense(space, Eigen::MatrixXcd::Zero(2, 2)),
                        std::invalid_argument);
    }

    SECTION("apply multiplies by the matrix") {
        Eigen::VectorXd d(3);
        d << 1.0, 2.0, 3.0;
        const auto op = HermitianOperator::diagonal(space, d);
        Eigen::VectorXcd v(3);
        v << 1.0, 1.0, 1.0;
        const Eigen::VectorXcd out = op.apply(v);
        CHECK(out[2] == Complex(3.0, 0.0));
        CHECK_THROWS_AS(op.apply(Eigen::VectorXcd::Zero(2)), std::invalid_argument);
    }
}

TEST_CASE("state vector invariants") {
    TruncatedFockSpace space({3});

    SECTION("normalization is required and then enforced exactly") {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
        v[0] = Complex(1.0 + 5e-7, 0.0);  // within tolerance, renormalized
        const StateVector psi(space, v);
        CHECK(psi.norm() == Catch::Approx(1.0).margin(1e-15));

        Eigen::VectorXcd bad = Eigen::VectorXcd::Zero(4);
        bad[0] = Complex(0.5, 0.0);
        CHECK_THROWS_AS(StateVector(space, bad), std::invalid_argument);
        CHECK_THROWS_AS(StateVector(space, Eigen::VectorXcd::Zero(3)), std::invalid_argument);
    }

    SECTION("basis states") {
        const auto psi = StateVector::basis_state(space, {2});
        CHECK(psi.amplitudes()[2] == Complex(1.0, 0.0));
        CHECK(psi.amplitudes()[0] == Complex(0.0, 0.0));
        CHECK_THROWS_AS(StateVector::basis_state(space, {4}), std::out_of_range);
    }
}
