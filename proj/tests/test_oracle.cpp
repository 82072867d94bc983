#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "diosim/oracle.hpp"
#include "diosim/polynomial.hpp"
#include "support.hpp"

using namespace diosim;

namespace {

oracle::SearchBox box1(std::int64_t u) { return oracle::SearchBox{{u}}; }
oracle::SearchBox box2(std::int64_t u) { return oracle::SearchBox{{u, u}}; }

}  // namespace

TEST_CASE("root enumeration over a box") {
    SECTION("quadratic with two roots") {
        const auto p = parse_polynomial("x0^2 - 3*x0 + 2");
        const auto roots = oracle::find_solutions(p, box1(10));
        REQUIRE(roots.size() == 2);
        CHECK(roots[0] == LatticePoint{1});
        CHECK(roots[1] == LatticePoint{2});
    }

    SECTION("no roots over the naturals") {
        CHECK(oracle::find_solutions(parse_polynomial("x0 + 1"), box1(10)).empty());
        CHECK(oracle::find_solutions(parse_polynomial("x0^2 - 2"), box1(50)).empty());
    }

    SECTION("circle solutions arrive lexicographically") {
        const auto p = parse_polynomial("x0^2 + x1^2 - 25");
        const auto roots = oracle::find_solutions(p, box2(10));
        const std::vector<LatticePoint> expected{{0, 5}, {3, 4}, {4, 3}, {5, 0}};
        CHECK(roots == expected);
    }

    SECTION("box must match the variable count") {
        CHECK_THROWS_AS(oracle::find_solutions(parse_polynomial("x0 + x1"), box1(4)),
                        std::invalid_argument);
    }

    SECTION("oversized boxes are refused up front") {
        oracle::SearchBox big{{100000, 100000}};  // ~1e10 points > default 1e8
        CHECK_THROWS_AS(oracle::find_solutions(parse_polynomial("x0 + x1"), big),
                        std::length_error);

        oracle::SearchBox tiny{{3, 3}, 10};  // 16 points but a 10-point budget
        CHECK_THROWS_AS(oracle::find_solutions(parse_polynomial("x0 + x1"), tiny),
                        std::length_error);
    }

    SECTION("degenerate box configurations") {
        CHECK_THROWS_AS(oracle::SearchBox{}.size(), std::invalid_argument);
        CHECK_THROWS_AS(oracle::SearchBox{{-1}}.size(), std::invalid_argument);
        CHECK(oracle::SearchBox{{0, 0}}.size() == 1);
    }
}

TEST_CASE("exact minimum of the squared polynomial") {
    SECTION("zero minimum at the root") {
        const auto m = oracle::min_of_square(parse_polynomial("x0 - 3"), box1(10));
        CHECK(m.min_value == 0);
        REQUIRE(m.argmins.size() == 1);
        CHECK(m.argmins[0] == LatticePoint{3});
    }

    SECTION("positive minimum when no root exists") {
        const auto m = oracle::min_of_square(parse_polynomial("x0^2 - 2"), box1(10));
        CHECK(m.min_value == 1);  // attained at x0 = 1 where x0^2 - 2 = -1
        REQUIRE(m.argmins.size() == 1);
        CHECK(m.argmins[0] == LatticePoint{1});

        const auto m2 = oracle::min_of_square(parse_polynomial("x0 + 1"), box1(10));
        CHECK(m2.min_value == 1);
        CHECK(m2.argmins == std::vector<LatticePoint>{{0}});
    }

    SECTION("all minimizers are reported in lexicographic order") {
        const auto m = oracle::min_of_square(parse_polynomial("x0^2 - 3*x0 + 2"), box1(10));
        CHECK(m.min_value == 0);
        CHECK(m.argmins == std::vector<LatticePoint>{{1}, {2}});

        const auto diag = oracle::min_of_square(parse_polynomial("x0 - x1"), box2(2));
        CHECK(diag.min_value == 0);
        CHECK(diag.argmins == std::vector<LatticePoint>{{0, 0}, {1, 1}, {2, 2}});
    }

    SECTION("values stay exact far beyond double precision") {
        // (10^9 - 3)^2 needs 70 bits; double rounding would merge neighbors
        const auto p = parse_polynomial("x0 - 1000000000");
        const auto m = oracle::min_of_square(p, box1(3));
        CHECK(m.min_value == BigInt("999999994000000009"));
        CHECK(m.argmins == std::vector<LatticePoint>{{3}});
    }
}

TEST_CASE("regularized reference minimum") {
    SECTION("damped shifted sum of x0 - 3 converges to e at the best offset") {
        const auto p = parse_polynomial("x0 - 3");
        const auto m = oracle::regularized_min(p, RegulatorFamily{1.0, 30}, box1(10));
        CHECK(m.exact);
        REQUIRE(m.argmins.size() == 1);
        // at n0 = 2 the shifted values are i - 1, and sum (i-1)^2 / i! = e
        CHECK(m.argmins[0] == LatticePoint{2});
        const Real50 e = boost::multiprecision::exp(Real50(1));
        CHECK(boost::multiprecision::abs(m.value - e) < Real50("1e-12") * e);
    }

    SECTION("constant polynomial reproduces the partial exponential series") {
        const auto one = parse_polynomial("vars=1\n1");
        const auto m = oracle::regularized_min(one, RegulatorFamily{1.0, 30}, box1(0));
        const Real50 e = boost::multiprecision::exp(Real50(1));
        CHECK(boost::multiprecision::abs(m.value - e) < Real50("1e-12") * e);
    }

    SECTION("zero minimum with every attaining row") {
        // shifting x0 never changes x1, so the sum is x1^2 * sum beta_i and
        // vanishes exactly on the x1 = 0 row
        const auto p = parse_polynomial("vars=2\nx1");
        const auto m = oracle::regularized_min(p, RegulatorFamily{1.0, 12}, box2(3));
        CHECK(m.exact);
        CHECK(m.value == 0);
        CHECK(m.argmins == std::vector<LatticePoint>{{0, 0}, {1, 0}, {2, 0}, {3, 0}});
    }

    SECTION("weaker damping can only raise a positive minimum") {
        const auto p = parse_polynomial("x0 - 3");
        const auto strong = oracle::regularized_min(p, RegulatorFamily{1.0, 30}, box1(10));
        const auto weak = oracle::regularized_min(p, RegulatorFamily{0.5, 30}, box1(10));
        CHECK_FALSE(weak.exact);
        CHECK(weak.value >= strong.value);
    }

    SECTION("argument validation") {
        const auto p = parse_polynomial("x0 - 3");
        CHECK_THROWS_AS(oracle::regularized_min(p, RegulatorFamily{1.0, 30}, box1(10), 1),
                        std::out_of_range);
        CHECK_THROWS_AS(oracle::regularized_min(p, RegulatorFamily{0.0, 30}, box1(10)),
                        std::invalid_argument);
        CHECK_THROWS_AS(oracle::regularized_min(p, RegulatorFamily{1.0, 30}, box2(4)),
                        std::invalid_argument);
    }
}

TEST_CASE("random cross-check between the evaluator paths") {
    // find_solutions uses incremental power tables; recompute every value with
    // DiophantinePolynomial::evaluate and compare the root sets.
    std::mt19937_64 rng(0xd108);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = testsupport::random_poly(rng, 2, 3, -6, 6);
        oracle::SearchBox box;
        box.upper.assign(static_cast<std::size_t>(p.num_vars()), 5);
        const auto roots = oracle::find_solutions(p, box);

        std::vector<LatticePoint> direct;
        std::vector<std::int64_t> pt(static_cast<std::size_t>(p.num_vars()), 0);
        while (true) {
            if (p.evaluate(LatticePoint(pt)) == 0) direct.push_back(LatticePoint(pt));
            std::size_t v = pt.size();
            while (v > 0 && pt[v - 1] == 5) pt[--v] = 0;
            if (v == 0) break;
            ++pt[v - 1];
        }
        CAPTURE(p.to_string());
        CHECK(roots == direct);
    }
}
