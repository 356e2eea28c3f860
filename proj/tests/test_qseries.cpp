#include <doctest.h>

#include "fil/qseries.hpp"

#include <random>

using namespace fil;

TEST_CASE("theta series leading terms") {
    auto t3 = theta_series(3, 5);
    CHECK(t3.coeff(0) == 1);
    CHECK(t3.coeff(1) == 2);
    CHECK(t3.coeff(2) == 0);
    CHECK(t3.coeff(3) == 0);
    CHECK(t3.coeff(4) == 2);

    auto t4 = theta_series(4, 5);
    CHECK(t4.coeff(0) == 1);
    CHECK(t4.coeff(1) == -2);
    CHECK(t4.coeff(4) == 2);

    // Theta_2 = w^{1/4} S(w): S has leading coefficient 2 (the w^{1/4} pair
    // convention); support k^2+k = 0, 2, 6, ...
    auto s2 = theta_series(2, 6);
    CHECK(s2.coeff(0) == 2);
    CHECK(s2.coeff(1) == 0);
    CHECK(s2.coeff(2) == 2);
    CHECK(s2.coeff(5) == 0);

    CHECK_THROWS_AS(theta_series(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(theta_series(5, 4), std::invalid_argument);
}

TEST_CASE("lambda expansion 16q^{1/2} - 128q + 704q^{3/2}") {
    auto lam = lambda_series(12);
    CHECK(lam.valuation() == 1);
    CHECK(lam.coeff(1) == 16);
    CHECK(lam.coeff(2) == -128);
    CHECK(lam.coeff(3) == 704);

    // division oracle: lambda * Theta_3^4 == Theta_2^4 exactly
    auto t3_4 = series_pow(theta_series(3, 12), 4).truncated(12);
    auto lhs = (lam * t3_4).truncated(11);
    auto rhs = theta2_fourth(12).truncated(11);
    CHECK(lhs == rhs);
}

TEST_CASE("J expansion q^{1/2} - 24q + O(q^{3/2})") {
    auto J = j_series(10);
    CHECK(J.coeff(1) == 1);
    CHECK(J.coeff(2) == -24);
    CHECK(J.coeff(3) == 300);

    // 16 J == lambda (1 - lambda) exactly to the common order
    auto lam = lambda_series(11);
    auto rhs = (lam * (series_const(1, 11) - lam)).truncated(10);
    CHECK((J * Rational(16)).truncated(10) == rhs);
}

TEST_CASE("series arithmetic basics") {
    // invert(1 + w) = geometric series
    std::vector<Rational> c = {1, 1, 0, 0};
    HalfQSeries a(0, c, 4);
    auto inv = series_invert(a);
    CHECK(inv.coeff(0) == 1);
    CHECK(inv.coeff(1) == -1);
    CHECK(inv.coeff(2) == 1);
    CHECK(inv.coeff(3) == -1);

    auto t3 = theta_series(3, 16);
    auto one = t3 * series_invert(t3);
    CHECK(one.coeff(0) == 1);
    for (long k = 1; k < one.order(); ++k) CHECK(one.coeff(k) == 0);

    auto invJ = series_invert(j_series(10));
    CHECK(invJ.valuation() == -1);
    CHECK(invJ.coeff(-1) == 1);
    CHECK(invJ.coeff(0) == 24);

    CHECK_THROWS_AS(series_invert(HalfQSeries(6)), std::domain_error);
}

TEST_CASE("order bookkeeping never extends knowledge") {
    auto a = theta_series(3, 10);
    auto b = theta_series(4, 7);
    CHECK((a + b).order() == 7);
    CHECK((a * b).order() == 7); // both valuations 0
    auto shifted = b.shifted(3); // valuation 3, order 10
    CHECK((a * shifted).order() == std::min(0 + 10L, 3 + 10L));
    CHECK_THROWS_AS(a.truncated(11), std::invalid_argument);

    // invert: unit part known to (order - 2 val) powers
    auto J = j_series(9); // valuation 1, order 9
    CHECK(series_invert(J).order() == 9 - 2);
}

TEST_CASE("double inversion is the identity on the known window") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> d(-9, 9);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<Rational> c(14);
        c[0] = 1; // unit leading
        for (size_t i = 1; i < c.size(); ++i) c[i] = Rational(d(rng), 1 + (trial % 3));
        long val = (trial % 5) - 2;
        HalfQSeries a(val, c, val + 14);
        auto back = series_invert(series_invert(a));
        CHECK(back == a.truncated(back.order()));
    }
}

TEST_CASE("Jacobi identity holds exactly to order 64") {
    long N = 64;
    auto t3 = series_pow(theta_series(3, N), 4).truncated(N);
    auto t4 = series_pow(theta_series(4, N), 4).truncated(N);
    auto t2 = theta2_fourth(N);
    CHECK((t3 - t2 - t4).is_zero());
}

TEST_CASE("lambda(1-lambda)/16 - J vanishes exactly") {
    auto lam = lambda_series(32);
    auto J = j_series(30);
    auto lhs = (lam * (series_const(1, 32) - lam) * Rational(1, 16)).truncated(30);
    CHECK((lhs - J).is_zero());
}

TEST_CASE("theta, lambda, J coefficients are integers") {
    for (const auto& s : {theta_series(3, 48), theta2_fourth(48), lambda_series(48), j_series(48),
                          series_invert(j_series(48))}) {
        for (long k = s.valuation(); k < s.order(); ++k) CHECK(is_integer(s.coeff(k)));
    }
}

TEST_CASE("1/J(1-1/z) = -4096 q + O(q^2) through the substitution chain") {
    auto s = j_inv_cusp_series(8);
    CHECK(s.valuation() == 2); // q = w^2
    CHECK(s.coeff(2) == -4096);
    CHECK(s.coeff(3) == 0); // O(q^2) means no q^{3/2} term
}

TEST_CASE("JSON round trip with large coefficients") {
    auto s = series_invert(j_series(44)); // coefficients far beyond 2^53
    auto back = halfqseries_from_json(halfqseries_to_json(s));
    CHECK(back == s);
}

TEST_CASE("monic polynomial invariant") {
    RationalPolynomial p{{Rational(3), Rational(1)}, true};
    CHECK_NOTHROW(p.assert_invariants());
    RationalPolynomial bad{{Rational(3), Rational(2)}, true};
    CHECK_THROWS_AS(bad.assert_invariants(), std::logic_error);
    CHECK(p.eval_exact(Rational(2)) == 5);
}
