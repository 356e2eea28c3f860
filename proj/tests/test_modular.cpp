#include <doctest.h>

#include "fil/modular.hpp"

#include <cmath>
#include <complex>

using namespace fil;
using C = std::complex<double>;

namespace {
const std::vector<C> kSample = {
    {0.13, 0.41}, {-0.72, 0.9}, {0.35, 1.7}, {1.8, 0.6}, {-0.05, 0.23}, {0.6, 0.35},
};
}

TEST_CASE("reduce_theta_group words") {
    auto w0 = reduce_theta_group(C(0.0, 1.0));
    CHECK(w0.word.empty());
    CHECK(w0.reduced == C(0.0, 1.0));

    auto w1 = reduce_theta_group(C(0.0, 0.25));
    REQUIRE(w1.word.size() == 1);
    CHECK(w1.word[0] == ThetaGen::S);
    CHECK(std::abs(w1.reduced - C(0.0, 4.0)) < 1e-14);

    auto w2 = reduce_theta_group(C(2.3, 0.01));
    CHECK(w2.reduced.imag() >= 0.5);
    CHECK(w2.word.size() <= 64);
    // applying the word to the original point reproduces the reduced point
    CHECK(std::abs(apply_word(w2.word, C(2.3, 0.01)) - w2.reduced) < 1e-12);
    // weight-1/2 automorphy: Theta_3(z) = automorphy * Theta_3(reduced)
    C lhs = eval_theta(3, C(2.3, 0.01));
    C rhs = w2.automorphy * eval_theta(3, w2.reduced);
    CHECK(std::abs(lhs - rhs) / std::abs(lhs) < 1e-10);
}

TEST_CASE("reduction fails near the +-1 cusps and at near-real pathological points") {
    CHECK_THROWS_AS(reduce_theta_group(C(1.0, 1e-6)), ReductionFailure);
    try {
        reduce_theta_group(C(1.0, 1e-6));
    } catch (const ReductionFailure& f) {
        CHECK(f.best_point.imag() > 0);
    }
    CHECK_THROWS_AS(reduce_theta_group(C(0.123456789, 1e-9)), ReductionFailure);
    CHECK_THROWS_AS(reduce_theta_group(C(0.5, -1.0)), std::invalid_argument);
}

TEST_CASE("special values at the fixed point i") {
    CHECK(std::abs(eval_lambda(C(0, 1)) - 0.5) < 1e-13);
    CHECK(std::abs(eval_J(C(0, 1)) - 1.0 / 64) < 1e-14);
    double brute = 1.0;
    for (int n = 1; n <= 40; ++n) brute += 2.0 * std::exp(-M_PI * n * n);
    CHECK(std::abs(eval_theta(3, C(0, 1)) - brute) < 1e-12);
}

TEST_CASE("transformation identities on a compact sample") {
    for (const C& z : kSample) {
        C J1 = eval_J(z);
        CHECK(std::abs(eval_J(z + 2.0) - J1) / std::abs(J1) < 1e-9);
        CHECK(std::abs(eval_J(-1.0 / z) - J1) / std::abs(J1) < 1e-9);
        C lam = eval_lambda(z);
        CHECK(std::abs(eval_lambda(-1.0 / z) - (1.0 - lam)) / std::abs(1.0 - lam) < 1e-9);
        // (-iz)^{-1/2} Theta_3(-1/z) = Theta_3(z)
        C miz(z.imag(), -z.real());
        C lhs = eval_theta(3, -1.0 / z) / std::sqrt(miz);
        C rhs = eval_theta(3, z);
        CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-9);
    }
}

TEST_CASE("cusp asymptotic theta_3(1+it) ~ 2/sqrt(t) e^{-pi/(4t)}") {
    for (double t : {0.02, 0.05, 0.1}) {
        C v = eval_theta(3, C(1.0, t));
        double asym = 2.0 / std::sqrt(t) * std::exp(-M_PI / (4.0 * t));
        CHECK(std::abs(v) / asym == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("theta_iy matches the complex evaluator") {
    for (double y : {0.07, 0.35, 1.0, 2.5, 9.0}) {
        for (int which : {2, 3, 4}) {
            MpReal v = theta_iy(which, MpReal(y, 192));
            C ref = eval_theta(which, C(0.0, y));
            CHECK(std::abs(v.to_double() - ref.real()) < 1e-13 * std::abs(ref.real()));
        }
    }
}

TEST_CASE("extended precision evaluator agrees with double") {
    for (const C& z : kSample) {
        std::complex<long double> zl(z.real(), z.imag());
        auto v = eval_J_ext(zl);
        CHECK(std::abs(C((double)v.real(), (double)v.imag()) - eval_J(z)) < 1e-13);
    }
}
