#include <doctest.h>

#include "fil/nodes.hpp"

#include <cmath>

using namespace fil;

TEST_CASE("check_decay envelope") {
    auto r0 = check_decay(Perturbation::zero(), 0.01, 0.25, 200);
    CHECK(r0.admissible);
    CHECK(r0.max_ratio == 0.0);

    auto r1 = check_decay(Perturbation::power(0.01, 1.5), 0.02, 0.25, 500);
    CHECK(r1.admissible); // envelope holds termwise by construction

    std::vector<double> alt(300);
    for (size_t n = 0; n < alt.size(); ++n) alt[n] = (n % 2 ? -1.0 : 1.0) / (1.0 + n);
    auto r2 = check_decay(Perturbation::explicit_list(alt), 1.0, 0.25, 299);
    CHECK_FALSE(r2.admissible);
    CHECK(r2.worst_index == 299); // ratio (1+n)^{1/4} grows
}

TEST_CASE("classify_pair reproduces the a^2/2 limits") {
    auto seq = [](double a, long n) {
        std::vector<double> s(static_cast<size_t>(n));
        for (long i = 0; i < n; ++i) s[static_cast<size_t>(i)] = a * std::sqrt(static_cast<double>(i + 1));
        return s;
    };
    long W = 4000;
    auto sup9 = classify_pair(seq(0.9, W + 2), seq(0.9, W + 2), 2, 2, W);
    CHECK(sup9.verdict == Criticality::Supercritical);
    CHECK(sup9.tail_sup == doctest::Approx(0.405).epsilon(1e-3));

    auto crit = classify_pair(seq(1.0, W + 2), seq(1.0, W + 2), 2, 2, W);
    CHECK(crit.verdict == Criticality::Indeterminate);
    CHECK(crit.tail_sup == doctest::Approx(0.5).epsilon(1e-3));

    auto sub = classify_pair(seq(1.2, W + 2), seq(1.2, W + 2), 2, 2, W);
    CHECK(sub.verdict == Criticality::Subcritical);
    CHECK(sub.tail_inf == doctest::Approx(0.72).epsilon(1e-3));
}

TEST_CASE("classify_pair scale consistency at p = 2") {
    std::vector<double> xs, ys;
    for (long i = 1; i <= 900; ++i) {
        xs.push_back(std::sqrt(static_cast<double>(i)) + 0.1 * std::log(1.0 + i));
        ys.push_back(std::sqrt(static_cast<double>(i)));
    }
    auto base = classify_pair(xs, xs, 2, 2, 800);
    std::vector<double> sx = xs;
    for (auto& v : sx) v *= 1.7;
    auto scaled = classify_pair(sx, sx, 2, 2, 800);
    CHECK(scaled.tail_sup == doctest::Approx(1.7 * 1.7 * base.tail_sup).epsilon(1e-12));
    CHECK(scaled.tail_inf == doctest::Approx(1.7 * 1.7 * base.tail_inf).epsilon(1e-12));
}

TEST_CASE("classify_pair rejects non-monotone input") {
    std::vector<double> bad = {0.0, 1.0, 0.5, 2.0};
    std::vector<double> good = {0.0, 1.0, 2.0, 3.0};
    CHECK_THROWS_AS(classify_pair(bad, good, 2, 2, 3), std::invalid_argument);
}

TEST_CASE("match_nodes on exact nodes is the identity with zero perturbation") {
    std::vector<double> xs;
    for (long m = 0; m <= 400; ++m) xs.push_back(std::sqrt(static_cast<double>(m)));
    auto r = match_nodes(xs, 4.0, 1.0);
    REQUIRE(!r.matches.empty());
    for (size_t i = 0; i < r.matches.size(); ++i) {
        long n = r.n_lo + static_cast<long>(i);
        CHECK(r.matches[i].m == n);
        CHECK(r.matches[i].eps == 0.0);
    }
    CHECK(r.max_ratio == 0.0);
    CHECK(r.admissible);
}

TEST_CASE("match_nodes on a dense grid") {
    std::vector<double> xs;
    for (long i = 0; i <= 3000; ++i) xs.push_back(0.01 * static_cast<double>(i));
    auto r = match_nodes(xs, 4.0, 1.0);
    for (size_t i = 0; i < r.matches.size(); ++i) {
        long n = r.n_lo + static_cast<long>(i);
        double root = std::sqrt(static_cast<double>(n));
        // |eps| = |x_m^2 - n| <= 2 * 0.01 * sqrt(n) + 0.0001
        CHECK(std::fabs(r.matches[i].eps) <= 2.0 * 0.01 * root + 1e-4 + 1e-12);
        // algebraic identity x_m = sqrt(n + eps)
        double xm = xs[static_cast<size_t>(r.matches[i].m)];
        CHECK(xm == doctest::Approx(std::sqrt(n + r.matches[i].eps)).epsilon(1e-14));
        // interval containment with lower tie
        CHECK(xm <= root);
        CHECK(root < xs[static_cast<size_t>(r.matches[i].m + 1)]);
    }
}

TEST_CASE("match_nodes flags subthreshold D as inadmissible") {
    std::vector<double> xs;
    for (long i = 0; i <= 2000; ++i) xs.push_back(0.02 * static_cast<double>(i));
    auto r = match_nodes(xs, 3.0, 1.0); // D = 3 < 7/2
    CHECK(r.delta_derived < 0.0);
    CHECK_FALSE(r.admissible);
}

TEST_CASE("perturbation parsing and JSON round trip") {
    auto p = Perturbation::parse("power:0.01,1.5");
    CHECK(p.eps(0) == doctest::Approx(0.01));
    CHECK(p.eps(3) == doctest::Approx(0.01 * std::pow(4.0, -1.5)));
    auto e = Perturbation::parse("exp:0.001,2");
    CHECK(e.eps(2) == doctest::Approx(0.001 * std::exp(-4.0)));
    CHECK(Perturbation::parse("zero").is_zero());
    CHECK_THROWS_AS(Perturbation::parse("nope:1"), std::invalid_argument);

    auto back = Perturbation::from_json(p.to_json());
    CHECK(back.eps(7) == p.eps(7));

    NodePlan plan;
    plan.eps = p;
    plan.delta = e;
    plan.N = 16;
    plan.weight_descriptor = "s=5";
    auto plan2 = NodePlan::from_json(plan.to_json());
    CHECK(plan2.N == 16);
    CHECK(plan2.x(5) == plan.x(5));
    CHECK(plan2.y(5) == plan.y(5));
}

TEST_CASE("node plan square roots") {
    NodePlan plan;
    plan.eps = Perturbation::power(0.01, 1.5);
    plan.delta = Perturbation::zero();
    plan.N = 8;
    CHECK(plan.x(0) == doctest::Approx(std::sqrt(0.01)));
    CHECK(plan.y(0) == 0.0);
    CHECK(plan.x(4) == doctest::Approx(std::sqrt(4.0 + 0.01 * std::pow(5.0, -1.5))));

    NodePlan bad;
    bad.eps = Perturbation::explicit_list({-1.0});
    CHECK_THROWS_AS(bad.x(0), std::domain_error);
}
