#include <doctest.h>

#include "fil/rv_basis.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>

using namespace fil;
using C = std::complex<double>;

TEST_CASE("g_0^+ is theta^3 and g_0^- vanishes") {
    auto g0 = build_gn(0, +1, 6);
    CHECK(g0.poly.coeffs.size() == 1);
    CHECK(g0.poly.coeffs[0] == 1);
    auto t3 = series_pow(theta_series(3, 6), 3).truncated(6);
    CHECK(g0.series == t3);

    auto g0m = build_gn(0, -1, 6);
    CHECK(g0m.series.is_zero());
    CHECK(eval_gn(g0m, {0.3, 0.9}) == C(0.0, 0.0));
}

TEST_CASE("normalization structure of g_n^+") {
    for (long n : {1L, 2L, 5L, 9L}) {
        auto g = build_gn(n, +1, 4);
        CHECK(g.series.coeff(-n) == 1);
        for (long j = 0; j < n; ++j) CHECK(g.series.coeff(-j) == 0);
        CHECK(g.poly.monic);
        CHECK(g.poly.degree() == n);
        CHECK(g.poly.coeffs[0] != 0); // P_n^+(0) != 0
    }
    // frozen values from the exact construction
    auto g1 = build_gn(1, +1, 4);
    CHECK(g1.series.coeff(1) == 252);
    CHECK(g1.poly.coeffs[0] == -30);
}

TEST_CASE("normalization structure of g_n^-: forced constant = -2 [n square]") {
    for (long n = 1; n <= 12; ++n) {
        auto g = build_gn(n, -1, 4);
        CHECK(g.series.coeff(-n) == 1);
        for (long j = 1; j < n; ++j) CHECK(g.series.coeff(-j) == 0);
        CHECK(g.poly.coeffs[0] == 0); // P_n^-(0) = 0
        CHECK(g.poly.coeffs[1] != 0); // (P_n^-)'(0) != 0
        long r = std::lround(std::sqrt(static_cast<double>(n)));
        bool square = r * r == n;
        CHECK(g.series.coeff(0) == (square ? -2 : 0));
    }
    auto g2 = build_gn(2, -1, 4);
    CHECK(g2.poly.coeffs[1] == -22); // P_2^- = X^2 - 22 X
}

TEST_CASE("exact generating-kernel oracle reproduces both families") {
    // plus: sum_m [w_tau^n](theta(tau)(1-2 lambda(tau)) J(tau)^m) theta^3 (1/J)^m
    // minus: sum_m [w_tau^n](theta(tau) J(tau)^m) theta^3 (1-2 lambda) (1/J)^m
    long order = 6, nmax = 6;
    long base = order + nmax + 8;
    auto th = theta_series(3, base);
    auto th3 = series_pow(th, 3).truncated(base);
    auto lam = lambda_series(base);
    auto one = series_const(1, base);
    auto V = (th * (one - lam * Rational(2))).truncated(base); // theta (1-2 lambda)
    auto U = (th3 * (one - lam * Rational(2))).truncated(base);
    auto J = j_series(base);
    auto invJ = series_invert(J);

    for (long n = 1; n <= nmax; ++n) {
        HalfQSeries plus_kernel(order), minus_kernel(order);
        HalfQSeries Jm = series_const(1, base);
        HalfQSeries invJm = series_const(1, base);
        for (long m = 0; m <= n; ++m) {
            if (m > 0) {
                Jm = (Jm * J).truncated(base);
                invJm = invJm * invJ;
            }
            Rational cp = (V * Jm).truncated(n + 1).coeff(n);
            plus_kernel = plus_kernel + (th3 * invJm * cp).truncated(order);
            if (m >= 1) {
                Rational cm = (th * Jm).truncated(n + 1).coeff(n);
                minus_kernel = minus_kernel + (U * invJm * cm).truncated(order);
            }
        }
        CHECK(plus_kernel == build_gn(n, +1, order).series);
        CHECK(minus_kernel == build_gn(n, -1, order).series);
    }
}

TEST_CASE("the verbatim minus kernel with theta(z) is inconsistent with the delta values") {
    // The extracted text prints the minus generating kernel with theta(z),
    // not theta^3(z), on the z side. That family would be
    // g~_1 = theta (1-2 lambda) / J with constant term -6, forcing
    // a^_1(0) = +3 instead of 1. Resolved empirically: theta^3 is correct.
    long base = 10;
    auto th = theta_series(3, base);
    auto lam = lambda_series(base);
    auto V = (th * (series_const(1, base) - lam * Rational(2))).truncated(base);
    auto candidate = V * series_invert(j_series(base));
    CHECK(candidate.coeff(-1) == 1);
    CHECK(candidate.coeff(0) == -6);
    CHECK(build_gn(1, -1, 4).series.coeff(0) == -2);
}

TEST_CASE("eval_gn at z = i against theta^3") {
    BasisContext ctx(4);
    C th3 = std::pow(eval_theta(3, C(0, 1)), 3.0);
    CHECK(std::abs(eval_gn(ctx.form(0, +1), C(0, 1)) - th3) < 1e-12 * std::abs(th3));
}

TEST_CASE("two-route consistency: polynomial recipe vs generating kernel") {
    const std::vector<C> pts = {{0.0, 1.0},
                                {std::cos(M_PI / 3), std::sin(M_PI / 3)},
                                {0.2, 1.1},
                                {-0.35, 0.95},
                                {0.1, 0.8}};
    for (long n = 0; n <= 10; ++n) {
        for (int sign : {+1, -1}) {
            auto form = build_gn(n, sign, 4);
            for (const C& z : pts) {
                C direct = eval_gn(form, z);
                C gen = eval_gn_generating(n, sign, z, 1.45, 128);
                double scale = std::max({std::abs(direct), std::abs(gen), 1e-4});
                CHECK(std::abs(direct - gen) / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("generating route rejects a too-small segment height") {
    // at T = 0.8, |J(tau)| exceeds |J(i)| = 1/64 on the segment
    CHECK_THROWS_AS(eval_gn_generating(2, +1, C(0, 1), 0.8, 64), std::runtime_error);
}

TEST_CASE("eval_gn near the cusp 1 stays finite and matches high precision") {
    BasisContext ctx(4);
    auto& form = ctx.form(1, +1);
    C v = eval_gn(form, C(1.0, 0.05));
    CHECK(std::isfinite(v.real()));
    // MPFR reference through the same modular identities at 320 bits
    std::vector<MpReal> poly;
    for (auto& c : form.poly.coeffs) poly.emplace_back(c, 320);
    MpReal t(0.05, 320);
    MpReal th2 = theta_iy(2, t), th4 = theta_iy(4, t);
    MpReal r = th2 / th4;
    r *= r;
    r *= r;
    MpReal lam = -r;
    MpReal J = lam * (MpReal(1.0, 320) - lam) / MpReal(16.0, 320);
    MpReal acc(0.0, 320);
    MpReal u = MpReal(1.0, 320) / J;
    for (size_t i = poly.size(); i-- > 0;) acc = acc * u + poly[i];
    MpReal ref = th4 * th4 * th4 * acc;
    CHECK(v.real() == doctest::Approx(ref.to_double()).epsilon(1e-10));
    CHECK(std::abs(v.imag()) < 1e-12 * std::abs(v.real()));
}

TEST_CASE("b_n values at the interpolation nodes") {
    BasisContext ctx(10);
    // b_0^- == 0
    for (double x : {0.0, 0.7, 2.2}) CHECK(ctx.bn(0, -1, x) == 0.0);
    // a_0(0) = 1/2 via self-duality
    CHECK(ctx.bn(0, +1, 0.0) == doctest::Approx(0.5).epsilon(1e-8));
    // a_3(sqrt 2) = 0
    double s2 = std::sqrt(2.0);
    CHECK(std::abs(ctx.bn(3, +1, s2) + ctx.bn(3, -1, s2)) < 1e-7);

    for (long n = 1; n <= 8; ++n)
        for (long m = 1; m <= 8; ++m) {
            double x = std::sqrt(static_cast<double>(m));
            double target = n == m ? 1.0 : 0.0;
            CHECK(std::abs(ctx.an(n, x) - target) < 1e-7);
            CHECK(std::abs(ctx.an_hat(n, x)) < 1e-7);
        }
    // values at 0
    for (long n = 1; n <= 9; ++n) {
        long r = std::lround(std::sqrt(static_cast<double>(n)));
        double sq = (r * r == n) ? 1.0 : 0.0;
        CHECK(std::abs(ctx.an(n, 0.0) + sq) < 1e-7);
        CHECK(std::abs(ctx.an_hat(n, 0.0) - sq) < 1e-7);
    }
}

TEST_CASE("contour, tail and split routes agree off the nodes") {
    BasisContext ctx(8);
    for (long n : {1L, 3L, 5L}) {
        for (int sign : {+1, -1}) {
            for (double dx : {0.5, 2.5, 4.5}) {
                double x = std::sqrt(static_cast<double>(n) + dx);
                double split = ctx.bn(n, sign, x);
                double tail = ctx.bn_tail(n, sign, x);
                C contour = ctx.bn_contour(n, sign, {x, 0.0});
                double scale = std::max(std::fabs(split), 1e-12);
                CHECK(std::fabs(split - tail) / scale < 1e-8);
                CHECK(std::abs(contour - C(split, 0.0)) / scale < 1e-7);
            }
        }
    }
    // x^2 integer beyond n: exactly zero up to quadrature noise
    CHECK(std::fabs(ctx.bn_tail(1, +1, std::sqrt(5.0))) < 1e-14);
    CHECK(std::fabs(ctx.bn_tail(1, +1, 5.0)) < 1e-14);
    // boundary x = sqrt(n) reproduces the half delta
    CHECK(ctx.bn_tail(2, +1, std::sqrt(2.0)) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK_THROWS_AS(ctx.bn_tail(2, +1, 1.0), std::invalid_argument);
}

TEST_CASE("split path is continuous across the dispatch threshold") {
    BasisContext ctx(8);
    for (int sign : {+1, -1}) {
        double lo = ctx.bn(6, sign, std::sqrt(6.0 - 0.2503));
        double hi = ctx.bn(6, sign, std::sqrt(6.0 - 0.2497));
        CHECK(std::fabs(lo - hi) < 2e-4 * std::max(1.0, std::fabs(lo)));
    }
}

TEST_CASE("Fourier eigenfunction property under the e^{-2 pi i x xi} convention") {
    BasisContext ctx(4);
    const double L = 24.0, h = 0.01;
    const long M = static_cast<long>(L / h);
    for (long n : {0L, 1L, 3L}) {
        for (int sign : {+1, -1}) {
            if (n == 0 && sign < 0) continue;
            std::vector<double> vals(static_cast<size_t>(M) + 1);
            for (long i = 0; i <= M; ++i) vals[static_cast<size_t>(i)] = ctx.bn(n, sign, i * h);
            for (double xi : {0.7, 1.35, 2.4}) {
                // f^(xi) = 2 Int_0^L f(x) cos(2 pi x xi) dx for even f, Simpson rule
                double acc = 0.0;
                for (long i = 0; i <= M; ++i) {
                    double wgt = (i == 0 || i == M) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                    acc += wgt * vals[static_cast<size_t>(i)] * std::cos(2.0 * M_PI * i * h * xi);
                }
                double ft = 2.0 * acc * h / 3.0;
                CHECK(std::fabs(ft - sign * ctx.bn(n, sign, xi)) < 1e-5);
            }
        }
    }
}

TEST_CASE("entire extension: complex dispatch matches the contour") {
    BasisContext ctx(6);
    for (const C x : {C(0.9, 0.4), C(0.1, 1.1), C(1.7, -0.3)}) {
        C split_or_contour = ctx.bn(4, +1, x);
        C contour = ctx.bn_contour(4, +1, x, 4);
        double scale = std::max(std::abs(contour), 1e-10);
        CHECK(std::abs(split_or_contour - contour) / scale < 1e-7);
    }
}

TEST_CASE("precision guard on the contour route") {
    BasisContext plain(40);
    CHECK_THROWS_WITH_AS(static_cast<void>(plain.bn_contour(25, +1, {0.5, 0.5})),
                         doctest::Contains("extended"), std::runtime_error);
    BasisContext ext(40, QuadParams{}, true);
    CHECK_NOTHROW(static_cast<void>(ext.bn_contour(25, +1, {0.5, 0.5})));
    CHECK_THROWS_AS(static_cast<void>(ext.bn_contour(33, +1, {0.5, 0.5})), std::runtime_error);
}

TEST_CASE("n beyond the context bound errors with a rebuild hint") {
    BasisContext ctx(4);
    CHECK_THROWS_AS(static_cast<void>(ctx.bn(5, +1, 1.0)), std::out_of_range);
}

TEST_CASE("tabulate determinism and cache round trip") {
    BasisContext ctx(3);
    std::vector<double> xs = {0.0, 1.0, std::sqrt(2.0), 1.7};
    std::vector<C> zs = {{0.4, 0.6}};
    BasisTable t1 = tabulate(ctx, 3, xs, zs, 1);
    BasisTable t4 = tabulate(ctx, 3, xs, zs, 4);
    REQUIRE(t1.values.size() == t4.values.size());
    for (size_t i = 0; i < t1.values.size(); ++i) CHECK(t1.values[i] == t4.values[i]);

    // Kronecker deltas out of the table
    auto p = t1.find_real(1.0);
    REQUIRE(p.has_value());
    CHECK(std::abs(t1.a(1, *p) - 1.0) < 1e-7);
    CHECK(std::abs(t1.a(2, *p)) < 1e-7);

    std::string path = "test_cache.filb";
    store_table(t1, path);
    BasisTable back = load_table(path);
    CHECK(back.n_max == t1.n_max);
    REQUIRE(back.values.size() == t1.values.size());
    for (size_t i = 0; i < t1.values.size(); ++i) CHECK(back.values[i] == t1.values[i]);
    CHECK(back.real_points == t1.real_points);

    // version mismatch reports rebuild
    std::ofstream f(path, std::ios::binary);
    f << "{\"version\":\"fil-basis-cache-v0\",\"n_max\":0,\"real_points\":[],\"complex_points\":[],"
         "\"quad\":{}}\n";
    f.close();
    CHECK_THROWS_AS(load_table(path), CacheVersionMismatch);
    std::remove(path.c_str());

    // empty grid: empty table
    BasisTable empty = tabulate(ctx, 2, {}, {}, 1);
    CHECK(empty.values.empty());
}

TEST_CASE("build_gn contract violations") {
    CHECK_THROWS_AS(build_gn(-1, +1, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_gn(2, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_gn(2, +1, 1), std::invalid_argument);
}
