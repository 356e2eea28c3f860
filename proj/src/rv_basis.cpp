#include "fil/rv_basis.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <thread>

namespace fil {

// ---------------------------------------------------------------- helpers

double sin_pi(double u) {
    double r = std::remainder(u, 2.0);
    if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
    return std::sin(M_PI * r);
}

double sinc_pi(double u) {
    if (u == 0.0) return 1.0;
    return sin_pi(u) / (M_PI * u);
}

std::complex<double> sin_pi(std::complex<double> u) {
    double r = std::remainder(u.real(), 2.0);
    if (u.imag() == 0.0 && (r == 0.0 || r == 1.0 || r == -1.0)) return {0.0, 0.0};
    return std::sin(std::complex<double>(M_PI * r, M_PI * u.imag()));
}

std::complex<double> sinc_pi(std::complex<double> u) {
    if (std::abs(u) < 1e-8) {
        std::complex<double> pu = M_PI * u;
        return 1.0 - pu * pu / 6.0;
    }
    return sin_pi(u) / (M_PI * u);
}

namespace {

// phi(u) = (1 - e^{-pi u}) / (pi u), phi(0) = 1
double phi_fn(double u) {
    if (u == 0.0) return 1.0;
    return -std::expm1(-M_PI * u) / (M_PI * u);
}

std::complex<double> phi_fn(std::complex<double> u) {
    if (std::abs(u) < 1e-6) {
        std::complex<double> pu = M_PI * u;
        return 1.0 - pu / 2.0 + pu * pu / 6.0;
    }
    return (1.0 - std::exp(-M_PI * u)) / (M_PI * u);
}

double log_abs_rational(const Rational& r) {
    if (r == 0) return -std::numeric_limits<double>::infinity();
    long en = 0, ed = 0;
    double mn = mpz_get_d_2exp(&en, r.get_num().get_mpz_t());
    double md = mpz_get_d_2exp(&ed, r.get_den().get_mpz_t());
    return std::log(std::fabs(mn)) - std::log(std::fabs(md)) +
           static_cast<double>(en - ed) * M_LN2;
}

template <typename Real>
std::vector<Real> poly_to(const RationalPolynomial& p) {
    std::vector<Real> v(p.coeffs.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<Real>(p.coeffs[i].get_d());
    return v;
}

template <typename Real>
std::complex<Real> eval_gn_t(const GnForm& g, const std::vector<Real>& poly_coeffs,
                             std::complex<Real> z) {
    if (g.n == 0 && g.sign < 0) return {Real(0), Real(0)};
    auto tr = detail::eval_theta_triple<Real>(z);
    // theta ratios keep the +-1 cusp region finite: theta_3 underflows there
    // while theta_2, theta_4 stay O(1), so u and V vanish with it instead of
    // tripping 0 * inf through lambda
    auto pow4 = [](std::complex<Real> w) {
        w *= w;
        w *= w;
        return w;
    };
    std::complex<Real> r32 = pow4(tr.t3 / tr.t2);
    std::complex<Real> r34 = pow4(tr.t3 / tr.t4);
    std::complex<Real> u = Real(16) * r32 * r34; // 1/J = 16 Theta_3^8 / (Theta_2^4 Theta_4^4)
    std::complex<Real> th3 = tr.t3 * tr.t3 * tr.t3;
    if (g.sign > 0) {
        std::complex<Real> acc(0);
        for (size_t i = poly_coeffs.size(); i-- > 0;) acc = acc * u + poly_coeffs[i];
        return th3 * acc;
    }
    // minus family: g = theta^3 (1-2 lambda) P(u) with P(0) = 0. Writing
    // P(u) = u Q(u) and (1-2 lambda)/J = 16(Theta_3^4/Theta_2^4 -
    // Theta_3^4/Theta_4^4) =: V gives g = theta^3 V Q(u), finite at the cusps.
    std::complex<Real> V = Real(16) * (r32 - r34);
    std::complex<Real> q(0);
    for (size_t i = poly_coeffs.size(); i-- > 1;) q = q * u + poly_coeffs[i];
    return th3 * V * q;
}

mpfr_prec_t mp_precision_for(long n) {
    long bits = static_cast<long>(std::ceil(4.6 * static_cast<double>(n + 2))) + 192;
    return static_cast<mpfr_prec_t>(((bits + 63) / 64) * 64);
}

// smallest k with |c_k| e^{-pi k} below e^{pi n - budget}, from the
// coefficient envelope |c_k| ~ e^{2 pi sqrt(n k)}
long kmax_for(long n, double budget_nats) {
    double sn = std::sqrt(static_cast<double>(std::max(n, 1L)));
    double root = sn + std::sqrt(static_cast<double>(n) + budget_nats / M_PI + 10.0);
    return static_cast<long>(std::ceil(root * root)) + 8;
}

// composite GL grid on [0,1]: `panels` uniform panels, `nodes` points each
void build_ray_grid(int panels, int nodes, std::vector<double>& ts, std::vector<double>& ws) {
    std::vector<double> gx, gw;
    gauss_legendre(nodes, gx, gw);
    ts.clear();
    ws.clear();
    for (int p = 0; p < panels; ++p) {
        double a = static_cast<double>(p) / panels, b = static_cast<double>(p + 1) / panels;
        for (int i = 0; i < nodes; ++i) {
            ts.push_back(0.5 * (a + b) + 0.5 * (b - a) * gx[static_cast<size_t>(i)]);
            ws.push_back(0.5 * (b - a) * gw[static_cast<size_t>(i)]);
        }
    }
}

// g_n(1 + i t) in MPFR real arithmetic via the form route:
// theta(1+it) = Theta_4(it), lambda(1+it) = -(Theta_2(it)/Theta_4(it))^4
MpReal g_on_ray_mp(const GnForm& form, const std::vector<MpReal>& poly_mp, const MpReal& t,
                   mpfr_prec_t prec) {
    MpReal th2 = theta_iy(2, t);
    MpReal th4 = theta_iy(4, t);
    MpReal r = th2 / th4;
    r *= r;
    r *= r;
    MpReal lam = -r;
    MpReal J = lam * (MpReal(1.0, prec) - lam) / MpReal(16.0, prec);
    MpReal u = MpReal(1.0, prec) / J;
    MpReal acc(0.0, prec);
    for (size_t i = poly_mp.size(); i-- > 0;) acc = acc * u + poly_mp[i];
    MpReal g = th4 * th4 * th4 * acc;
    if (form.sign < 0) g *= MpReal(1.0, prec) - MpReal(2.0, prec) * lam;
    return g;
}

} // namespace

// ---------------------------------------------------------------- build_gn

GnForm build_gn(long n, int sign, long order) {
    if (n < 0) throw std::invalid_argument("build_gn: n >= 0 required");
    if (sign != 1 && sign != -1) throw std::invalid_argument("build_gn: sign must be +-1");
    if (order < 2) throw std::invalid_argument("build_gn: order >= 2 required");

    GnForm out;
    out.n = n;
    out.sign = sign;

    if (n == 0 && sign < 0) {
        // P_0^- = 0 is the only degree-0 polynomial with P(0) = 0; b_0^- == 0
        out.poly = RationalPolynomial{{}, false};
        out.series = HalfQSeries(order);
        return out;
    }

    long base = order + n + 6;
    HalfQSeries th3 = series_pow(theta_series(3, base), 3).truncated(base);
    HalfQSeries U = th3;
    if (sign < 0) {
        HalfQSeries lam = lambda_series(base);
        U = (th3 * (series_const(1, base) - lam * Rational(2))).truncated(base);
    }
    HalfQSeries invJ = series_invert(j_series(base));

    // B_k = U (1/J)^k, valuation -k with unit leading coefficient
    std::vector<HalfQSeries> B;
    B.reserve(static_cast<size_t>(n + 1));
    B.push_back(U);
    for (long k = 1; k <= n; ++k) B.push_back(B.back() * invJ);

    std::vector<Rational> c(static_cast<size_t>(n + 1));
    c[static_cast<size_t>(n)] = 1;
    long lowest = (sign > 0) ? 0 : 1; // minus family: P(0) = 0, constant term forced
    for (long j = n - 1; j >= lowest; --j) {
        if (B[static_cast<size_t>(j)].coeff(-j) != 1)
            throw std::runtime_error("build_gn: singular normalization system");
        Rational s(0);
        for (long k = j + 1; k <= n; ++k)
            s += c[static_cast<size_t>(k)] * B[static_cast<size_t>(k)].coeff(-j);
        c[static_cast<size_t>(j)] = -s;
    }

    HalfQSeries series(base - n - 1);
    for (long k = 0; k <= n; ++k)
        if (c[static_cast<size_t>(k)] != 0)
            series = series + B[static_cast<size_t>(k)] * c[static_cast<size_t>(k)];
    out.series = series.truncated(order);
    out.poly.coeffs = std::move(c);
    out.poly.monic = true;
    out.poly.assert_invariants();

    if (n >= 1) {
        if (out.series.coeff(-n) != 1)
            throw std::runtime_error("build_gn: principal part does not start with w^-n");
        for (long j = 1; j < n; ++j)
            if (out.series.coeff(-j) != 0)
                throw std::runtime_error("build_gn: middle principal coefficients not zeroed");
        if (sign > 0 && out.series.coeff(0) != 0)
            throw std::runtime_error("build_gn: plus-family constant term not zeroed");
    }
    return out;
}

std::complex<double> eval_gn(const GnForm& g, std::complex<double> z) {
    return eval_gn_t<double>(g, poly_to<double>(g.poly), z);
}

std::complex<long double> eval_gn_ext(const GnForm& g, std::complex<long double> z) {
    return eval_gn_t<long double>(g, poly_to<long double>(g.poly), z);
}

std::complex<double> eval_gn_generating(long n, int sign, std::complex<double> z,
                                        double t_height, int trapezoid_points) {
    if (n < 0 || (sign != 1 && sign != -1))
        throw std::invalid_argument("eval_gn_generating: bad n/sign");
    auto trz = detail::eval_theta_triple<double>(z);
    std::complex<double> lamz = trz.t2 / trz.t3;
    lamz *= lamz;
    lamz *= lamz;
    std::complex<double> Jz = lamz * (1.0 - lamz) / 16.0;
    std::complex<double> th3z = trz.t3 * trz.t3 * trz.t3;

    const int M = trapezoid_points;
    std::complex<double> acc(0.0);
    for (int j = 0; j < M; ++j) {
        double t = -1.0 + 2.0 * j / M;
        std::complex<double> tau(t, t_height);
        auto trt = detail::eval_theta_triple<double>(tau);
        std::complex<double> lamt = trt.t2 / trt.t3;
        lamt *= lamt;
        lamt *= lamt;
        std::complex<double> Jt = lamt * (1.0 - lamt) / 16.0;
        if (std::abs(Jt) >= std::abs(Jz))
            throw std::runtime_error("eval_gn_generating: T_height too small, |J(tau)/J(z)| >= 1");
        std::complex<double> kernel;
        if (sign > 0)
            kernel = trt.t3 * (1.0 - 2.0 * lamt) * th3z * Jz / (Jz - Jt);
        else
            kernel = trt.t3 * th3z * (1.0 - 2.0 * lamz) * Jt / (Jz - Jt);
        acc += kernel * std::exp(std::complex<double>(0.0, -M_PI * static_cast<double>(n)) * tau);
    }
    return acc / static_cast<double>(M);
}

// ---------------------------------------------------------------- context

struct BasisContext::Entry {
    GnForm form;
    bool zero = false;
    double c0 = 0.0; // constant coefficient (exact small integer)
    std::vector<std::pair<long, double>> principal; // (exponent j <= 0, c_j)

    std::vector<double> poly_d;
    std::vector<long double> poly_ld;

    // long expansion: ck[k-1] = coefficient of w^k, k >= 1
    std::vector<Rational> ck;
    std::vector<double> logck;
    std::vector<int> sgnck;

    bool ray_d_ready = false;
    std::vector<double> ray_t_d, ray_w_d, ray_g_d;

    mpfr_prec_t prec = 0;
    std::vector<MpReal> ray_t_mp, ray_w_mp, ray_tail0_mp;
    std::vector<MpReal> ck_mp;
    std::unique_ptr<MpReal> e_minus_pi;
};

BasisContext::BasisContext(long n_max, QuadParams qp, bool extended)
    : n_max_(n_max), qp_(qp), extended_(extended) {
    if (n_max < 0 || n_max > 128)
        throw std::invalid_argument("BasisContext: n_max in [0,128] required");
}

BasisContext::~BasisContext() = default;

const HalfQSeries& BasisContext::inv_j_pow(long k, long order) {
    // caller holds mu_
    if (order > ladder_order_ || ladder_.empty()) {
        ladder_.clear();
        ladder_order_ = order;
        ladder_.push_back(series_const(1, order));
        ladder_.push_back(series_invert(j_series(order + 2)));
    }
    while (static_cast<long>(ladder_.size()) <= k) ladder_.push_back(ladder_.back() * ladder_[1]);
    return ladder_[static_cast<size_t>(k)];
}

BasisContext::Entry& BasisContext::entry(long n, int sign) {
    std::lock_guard<std::mutex> lk(mu_);
    auto key = std::make_pair(n, sign);
    auto it = entries_.find(key);
    if (it != entries_.end()) return *it->second;
    if (n > n_max_)
        throw std::out_of_range("BasisContext: n beyond n_max; rebuild the context with a larger n_max");
    auto e = std::make_unique<Entry>();
    e->form = build_gn(n, sign, 8);
    e->zero = (n == 0 && sign < 0);
    if (!e->zero) {
        e->c0 = e->form.series.coeff(0).get_d();
        if (n >= 1) {
            e->principal.emplace_back(-n, 1.0);
            e->principal.emplace_back(0, e->c0);
        } else {
            e->principal.emplace_back(0, e->c0); // theta^3: c0 = 1
        }
        e->poly_d = poly_to<double>(e->form.poly);
        e->poly_ld = poly_to<long double>(e->form.poly);
    }
    auto& ref = *e;
    entries_[key] = std::move(e);
    return ref;
}

const GnForm& BasisContext::form(long n, int sign) { return entry(n, sign).form; }

void BasisContext::ensure_long_series(Entry& e, long kmax) {
    if (e.zero) return;
    if (static_cast<long>(e.ck.size()) >= kmax) return;
    std::lock_guard<std::mutex> lk(mu_); // ladder is shared
    if (static_cast<long>(e.ck.size()) >= kmax) return;
    long n = e.form.n;
    long order = kmax + 2;
    inv_j_pow(n, order + n + 2);
    HalfQSeries V(order + 2);
    for (long k = 0; k <= n; ++k) {
        const Rational& pk = e.form.poly.coeffs[static_cast<size_t>(k)];
        if (pk != 0) V = V + ladder_[static_cast<size_t>(k)] * pk;
    }
    long base = ladder_order_;
    HalfQSeries th3 = series_pow(theta_series(3, base), 3).truncated(base);
    HalfQSeries U = th3;
    if (e.form.sign < 0) {
        HalfQSeries lam = lambda_series(base);
        U = (th3 * (series_const(1, base) - lam * Rational(2))).truncated(base);
    }
    HalfQSeries g_long = U * V;
    long have = g_long.order() - 1;
    if (have < kmax)
        throw std::runtime_error("BasisContext: long expansion shorter than requested; rebuild with higher order");
    e.ck.clear();
    e.logck.clear();
    e.sgnck.clear();
    e.ck.reserve(static_cast<size_t>(kmax));
    for (long k = 1; k <= kmax; ++k) {
        Rational c = g_long.coeff(k);
        e.logck.push_back(log_abs_rational(c));
        e.sgnck.push_back(sgn(c));
        e.ck.push_back(std::move(c));
    }
    e.ck_mp.clear(); // stale in length now
}

void BasisContext::ensure_ray_cache_double(Entry& e) {
    if (e.ray_d_ready || e.zero) return;
    long n = e.form.n;
    int panels = std::max(qp_.ray_panels, static_cast<int>(std::min(24L, n / 4)));
    build_ray_grid(panels, qp_.ray_nodes, e.ray_t_d, e.ray_w_d);
    e.ray_g_d.resize(e.ray_t_d.size());
    for (size_t i = 0; i < e.ray_t_d.size(); ++i) {
        std::complex<double> g = eval_gn_t<double>(e.form, e.poly_d, {1.0, e.ray_t_d[i]});
        e.ray_g_d[i] = g.real(); // g_n(1+it) is real
    }
    e.ray_d_ready = true;
}

void BasisContext::ensure_ray_cache_mp(Entry& e) {
    if (e.zero) return;
    mpfr_prec_t prec = mp_precision_for(e.form.n);
    if (e.prec == prec && !e.ray_tail0_mp.empty() && !e.ck_mp.empty()) return;
    long n = e.form.n;
    long kmax = kmax_for(n, 0.6931 * static_cast<double>(prec) + 40.0);
    ensure_long_series(e, kmax);
    e.prec = prec;

    std::vector<MpReal> poly_mp;
    poly_mp.reserve(e.form.poly.coeffs.size());
    for (const auto& c : e.form.poly.coeffs) poly_mp.emplace_back(c, prec);

    int panels = std::max(8, static_cast<int>(n));
    int nodes = qp_.ray_mp_nodes;
    std::vector<MpReal> gx, gw;
    gauss_legendre_mp(nodes, prec, gx, gw);
    e.ray_t_mp.clear();
    e.ray_w_mp.clear();
    e.ray_tail0_mp.clear();
    MpReal pi = MpReal::pi(prec);
    for (int p = 0; p < panels; ++p) {
        MpReal a = MpReal(static_cast<long>(p), prec) / static_cast<long>(panels);
        MpReal b = MpReal(static_cast<long>(p + 1), prec) / static_cast<long>(panels);
        MpReal mid = (a + b) / 2L, half = (b - a) / 2L;
        for (int i = 0; i < nodes; ++i) {
            MpReal t = mid + half * gx[static_cast<size_t>(i)];
            MpReal w = half * gw[static_cast<size_t>(i)];
            MpReal g = g_on_ray_mp(e.form, poly_mp, t, prec);
            MpReal principal(0.0, prec);
            for (const auto& [j, cj] : e.principal) {
                if (cj == 0.0) continue;
                MpReal term = exp(pi * t * static_cast<long>(-j)) * cj;
                if (std::labs(j) % 2 == 1) term = -term;
                principal += term;
            }
            e.ray_t_mp.push_back(t);
            e.ray_w_mp.push_back(w);
            e.ray_tail0_mp.push_back(g - principal);
        }
    }
    e.ck_mp.clear();
    e.ck_mp.reserve(e.ck.size());
    for (const auto& c : e.ck) e.ck_mp.emplace_back(c, prec);
    e.e_minus_pi = std::make_unique<MpReal>(exp(-pi));
}

MpReal BasisContext::ray_integral_mp(Entry& e, const MpReal& X, mpfr_prec_t prec) {
    MpReal pi = MpReal::pi(prec);
    long n = e.form.n;

    // P1 = Int_0^1 tail0(1+it) e^{-pi X t} dt; the cached values are already
    // principal-subtracted, so no closed-form correction enters here
    MpReal p1(0.0, prec);
    for (size_t i = 0; i < e.ray_t_mp.size(); ++i) {
        MpReal wgt = exp(-(pi * X * e.ray_t_mp[i]));
        p1 += e.ray_w_mp[i] * e.ray_tail0_mp[i] * wgt;
    }

    // P3 = sum_{k>=1} c_k (-1)^k e^{-pi(X+k)} / (pi (X+k))
    MpReal p3(0.0, prec);
    MpReal ex = exp(-(pi * X));
    MpReal ek(1.0, prec);
    double Xd = X.to_double();
    double log_thresh = M_PI * (static_cast<double>(n) - Xd) -
                        0.6931 * (static_cast<double>(prec) - 40.0);
    bool tail_resolved = false;
    for (size_t i = 0; i < e.ck_mp.size(); ++i) {
        long k = static_cast<long>(i) + 1;
        ek *= *e.e_minus_pi;
        if (e.sgnck[i] == 0) continue;
        double lt = e.logck[i] - M_PI * (Xd + static_cast<double>(k));
        if (k > n + 4 && lt < log_thresh) {
            tail_resolved = true;
            break;
        }
        MpReal term = e.ck_mp[i] * ek * ex / (pi * (X + static_cast<double>(k)));
        if (k % 2 == 1) term = -term;
        p3 += term;
    }
    if (!tail_resolved && !e.ck_mp.empty()) {
        double lt_last = e.logck.back() - M_PI * (Xd + static_cast<double>(e.ck_mp.size()));
        if (lt_last >= log_thresh)
            throw std::runtime_error("BasisContext: tail series under-resolved; rebuild with higher order");
    }
    return p1 + p3;
}

double BasisContext::bn_split_mp(Entry& e, double X) {
    ensure_ray_cache_mp(e);
    MpReal Xm(X, e.prec);
    MpReal I = ray_integral_mp(e, Xm, e.prec);

    double sinc_part = 0.0;
    for (const auto& [j, cj] : e.principal) sinc_part += cj * sinc_pi(X + static_cast<double>(j));
    return 0.5 * (sinc_part + sin_pi(X) * I.to_double());
}

std::complex<double> BasisContext::bn_split_double(Entry& e, std::complex<double> X) {
    ensure_ray_cache_double(e);
    long n = e.form.n;

    std::complex<double> p1(0.0);
    for (size_t i = 0; i < e.ray_t_d.size(); ++i)
        p1 += e.ray_w_d[i] * e.ray_g_d[i] * std::exp(-M_PI * X * e.ray_t_d[i]);

    std::complex<double> p2(0.0);
    for (const auto& [j, cj] : e.principal) {
        if (cj == 0.0) continue;
        double sgnj = (std::labs(j) % 2 == 1) ? -1.0 : 1.0;
        p2 += cj * sgnj * phi_fn(X + static_cast<double>(j));
    }

    long kmax_est = kmax_for(n, 50.0 + std::max(0.0, M_PI * (static_cast<double>(n) - X.real())));
    ensure_long_series(e, kmax_est);
    std::complex<double> p3(0.0);
    std::complex<double> phase = std::exp(std::complex<double>(0.0, -M_PI * X.imag()));
    for (size_t i = 0; i < e.ck.size(); ++i) {
        long k = static_cast<long>(i) + 1;
        if (e.sgnck[i] == 0) continue;
        double logm = e.logck[i] - M_PI * (X.real() + static_cast<double>(k));
        if (k > n + 4 && logm < -46.0) break;
        double m = static_cast<double>(e.sgnck[i]) * std::exp(logm);
        if (k % 2 == 1) m = -m;
        p3 += m * phase / (M_PI * (X + static_cast<double>(k)));
    }

    std::complex<double> I = p1 - p2 + p3;
    std::complex<double> sinc_part(0.0);
    for (const auto& [j, cj] : e.principal) sinc_part += cj * sinc_pi(X + static_cast<double>(j));
    return 0.5 * (sinc_part + sin_pi(X) * I);
}

std::complex<double> BasisContext::bn(long n, int sign, std::complex<double> x) {
    Entry& e = entry(n, sign);
    if (e.zero) return {0.0, 0.0};
    std::complex<double> X = x * x;
    if (X.real() >= static_cast<double>(n) - 0.25) return bn_split_double(e, X);
    if (X.imag() == 0.0 && X.real() >= 0.0) return {bn_split_mp(e, X.real()), 0.0};
    return bn_contour(n, sign, x);
}

double BasisContext::bn(long n, int sign, double x) {
    Entry& e = entry(n, sign);
    if (e.zero) return 0.0;
    double X = x * x;
    if (X >= static_cast<double>(n) - 0.25) return bn_split_double(e, {X, 0.0}).real();
    return bn_split_mp(e, X);
}

namespace {

template <typename Real>
std::complex<double> contour_quadrature(const GnForm& form, const std::vector<Real>& poly,
                                        std::complex<double> x, int nodes, int levels) {
    using C = std::complex<Real>;
    std::vector<double> gx, gw;
    gauss_legendre(nodes, gx, gw);
    C X(static_cast<Real>(x.real()), static_cast<Real>(x.imag()));
    X *= X;
    const Real pi = static_cast<Real>(M_PIl);
    C ipiX = C(0, 1) * pi * X;

    // dyadic panels toward both endpoints, two GL panels per level; the
    // innermost slice is dropped: the integrand vanishes like e^{-3pi/(4 sin th)}
    std::vector<std::pair<double, double>> panels;
    double lo = M_PI / std::pow(2.0, levels + 1);
    for (int l = levels; l >= 1; --l) {
        double hi = M_PI / std::pow(2.0, l);
        double mid = 0.5 * (lo + hi);
        panels.emplace_back(lo, mid);
        panels.emplace_back(mid, hi);
        lo = hi;
    }
    size_t half = panels.size();
    for (size_t i = 0; i < half; ++i)
        panels.emplace_back(M_PI - panels[i].second, M_PI - panels[i].first);

    C acc(0);
    for (auto [a, b] : panels) {
        for (int i = 0; i < nodes; ++i) {
            Real th = static_cast<Real>(0.5 * (a + b)) +
                      static_cast<Real>(0.5 * (b - a)) * static_cast<Real>(gx[static_cast<size_t>(i)]);
            C z = std::exp(C(0, th));
            C g = eval_gn_t<Real>(form, poly, z);
            C f = g * std::exp(ipiX * z) * C(0, 1) * z;
            acc += static_cast<Real>(0.5 * (b - a) * gw[static_cast<size_t>(i)]) * f;
        }
    }
    // the path runs theta: pi -> 0
    C val = Real(-0.25) * acc;
    return {static_cast<double>(val.real()), static_cast<double>(val.imag())};
}

} // namespace

std::complex<double> BasisContext::bn_contour(long n, int sign, std::complex<double> x,
                                              int extra_nodes) {
    Entry& e = entry(n, sign);
    if (e.zero) return {0.0, 0.0};
    long cap = extended_ ? 32 : 20;
    if (n > cap)
        throw std::runtime_error("bn_contour: n = " + std::to_string(n) +
                                 " exceeds the precision guard (" + std::to_string(cap) +
                                 "); enable extended precision");
    int nodes = qp_.contour_nodes + extra_nodes;
    if (extended_)
        return contour_quadrature<long double>(e.form, e.poly_ld, x, nodes, qp_.contour_levels);
    return contour_quadrature<double>(e.form, e.poly_d, x, nodes, qp_.contour_levels);
}

double BasisContext::bn_tail(long n, int sign, double x) {
    Entry& e = entry(n, sign);
    if (e.zero) return 0.0;
    double X = x * x;
    if (X < static_cast<double>(n))
        throw std::invalid_argument("bn_tail: |x| >= sqrt(n) required");
    ensure_ray_cache_double(e);

    // sin(pi X) Int_0^1 g(1+it) e^{-pi X t} dt + q-expansion remainder from t = 1;
    // sin(pi X) (-1)^k folds into sinc(X + k)
    double p1 = 0.0;
    for (size_t i = 0; i < e.ray_t_d.size(); ++i)
        p1 += e.ray_w_d[i] * e.ray_g_d[i] * std::exp(-M_PI * X * e.ray_t_d[i]);

    ensure_long_series(e, kmax_for(n, 50.0));
    double rem = 0.0;
    for (const auto& [j, cj] : e.principal)
        rem += cj * sinc_pi(X + static_cast<double>(j)) *
               std::exp(-M_PI * (X + static_cast<double>(j)));
    for (size_t i = 0; i < e.ck.size(); ++i) {
        long k = static_cast<long>(i) + 1;
        if (e.sgnck[i] == 0) continue;
        double logm = e.logck[i] - M_PI * (X + static_cast<double>(k));
        if (k > n + 4 && logm < -46.0 - M_PI * (X - static_cast<double>(n))) break;
        rem += static_cast<double>(e.sgnck[i]) * std::exp(logm) *
               sinc_pi(X + static_cast<double>(k));
    }
    return 0.5 * (sin_pi(X) * p1 + rem);
}

// ---------------------------------------------------------------- table

std::optional<size_t> BasisTable::find_real(double x) const {
    for (size_t i = 0; i < real_points.size(); ++i)
        if (real_points[i] == x) return i;
    return std::nullopt;
}

BasisTable tabulate(BasisContext& ctx, long n_max, const std::vector<double>& real_points,
                    const std::vector<std::complex<double>>& complex_points, int jobs) {
    BasisTable t;
    t.n_max = n_max;
    t.real_points = real_points;
    t.complex_points = complex_points;
    t.quad = ctx.quad();
    t.version = kBasisCacheVersion;
    size_t np = t.npoints();
    t.values.assign(static_cast<size_t>(n_max + 1) * 2 * np, {0.0, 0.0});

    std::vector<std::pair<long, int>> pairs;
    for (long n = 0; n <= n_max; ++n)
        for (int s : {+1, -1}) pairs.emplace_back(n, s);

    // write-once slots per (n, sign): deterministic under any schedule
    auto work = [&](size_t lo, size_t hi) {
        for (size_t i = lo; i < hi; ++i) {
            auto [n, sign] = pairs[i];
            size_t row = (static_cast<size_t>(n) * 2 + (sign < 0 ? 1 : 0)) * np;
            for (size_t p = 0; p < np; ++p) {
                std::complex<double> pt = t.point(p);
                t.values[row + p] = (pt.imag() == 0.0)
                                        ? std::complex<double>(ctx.bn(n, sign, pt.real()), 0.0)
                                        : ctx.bn(n, sign, pt);
            }
        }
    };
    int nj = std::max(1, jobs);
    if (nj == 1) {
        work(0, pairs.size());
    } else {
        std::vector<std::thread> pool;
        size_t chunk = (pairs.size() + static_cast<size_t>(nj) - 1) / static_cast<size_t>(nj);
        for (int k = 0; k < nj; ++k) {
            size_t lo = static_cast<size_t>(k) * chunk, hi = std::min(pairs.size(), lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return t;
}

void store_table(const BasisTable& t, const std::string& path) {
    nlohmann::ordered_json h;
    h["version"] = t.version;
    h["n_max"] = t.n_max;
    h["real_points"] = t.real_points;
    auto cp = nlohmann::ordered_json::array();
    for (auto& z : t.complex_points) cp.push_back({z.real(), z.imag()});
    h["complex_points"] = cp;
    h["quad"] = {{"contour_nodes", t.quad.contour_nodes},
                 {"contour_levels", t.quad.contour_levels},
                 {"ray_panels", t.quad.ray_panels},
                 {"ray_nodes", t.quad.ray_nodes},
                 {"ray_mp_nodes", t.quad.ray_mp_nodes},
                 {"t_height", t.quad.t_height},
                 {"trapezoid_points", t.quad.trapezoid_points}};
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("store_table: cannot open " + path);
    f << h.dump() << '\n';
    static_assert(sizeof(std::complex<double>) == 16);
    f.write(reinterpret_cast<const char*>(t.values.data()),
            static_cast<std::streamsize>(t.values.size() * sizeof(std::complex<double>)));
}

BasisTable load_table(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_table: cannot open " + path);
    std::string header;
    std::getline(f, header);
    auto h = nlohmann::json::parse(header);
    BasisTable t;
    t.version = h.at("version").get<std::string>();
    if (t.version != kBasisCacheVersion)
        throw CacheVersionMismatch("basis cache version mismatch (" + t.version +
                                   "): rebuild required");
    t.n_max = h.at("n_max").get<long>();
    t.real_points = h.at("real_points").get<std::vector<double>>();
    for (const auto& p : h.at("complex_points"))
        t.complex_points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    const auto& q = h.at("quad");
    t.quad.contour_nodes = q.at("contour_nodes").get<int>();
    t.quad.contour_levels = q.at("contour_levels").get<int>();
    t.quad.ray_panels = q.at("ray_panels").get<int>();
    t.quad.ray_nodes = q.at("ray_nodes").get<int>();
    t.quad.ray_mp_nodes = q.at("ray_mp_nodes").get<int>();
    t.quad.t_height = q.at("t_height").get<double>();
    t.quad.trapezoid_points = q.at("trapezoid_points").get<int>();
    t.values.resize(static_cast<size_t>(t.n_max + 1) * 2 * t.npoints());
    f.read(reinterpret_cast<char*>(t.values.data()),
           static_cast<std::streamsize>(t.values.size() * sizeof(std::complex<double>)));
    if (!f) throw std::runtime_error("load_table: truncated value block");
    return t;
}

} // namespace fil
