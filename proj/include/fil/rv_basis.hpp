#pragma once

// Construction of the weakly holomorphic forms g_n^+- = theta^3 [(1-2 lambda)]
// P_n^+-(1/J) with exact rational arithmetic, and evaluation of the Fourier
// +-1 eigenfunctions
//
//     b_n^+-(x) = (1/4) Int_{-1}^{1} g_n^+-(z) e^{i pi x^2 z} dz
//
// over the upper unit semicircle (a_n = b_n^+ + b_n^-, a^_n = b_n^+ - b_n^-).
//
// Evaluation routes:
//  * bn_contour: composite Gauss-Legendre on the semicircle with dyadic
//    endpoint refinement. Valid for any complex x; the integrand reaches
//    e^{pi n} on the arc, so double precision degrades beyond n ~ 20.
//  * bn_tail: the Laplace form sin(pi x^2) Int_0^inf g(1+it) e^{-pi x^2 t} dt,
//    benign for |x| >= sqrt(n).
//  * bn: production dispatch. For Re(x^2) > -1/2 the principal part of g_n is
//    integrated in closed form (sinc terms at the integer exponents) and only
//    the O(q^(1/2)) remainder is integrated along the ray Re z = 1; when
//    Re(x^2) < n the ray integral cancels through e^{pi n} scales and is
//    carried out in MPFR at a precision budget of ~1.45 pi n bits.
//    Deep complex arguments fall back to the contour.

#include "fil/modular.hpp"
#include "fil/mp_real.hpp"
#include "fil/qseries.hpp"

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace fil {

struct GnForm {
    long n = 0;
    int sign = +1; // +1 or -1
    RationalPolynomial poly; // P_n^+-
    HalfQSeries series;      // expansion of g_n^+- to working order
};

// Triangular solve for P_n^+- against the principal-part normalization:
//   plus:  w^-n + 0 w^(-n+1) + ... + 0 w^0 + O(w)
//   minus: w^-n + 0 w^(-n+1) + ... + 0 w^-1 + (forced constant) + O(w),
//          P_n^-(0) = 0, monic.
// The minus constant term cannot be imposed (n-1 free coefficients, it comes
// out of the solve); it equals -2 exactly when n is a perfect square, which
// is what a_n(0) = -1{square} requires.
GnForm build_gn(long n, int sign, long order);

std::complex<double> eval_gn(const GnForm& g, std::complex<double> z);
std::complex<long double> eval_gn_ext(const GnForm& g, std::complex<long double> z);

// Generating-kernel route: g_n(z) = (1/2) Int_{-1+iT}^{1+iT} K(tau,z) e^{-i pi n tau} dtau
// with K_+ = theta(tau)(1-2 lambda(tau)) theta^3(z) J(z) / (J(z)-J(tau)) and
// K_- = theta(tau) theta^3(z)(1-2 lambda(z)) J(tau) / (J(z)-J(tau)).
// Trapezoid rule (integrand 2-periodic in Re tau). Throws when the pole
// condition |J(tau)| < |J(z)| fails on the sampled segment.
std::complex<double> eval_gn_generating(long n, int sign, std::complex<double> z,
                                        double t_height = 1.45, int trapezoid_points = 128);

struct QuadParams {
    int contour_nodes = 12;      // GL nodes per contour panel
    int contour_levels = 6;      // dyadic refinement levels toward theta in {0, pi}
    int ray_panels = 8;          // [0,1] ray panels, double path
    int ray_nodes = 24;          // GL nodes per ray panel, double path
    int ray_mp_nodes = 36;       // GL nodes per ray panel, MPFR path (panel count scales with n)
    double t_height = 1.45;      // generating-route segment height
    int trapezoid_points = 128;
    bool operator==(const QuadParams&) const = default;
};

class BasisContext {
public:
    explicit BasisContext(long n_max, QuadParams qp = {}, bool extended = false);
    ~BasisContext();
    BasisContext(const BasisContext&) = delete;
    BasisContext& operator=(const BasisContext&) = delete;

    long n_max() const { return n_max_; }
    bool extended() const { return extended_; }
    const QuadParams& quad() const { return qp_; }

    const GnForm& form(long n, int sign);

    // Production dispatch (see header comment).
    std::complex<double> bn(long n, int sign, std::complex<double> x);
    double bn(long n, int sign, double x);

    // Raw semicircle quadrature; extra_levels/extra_nodes refine for error estimates.
    std::complex<double> bn_contour(long n, int sign, std::complex<double> x, int extra_nodes = 0);
    // Laplace route, real |x| >= sqrt(n).
    double bn_tail(long n, int sign, double x);

    double an(long n, double x) { return bn(n, +1, x) + bn(n, -1, x); }
    double an_hat(long n, double x) { return bn(n, +1, x) - bn(n, -1, x); }
    std::complex<double> an(long n, std::complex<double> x) { return bn(n, +1, x) + bn(n, -1, x); }
    std::complex<double> an_hat(long n, std::complex<double> x) { return bn(n, +1, x) - bn(n, -1, x); }

private:
    struct Entry;
    Entry& entry(long n, int sign);
    void ensure_long_series(Entry& e, long kmax);
    void ensure_ray_cache_double(Entry& e);
    void ensure_ray_cache_mp(Entry& e);
    const HalfQSeries& inv_j_pow(long k, long order); // shared (1/J)^k ladder

    std::complex<double> bn_split_double(Entry& e, std::complex<double> X);
    double bn_split_mp(Entry& e, double X);
    MpReal ray_integral_mp(Entry& e, const MpReal& X, mpfr_prec_t prec);

    long n_max_;
    QuadParams qp_;
    bool extended_;
    std::mutex mu_;
    std::map<std::pair<long, int>, std::unique_ptr<Entry>> entries_;
    std::vector<HalfQSeries> ladder_; // ladder_[k] = (1/J)^k
    long ladder_order_ = 0;
};

struct BasisTable {
    long n_max = 0;
    std::vector<double> real_points;
    std::vector<std::complex<double>> complex_points;
    QuadParams quad;
    std::string version; // format version tag
    // values[(n*2 + (sign<0))*npoints + p], real points first, then complex
    std::vector<std::complex<double>> values;

    size_t npoints() const { return real_points.size() + complex_points.size(); }
    std::complex<double> b(long n, int sign, size_t p) const {
        return values[(static_cast<size_t>(n) * 2 + (sign < 0 ? 1 : 0)) * npoints() + p];
    }
    std::complex<double> a(long n, size_t p) const { return b(n, +1, p) + b(n, -1, p); }
    std::complex<double> a_hat(long n, size_t p) const { return b(n, +1, p) - b(n, -1, p); }
    std::complex<double> point(size_t p) const {
        return p < real_points.size() ? std::complex<double>(real_points[p], 0.0)
                                      : complex_points[p - real_points.size()];
    }
    // index of a real point stored earlier (exact double match)
    std::optional<size_t> find_real(double x) const;
};

inline constexpr const char* kBasisCacheVersion = "fil-basis-cache-v1";

BasisTable tabulate(BasisContext& ctx, long n_max, const std::vector<double>& real_points,
                    const std::vector<std::complex<double>>& complex_points, int jobs = 1);

class CacheVersionMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void store_table(const BasisTable& t, const std::string& path);
BasisTable load_table(const std::string& path); // CacheVersionMismatch => rebuild required

// sin(pi u) / (pi u) and friends with exact zeros at integer arguments.
double sin_pi(double u);
double sinc_pi(double u);
std::complex<double> sin_pi(std::complex<double> u);
std::complex<double> sinc_pi(std::complex<double> u);

} // namespace fil
