#pragma once

// Empirical verification of the quantitative claims: the two-regime decay
// envelope for a_n and a_n', entire order/type growth estimates on disks,
// the lower-bound sharpness of b_n^+, and the discrete-Gaussian-decay =>
// entire demonstration at exponentially perturbed nodes.

#include "fil/interpolate.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace fil {

struct EnvelopeFit {
    std::string claim;
    std::map<std::string, double> constants;
    double max_violation = 0.0; // max over the stated grid of (obs - env)/env
    std::string ranges;
    std::string method;
    bool degenerate = false;
};

// Envelope A n^{3/4} log^3(1+n) (e^{-c x^2/n} [x <= Cn] + e^{-c|x|} [x > Cn])
// over |a_n| and |a_n'| (finite differences), n in [n_lo, n_hi], x on x_grid.
// Peaks between consecutive sqrt(m) nodes are extracted first; (c, C) by
// least squares in the log domain, A lifted to cover.
EnvelopeFit decay_fit(BasisContext& ctx, long n_lo, long n_hi, const std::vector<double>& x_grid);

// Pure exponential fit of |a_0| at the inter-node extrema over x_range.
EnvelopeFit a0_rate_fit(BasisContext& ctx, double x_lo, double x_hi);

struct GrowthEstimate {
    std::vector<double> radii;
    std::vector<double> log_max; // log M(r)
    double order = 0.0;          // slope of log log M vs log r (last pair)
    double type = 0.0;           // log M(r_max) / r_max^2
    double growth_slope_r2 = 0.0;
    bool degenerate = false;
    bool overflowed = false;
};

// M(r) over sampled |z| = r for a user-supplied entire function.
GrowthEstimate growth_on_disks(const std::function<std::complex<double>(std::complex<double>)>& fn,
                               const std::vector<double>& radii, int samples_per_circle = 64);

// log M_n(r0) versus n for b_n^+: slope and R^2 of the linear regression.
struct GrowthInN {
    double slope = 0.0;
    double r2 = 0.0;
    std::vector<double> log_max;
};
GrowthInN bn_growth_in_n(BasisContext& ctx, long n_hi, double r0, int samples_per_circle = 32);

// |b_n^+(x)| >= c_n dist(x, sqrt(N)) e^{-c|x|} on [x_lo, x_hi] away from the
// nodes; returns fitted positive (c_n, c) or degenerate for b_0^-.
EnvelopeFit lower_bound_check(BasisContext& ctx, long n, int sign, double x_lo, double x_hi);

struct AnalyticityReport {
    GrowthEstimate growth;
    double gamma_decay_rate = 0.0;     // fitted c with |gamma_{n,k}| <~ e^{c n - c k}
    double convergence_margin = 0.0;   // sum_n e^{(c - alpha) n}
    double max_abs_error = 0.0;        // vs the closed form, for the true-Gaussian case
};

// Synthesizes the complex extension sum f(x_n) h_n(z) + f^(y_n) g_n(z) from
// samples of e^{-alpha' x^2}-type decay at exponentially perturbed nodes and
// reports order/type. Throws when alpha is at or below the fitted coefficient
// decay rate (the alpha >= alpha_0 precondition).
AnalyticityReport analyticity_demo(BasisContext& ctx, const NodePlan& plan, const WeightScheme& w,
                                   const TestFunction& f, double alpha,
                                   const std::vector<double>& radii, int samples_per_circle = 32);

} // namespace fil
