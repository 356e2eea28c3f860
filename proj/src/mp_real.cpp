#include "fil/mp_real.hpp"

#include <cmath>

namespace fil {

namespace {

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
void legendre_pair(int n, const MpReal& x, MpReal& p, MpReal& dp) {
    mpfr_prec_t prec = x.prec();
    MpReal p0(1.0, prec), p1 = x;
    for (int k = 2; k <= n; ++k) {
        MpReal p2 = (x * p1 * static_cast<long>(2 * k - 1) - p0 * static_cast<long>(k - 1)) / static_cast<long>(k);
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    // P'_n(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    MpReal denom = x * x - MpReal(1.0, prec);
    dp = (x * p1 - p0) * static_cast<long>(n) / denom;
}

} // namespace

void gauss_legendre_mp(int npts, mpfr_prec_t prec, std::vector<MpReal>& nodes, std::vector<MpReal>& weights) {
    nodes.assign(npts, MpReal(prec));
    weights.assign(npts, MpReal(prec));
    int iters = 4 + static_cast<int>(std::ceil(std::log2(static_cast<double>(prec) / 50.0 + 1.0))) * 2;
    for (int i = 0; i < (npts + 1) / 2; ++i) {
        double guess = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
        MpReal x(guess, prec), p(prec), dp(prec);
        for (int it = 0; it < iters; ++it) {
            legendre_pair(npts, x, p, dp);
            x -= p / dp;
        }
        legendre_pair(npts, x, p, dp);
        MpReal w = MpReal(2.0, prec) / ((MpReal(1.0, prec) - x * x) * dp * dp);
        nodes[static_cast<size_t>(npts - 1 - i)] = x;
        weights[static_cast<size_t>(npts - 1 - i)] = w;
        nodes[static_cast<size_t>(i)] = -x;
        weights[static_cast<size_t>(i)] = w;
    }
}

void gauss_legendre(int npts, std::vector<double>& nodes, std::vector<double>& weights) {
    std::vector<MpReal> n_mp, w_mp;
    gauss_legendre_mp(npts, 128, n_mp, w_mp);
    nodes.resize(static_cast<size_t>(npts));
    weights.resize(static_cast<size_t>(npts));
    for (int i = 0; i < npts; ++i) {
        nodes[static_cast<size_t>(i)] = n_mp[static_cast<size_t>(i)].to_double();
        weights[static_cast<size_t>(i)] = w_mp[static_cast<size_t>(i)].to_double();
    }
}

} // namespace fil
