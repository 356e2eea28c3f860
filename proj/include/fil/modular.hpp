#pragma once

// Floating-point evaluation of Theta_2/3/4, lambda and J on the upper
// half-plane. Points are pulled to a region of large imaginary part with the
// transformation identities before the q-series is summed.
//
// Two reduction mechanisms:
//  * reduce_theta_group: words in the Gamma_theta generators {S, T^2, T^-2}.
//    It cannot leave the cusp class, so inputs near the +-1 cusps legitimately
//    fail with the word-length guard.
//  * the evaluators use the full SL2(Z) generators internally, tracking how
//    the theta triple permutes; this also covers the +-1 cusp region, where
//    weakly holomorphic forms still have to be evaluated.
//
// All half-integer powers (-iz)^(-1/2) are principal-branch; Re(-iz) = Im z > 0
// on the upper half-plane, so the branch cut is never crossed.

#include "fil/mp_real.hpp"

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fil {

struct UpperHalfPoint {
    double re = 0.0;
    double im = 1.0;
    UpperHalfPoint() = default;
    UpperHalfPoint(double r, double i) : re(r), im(i) {
        if (!(im > 0)) throw std::invalid_argument("UpperHalfPoint: im > 0 required");
    }
    std::complex<double> z() const { return {re, im}; }
};

enum class ThetaGen : std::uint8_t { S, T2, T2Inv };

struct ReductionWord {
    std::vector<ThetaGen> word;
    std::complex<double> reduced{0.0, 1.0};
    // Theta_3(z_original) = automorphy * Theta_3(reduced)
    std::complex<double> automorphy{1.0, 0.0};
};

class ReductionFailure : public std::runtime_error {
public:
    ReductionFailure(const std::string& msg, std::complex<double> best)
        : std::runtime_error(msg), best_point(best) {}
    std::complex<double> best_point;
};

// Pull z into {im >= target_im} or {|q| = e^{-2 pi im} <= target_absq} with a
// Gamma_theta word of length <= max_word; throws ReductionFailure otherwise.
ReductionWord reduce_theta_group(std::complex<double> z, double target_im = 0.5,
                                 double target_absq = 0.05, int max_word = 64);
ReductionWord reduce_theta_group(const UpperHalfPoint& z);

std::complex<double> apply_word(const std::vector<ThetaGen>& word, std::complex<double> z);

namespace detail {

template <typename Real>
struct ThetaTriple {
    std::complex<Real> t2, t3, t4;
};

// Theta_2/3/4 at z via SL2(Z) reduction with permutation/automorphy tracking.
template <typename Real>
ThetaTriple<Real> eval_theta_triple(std::complex<Real> z);

extern template ThetaTriple<double> eval_theta_triple<double>(std::complex<double>);
extern template ThetaTriple<long double> eval_theta_triple<long double>(std::complex<long double>);

} // namespace detail

std::complex<double> eval_theta(int which, std::complex<double> z);
std::complex<double> eval_lambda(std::complex<double> z);
std::complex<double> eval_J(std::complex<double> z);

inline std::complex<double> eval_theta(int which, const UpperHalfPoint& z) { return eval_theta(which, z.z()); }
inline std::complex<double> eval_lambda(const UpperHalfPoint& z) { return eval_lambda(z.z()); }
inline std::complex<double> eval_J(const UpperHalfPoint& z) { return eval_J(z.z()); }

// Extended-precision variants (x87 long double) for growth studies.
std::complex<long double> eval_theta_ext(int which, std::complex<long double> z);
std::complex<long double> eval_lambda_ext(std::complex<long double> z);
std::complex<long double> eval_J_ext(std::complex<long double> z);

// Theta_which(i y), y > 0, in MPFR arithmetic at the precision of y.
// The S swap is applied internally so the series argument is always >= 1.
MpReal theta_iy(int which, const MpReal& y);

} // namespace fil
