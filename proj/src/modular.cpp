#include "fil/modular.hpp"

#include <cmath>

namespace fil {

namespace {

template <typename Real>
std::complex<Real> inv_sqrt_miz(std::complex<Real> z) {
    // (-iz)^(-1/2), principal branch; Re(-iz) = Im z > 0 on C_+.
    std::complex<Real> miz(z.imag(), -z.real());
    return Real(1) / std::sqrt(miz);
}

} // namespace

ReductionWord reduce_theta_group(std::complex<double> z, double target_im, double target_absq, int max_word) {
    if (!(z.imag() > 0)) throw std::invalid_argument("reduce_theta_group: im > 0 required");
    ReductionWord rw;
    rw.reduced = z;
    auto done = [&](std::complex<double> p) {
        return p.imag() >= target_im || std::exp(-2.0 * M_PI * p.imag()) <= target_absq;
    };
    int len = 0;
    while (!done(rw.reduced)) {
        long k = std::lround(rw.reduced.real() / 2.0);
        if (k != 0) {
            if (len + std::labs(k) > max_word)
                throw ReductionFailure("reduce_theta_group: word length guard exceeded", rw.reduced);
            rw.reduced -= 2.0 * static_cast<double>(k);
            for (long i = 0; i < std::labs(k); ++i) rw.word.push_back(k > 0 ? ThetaGen::T2Inv : ThetaGen::T2);
            len += static_cast<int>(std::labs(k));
            continue;
        }
        if (std::abs(rw.reduced) < 1.0) {
            if (++len > max_word)
                throw ReductionFailure("reduce_theta_group: word length guard exceeded", rw.reduced);
            rw.automorphy *= inv_sqrt_miz(rw.reduced);
            rw.reduced = -1.0 / rw.reduced;
            rw.word.push_back(ThetaGen::S);
            continue;
        }
        // in the fundamental domain of Gamma_theta but still below both
        // targets: the point sits near the +-1 cusps and no word helps
        throw ReductionFailure("reduce_theta_group: point near the +-1 cusp", rw.reduced);
    }
    return rw;
}

ReductionWord reduce_theta_group(const UpperHalfPoint& z) { return reduce_theta_group(z.z()); }

std::complex<double> apply_word(const std::vector<ThetaGen>& word, std::complex<double> z) {
    for (ThetaGen g : word) {
        switch (g) {
            case ThetaGen::S: z = -1.0 / z; break;
            case ThetaGen::T2: z += 2.0; break;
            case ThetaGen::T2Inv: z -= 2.0; break;
        }
    }
    return z;
}

namespace detail {

template <typename Real>
ThetaTriple<Real> eval_theta_triple(std::complex<Real> z) {
    if (!(z.imag() > 0)) throw std::invalid_argument("eval_theta_triple: im > 0 required");
    const Real pi = Real(M_PIl);

    // state: Theta_i(z_input) = pref[i] * Theta_{idx[i]}(z), i in {2,3,4}
    std::complex<Real> pref[3] = {Real(1), Real(1), Real(1)};
    int idx[3] = {2, 3, 4};

    std::complex<double> best(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    int steps = 0;
    while (z.imag() < Real(0.75)) {
        if (++steps > 64)
            throw ReductionFailure("eval_theta_triple: reduction did not terminate", best);
        long n = std::lround(static_cast<double>(z.real()));
        if (n != 0) {
            // Theta_2(w+n) = e^{i pi n/4} Theta_2(w); Theta_3/4 swap when n odd
            z -= Real(n);
            std::complex<Real> ph = std::exp(std::complex<Real>(0, pi * Real(n) / Real(4)));
            for (int i = 0; i < 3; ++i) {
                if (idx[i] == 2) pref[i] *= ph;
                else if (n % 2 != 0) idx[i] = (idx[i] == 3 ? 4 : 3);
            }
        } else if (std::abs(z) < Real(1)) {
            // S: Theta_2(w) -> Theta_4(-1/w), Theta_4 -> Theta_2, Theta_3 fixed
            std::complex<Real> f = inv_sqrt_miz(z);
            for (int i = 0; i < 3; ++i) {
                pref[i] *= f;
                if (idx[i] == 2) idx[i] = 4;
                else if (idx[i] == 4) idx[i] = 2;
            }
            z = -Real(1) / z;
        } else {
            // fundamental-domain point with |Re| <= 1/2 has im >= sqrt(3)/2;
            // reaching here means |Re| ~ 1/2 rounding, fall through to series
            break;
        }
        best = {static_cast<double>(z.real()), static_cast<double>(z.imag())};
    }

    // q-series at the reduced point; qh = q^{1/2} = e^{i pi z}
    const std::complex<Real> qh = std::exp(std::complex<Real>(0, 1) * pi * z);
    const Real absq = std::abs(qh);
    std::complex<Real> th3(1), th4(1), s2(1);
    std::complex<Real> qpow(1);
    Real mag = 1;
    for (long k = 1; k <= 64; ++k) {
        // qpow tracks qh^{k^2} via qh^{2k-1} increments
        qpow *= qh;
        for (long j = 1; j < 2 * k - 1; ++j) qpow *= qh;
        mag *= std::pow(absq, static_cast<Real>(2 * k - 1));
        th3 += Real(2) * qpow;
        th4 += Real(k % 2 ? -2 : 2) * qpow;
        if (mag < std::numeric_limits<Real>::epsilon() * Real(0.01)) break;
    }
    std::complex<Real> qk(1);
    Real mag2 = 1;
    for (long k = 1; k <= 64; ++k) {
        for (long j = 0; j < 2 * k; ++j) qk *= qh; // qh^{k(k+1)} increments
        mag2 *= std::pow(absq, static_cast<Real>(2 * k));
        s2 += qk;
        if (mag2 < std::numeric_limits<Real>::epsilon() * Real(0.01)) break;
    }
    std::complex<Real> th2 = Real(2) * std::exp(std::complex<Real>(0, 1) * pi * z / Real(4)) * s2;

    auto pick = [&](int which) -> std::complex<Real> {
        switch (which) {
            case 2: return th2;
            case 3: return th3;
            default: return th4;
        }
    };
    ThetaTriple<Real> out;
    out.t2 = pref[0] * pick(idx[0]);
    out.t3 = pref[1] * pick(idx[1]);
    out.t4 = pref[2] * pick(idx[2]);
    return out;
}

template ThetaTriple<double> eval_theta_triple<double>(std::complex<double>);
template ThetaTriple<long double> eval_theta_triple<long double>(std::complex<long double>);

template <typename Real>
std::complex<Real> lambda_from_triple(const ThetaTriple<Real>& t) {
    std::complex<Real> r = t.t2 / t.t3;
    r *= r;
    r *= r;
    return r;
}

} // namespace detail

std::complex<double> eval_theta(int which, std::complex<double> z) {
    if (which < 2 || which > 4) throw std::invalid_argument("eval_theta: which must be 2, 3 or 4");
    auto t = detail::eval_theta_triple<double>(z);
    return which == 2 ? t.t2 : which == 3 ? t.t3 : t.t4;
}

std::complex<double> eval_lambda(std::complex<double> z) {
    return detail::lambda_from_triple(detail::eval_theta_triple<double>(z));
}

std::complex<double> eval_J(std::complex<double> z) {
    auto lam = eval_lambda(z);
    return lam * (1.0 - lam) / 16.0;
}

std::complex<long double> eval_theta_ext(int which, std::complex<long double> z) {
    auto t = detail::eval_theta_triple<long double>(z);
    return which == 2 ? t.t2 : which == 3 ? t.t3 : t.t4;
}

std::complex<long double> eval_lambda_ext(std::complex<long double> z) {
    return detail::lambda_from_triple(detail::eval_theta_triple<long double>(z));
}

std::complex<long double> eval_J_ext(std::complex<long double> z) {
    auto lam = eval_lambda_ext(z);
    return lam * (1.0L - lam) / 16.0L;
}

MpReal theta_iy(int which, const MpReal& y) {
    if (!(y > 0.0)) throw std::invalid_argument("theta_iy: y > 0 required");
    mpfr_prec_t prec = y.prec();
    MpReal yy = y;
    if (y < 1.0) {
        // S swap: Theta_2(iy) = y^{-1/2} Theta_4(i/y), 4 <-> 2, 3 fixed
        yy = MpReal(1.0, prec) / y;
        MpReal f = MpReal(1.0, prec) / sqrt(y);
        int swapped = which == 2 ? 4 : which == 4 ? 2 : 3;
        return f * theta_iy(swapped, yy);
    }
    MpReal pi_y = MpReal::pi(prec) * yy;
    MpReal q = exp(-pi_y); // e^{-pi y} = |q^{1/2}|
    long kmax = 2 + static_cast<long>(std::sqrt(static_cast<double>(prec) * 0.6931 /
                                                (M_PI * yy.to_double()))) + 2;
    if (which == 2) {
        MpReal s(1.0, prec), qk(1.0, prec);
        for (long k = 1; k <= kmax; ++k) {
            for (long j = 0; j < 2 * k; ++j) qk *= q;
            s += qk;
        }
        MpReal quarter = exp(-pi_y / 4L);
        return MpReal(2.0, prec) * quarter * s;
    }
    MpReal s(1.0, prec), qk(1.0, prec);
    for (long k = 1; k <= kmax; ++k) {
        for (long j = 0; j < 2 * k - 1; ++j) qk *= q;
        MpReal term = qk * 2L;
        if (which == 4 && k % 2 == 1) term = -term;
        s += term;
    }
    return s;
}

} // namespace fil
