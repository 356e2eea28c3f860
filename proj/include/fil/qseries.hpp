#pragma once

// Exact Laurent series in w = q^(1/2) over arbitrary-precision rationals,
// and the canonical expansions of the Jacobi thetas, lambda and J.
//
// A HalfQSeries is known modulo w^order: arithmetic never invents accuracy,
// results carry the minimal order implied by the operands.

#include "fil/rational.hpp"

#include <stdexcept>
#include <vector>

namespace fil {

class HalfQSeries {
public:
    // Zero series, known modulo w^order.
    explicit HalfQSeries(long order = 0) : valuation_(order), order_(order) {}

    HalfQSeries(long valuation, std::vector<Rational> coeffs, long order)
        : valuation_(valuation), order_(order), coeffs_(std::move(coeffs)) {
        if (static_cast<long>(coeffs_.size()) != order_ - valuation_)
            throw std::invalid_argument("HalfQSeries: coeffs length must equal order - valuation");
        normalize();
    }

    long valuation() const { return valuation_; }
    long order() const { return order_; }
    bool is_zero() const { return coeffs_.empty(); }

    // Coefficient of w^k; exponents at or beyond `order` are a contract violation.
    const Rational& coeff(long k) const {
        static const Rational zero(0);
        if (k >= order_) throw std::out_of_range("HalfQSeries::coeff: exponent beyond known order");
        if (k < valuation_) return zero;
        return coeffs_[static_cast<size_t>(k - valuation_)];
    }

    HalfQSeries truncated(long new_order) const;
    HalfQSeries shifted(long exponent_shift) const; // multiply by w^shift

    friend HalfQSeries operator+(const HalfQSeries& a, const HalfQSeries& b);
    friend HalfQSeries operator-(const HalfQSeries& a, const HalfQSeries& b);
    friend HalfQSeries operator*(const HalfQSeries& a, const HalfQSeries& b);
    HalfQSeries operator-() const;
    HalfQSeries operator*(const Rational& c) const;

    bool operator==(const HalfQSeries& o) const {
        return valuation_ == o.valuation_ && order_ == o.order_ && coeffs_ == o.coeffs_;
    }

private:
    void normalize(); // strip leading/trailing-into-valuation zeros

    long valuation_;
    long order_;
    std::vector<Rational> coeffs_; // coeffs_[i] multiplies w^(valuation_+i)
};

HalfQSeries series_add(const HalfQSeries& a, const HalfQSeries& b);
HalfQSeries series_mul(const HalfQSeries& a, const HalfQSeries& b);
// Requires a nonzero leading coefficient; inverting the zero series throws.
HalfQSeries series_invert(const HalfQSeries& a);
// Integer exponents, negative allowed when invertible.
HalfQSeries series_pow(const HalfQSeries& a, long e);

// Constant c + O(w^order).
HalfQSeries series_const(const Rational& c, long order);

// Theta expansions. which=3: sum w^(n^2); which=4: sum (-1)^n w^(n^2).
// which=2 returns S with Theta_2 = w^(1/4) * S(w); the quarter power never
// leaves this module, only Theta_2^4 = w * S^4 does (theta2_fourth).
HalfQSeries theta_series(int which, long order);
HalfQSeries theta2_fourth(long order);

// lambda = Theta_2^4 / Theta_3^4 = 16w - 128w^2 + 704w^3 - ...
HalfQSeries lambda_series(long order);
// J = lambda(1-lambda)/16 = w - 24w^2 + 300w^3 - ...
HalfQSeries j_series(long order);
// Expansion of 1/J(1 - 1/z) in w(z) through the substitution identity chain
// lambda(1-1/z) = 1 - 1/lambda(z); leading term -4096 w^2 (= -4096 q).
HalfQSeries j_inv_cusp_series(long order);

struct RationalPolynomial {
    std::vector<Rational> coeffs; // coeffs[k] multiplies X^k; empty = zero polynomial
    bool monic = false;

    long degree() const { return static_cast<long>(coeffs.size()) - 1; }

    template <typename T>
    T eval(const T& x) const {
        if (coeffs.empty()) return T(0);
        T acc(0);
        for (size_t i = coeffs.size(); i-- > 0;) {
            acc = acc * x;
            acc += T(coeffs[i].get_d());
        }
        return acc;
    }
    Rational eval_exact(const Rational& x) const {
        Rational acc(0);
        for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
        return acc;
    }

    void assert_invariants() const {
        if (monic && (coeffs.empty() || coeffs.back() != 1))
            throw std::logic_error("RationalPolynomial: monic flag with non-unit leading coefficient");
    }
};

// JSON (de)serialization; numerators/denominators as decimal strings.
std::string halfqseries_to_json(const HalfQSeries& s);
HalfQSeries halfqseries_from_json(const std::string& text);

} // namespace fil
