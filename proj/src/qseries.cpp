#include "fil/qseries.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace fil {

void HalfQSeries::normalize() {
    size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead == coeffs_.size()) {
        coeffs_.clear();
        valuation_ = order_;
        return;
    }
    if (lead > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
        valuation_ += static_cast<long>(lead);
    }
}

HalfQSeries HalfQSeries::truncated(long new_order) const {
    if (new_order > order_) throw std::invalid_argument("truncated: cannot extend order");
    if (new_order <= valuation_) return HalfQSeries(new_order);
    std::vector<Rational> c(coeffs_.begin(), coeffs_.begin() + (new_order - valuation_));
    return HalfQSeries(valuation_, std::move(c), new_order);
}

HalfQSeries HalfQSeries::shifted(long s) const {
    HalfQSeries r = *this;
    r.valuation_ += s;
    r.order_ += s;
    return r;
}

HalfQSeries operator+(const HalfQSeries& a, const HalfQSeries& b) {
    long order = std::min(a.order_, b.order_);
    long val = std::min(std::min(a.valuation_, b.valuation_), order);
    std::vector<Rational> c(static_cast<size_t>(order - val));
    for (long k = val; k < order; ++k) {
        Rational s(0);
        if (k >= a.valuation_ && k < a.order_) s += a.coeffs_[static_cast<size_t>(k - a.valuation_)];
        if (k >= b.valuation_ && k < b.order_) s += b.coeffs_[static_cast<size_t>(k - b.valuation_)];
        c[static_cast<size_t>(k - val)] = s;
    }
    return HalfQSeries(val, std::move(c), order);
}

HalfQSeries HalfQSeries::operator-() const {
    HalfQSeries r = *this;
    for (auto& x : r.coeffs_) x = -x;
    return r;
}

HalfQSeries operator-(const HalfQSeries& a, const HalfQSeries& b) { return a + (-b); }

HalfQSeries HalfQSeries::operator*(const Rational& c) const {
    if (c == 0) return HalfQSeries(order_);
    HalfQSeries r = *this;
    for (auto& x : r.coeffs_) x *= c;
    return r;
}

HalfQSeries operator*(const HalfQSeries& a, const HalfQSeries& b) {
    // a = A + O(w^a.order), b = B + O(w^b.order):
    // a*b = A*B + O(w^(a.val+b.order)) + O(w^(b.val+a.order)).
    if (a.is_zero() || b.is_zero()) {
        long order = std::min(a.valuation_ + b.order_, b.valuation_ + a.order_);
        return HalfQSeries(order);
    }
    long order = std::min(a.valuation_ + b.order_, b.valuation_ + a.order_);
    long val = a.valuation_ + b.valuation_;
    std::vector<Rational> c(static_cast<size_t>(order - val));
    Rational tmp;
    for (size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        long ka = a.valuation_ + static_cast<long>(i);
        long jmax_l = order - ka - b.valuation_;
        if (jmax_l <= 0) break; // larger i contribute only beyond the known order
        size_t jmax = std::min(b.coeffs_.size(), static_cast<size_t>(jmax_l));
        for (size_t j = 0; j < jmax; ++j) {
            if (b.coeffs_[j] == 0) continue;
            tmp = a.coeffs_[i] * b.coeffs_[j];
            c[static_cast<size_t>(ka + b.valuation_ + static_cast<long>(j) - val)] += tmp;
        }
    }
    return HalfQSeries(val, std::move(c), order);
}

HalfQSeries series_add(const HalfQSeries& a, const HalfQSeries& b) { return a + b; }
HalfQSeries series_mul(const HalfQSeries& a, const HalfQSeries& b) { return a * b; }

HalfQSeries series_invert(const HalfQSeries& a) {
    if (a.is_zero()) throw std::domain_error("series_invert: cannot invert the zero series");
    long v = a.valuation();
    long n = a.order() - v; // known unit-part coefficients
    // u = unit part (constant term a.coeff(v) != 0), invert by the standard recursion.
    std::vector<Rational> inv(static_cast<size_t>(n));
    const Rational& u0 = a.coeff(v);
    inv[0] = 1 / u0;
    for (long k = 1; k < n; ++k) {
        Rational s(0);
        for (long j = 1; j <= k; ++j) s += a.coeff(v + j) * inv[static_cast<size_t>(k - j)];
        inv[static_cast<size_t>(k)] = -s / u0;
    }
    return HalfQSeries(-v, std::move(inv), -v + n);
}

HalfQSeries series_pow(const HalfQSeries& a, long e) {
    if (e < 0) return series_pow(series_invert(a), -e);
    if (e == 0) return series_const(1, a.order() - a.valuation());
    HalfQSeries r = a;
    for (long i = 1; i < e; ++i) r = r * a;
    return r;
}

HalfQSeries series_const(const Rational& c, long order) {
    if (order <= 0) return HalfQSeries(order);
    if (c == 0) return HalfQSeries(order);
    std::vector<Rational> v(static_cast<size_t>(order));
    v[0] = c;
    return HalfQSeries(0, std::move(v), order);
}

HalfQSeries theta_series(int which, long order) {
    if (order < 1) throw std::invalid_argument("theta_series: order >= 1 required");
    std::vector<Rational> c(static_cast<size_t>(order));
    switch (which) {
        case 3:
            for (long n = 0; n * n < order; ++n) c[static_cast<size_t>(n * n)] += (n == 0 ? 1 : 2);
            break;
        case 4:
            for (long n = 0; n * n < order; ++n) {
                Rational t = (n == 0 ? 1 : 2);
                if (n % 2 == 1) t = -t;
                c[static_cast<size_t>(n * n)] += t;
            }
            break;
        case 2:
            // S(w) with Theta_2 = w^(1/4) S(w): S = 2 * sum_{k>=0} w^(k^2+k)
            for (long k = 0; k * (k + 1) < order; ++k) c[static_cast<size_t>(k * (k + 1))] += 2;
            break;
        default:
            throw std::invalid_argument("theta_series: which must be 2, 3 or 4");
    }
    return HalfQSeries(0, std::move(c), order);
}

HalfQSeries theta2_fourth(long order) {
    if (order < 2) throw std::invalid_argument("theta2_fourth: order >= 2 required");
    HalfQSeries s = theta_series(2, order - 1);
    return series_pow(s, 4).truncated(order - 1).shifted(1);
}

HalfQSeries lambda_series(long order) {
    if (order < 2) throw std::invalid_argument("lambda_series: order >= 2 required");
    HalfQSeries t3 = theta_series(3, order);
    HalfQSeries t3_4 = series_pow(t3, 4).truncated(order);
    return (theta2_fourth(order) * series_invert(t3_4)).truncated(order);
}

HalfQSeries j_series(long order) {
    HalfQSeries lam = lambda_series(order + 1);
    HalfQSeries j = lam * (series_const(1, order + 1) - lam);
    return (j * Rational(1, 16)).truncated(order);
}

HalfQSeries j_inv_cusp_series(long order) {
    // lambda(1-1/z) = 1 - 1/lambda(z), then J(1-1/z) = s(1-s)/16 with s that series.
    long work = order + 4;
    HalfQSeries lam = lambda_series(work);
    HalfQSeries s = series_const(1, work - 2) - series_invert(lam);
    HalfQSeries jc = (s * (series_const(1, s.order()) - s)) * Rational(1, 16);
    return series_invert(jc).truncated(order);
}

std::string halfqseries_to_json(const HalfQSeries& s) {
    nlohmann::ordered_json j;
    j["valuation"] = s.valuation();
    j["order"] = s.order();
    auto arr = nlohmann::ordered_json::array();
    for (long k = s.valuation(); k < s.order(); ++k) {
        const Rational& c = s.coeff(k);
        arr.push_back({c.get_num().get_str(), c.get_den().get_str()});
    }
    j["coeffs"] = arr;
    return j.dump();
}

HalfQSeries halfqseries_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    long val = j.at("valuation").get<long>();
    long order = j.at("order").get<long>();
    std::vector<Rational> c;
    for (const auto& pair : j.at("coeffs")) {
        Integer num(pair.at(0).get<std::string>());
        Integer den(pair.at(1).get<std::string>());
        Rational r(num, den);
        r.canonicalize();
        c.push_back(r);
    }
    return HalfQSeries(val, std::move(c), order);
}

} // namespace fil
