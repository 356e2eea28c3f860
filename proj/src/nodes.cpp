#include "fil/nodes.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fil {

double Perturbation::eps(long n) const {
    switch (kind) {
        case Kind::Zero: return 0.0;
        case Kind::Power: return c * std::pow(1.0 + static_cast<double>(n), -alpha);
        case Kind::Exponential: return c * std::exp(-alpha * static_cast<double>(n));
        case Kind::Explicit:
            return n >= 0 && n < static_cast<long>(values.size()) ? values[static_cast<size_t>(n)] : 0.0;
    }
    return 0.0;
}

Perturbation Perturbation::power(double c, double alpha) {
    Perturbation p;
    p.kind = Kind::Power;
    p.c = c;
    p.alpha = alpha;
    return p;
}

Perturbation Perturbation::exponential(double c, double alpha) {
    Perturbation p;
    p.kind = Kind::Exponential;
    p.c = c;
    p.alpha = alpha;
    return p;
}

Perturbation Perturbation::explicit_list(std::vector<double> v) {
    Perturbation p;
    p.kind = Kind::Explicit;
    p.values = std::move(v);
    return p;
}

Perturbation Perturbation::parse(const std::string& d) {
    if (d.empty() || d == "zero") return zero();
    auto colon = d.find(':');
    std::string head = d.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : d.substr(colon + 1);
    auto two = [&]() {
        auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("Perturbation::parse: expected 'c,alpha' in " + d);
        return std::make_pair(std::stod(rest.substr(0, comma)), std::stod(rest.substr(comma + 1)));
    };
    if (head == "power") {
        auto [c, a] = two();
        return power(c, a);
    }
    if (head == "exp") {
        auto [c, a] = two();
        return exponential(c, a);
    }
    if (head == "file") {
        std::ifstream f(rest);
        if (!f) throw std::invalid_argument("Perturbation::parse: cannot open " + rest);
        std::vector<double> v;
        double x;
        while (f >> x) v.push_back(x);
        return explicit_list(std::move(v));
    }
    throw std::invalid_argument("Perturbation::parse: unknown generator " + d);
}

std::string Perturbation::to_json() const {
    nlohmann::ordered_json j;
    switch (kind) {
        case Kind::Zero: j["kind"] = "zero"; break;
        case Kind::Power: j["kind"] = "power"; j["a"] = c; j["alpha"] = alpha; break;
        case Kind::Exponential: j["kind"] = "exp"; j["a"] = c; j["alpha"] = alpha; break;
        case Kind::Explicit: j["kind"] = "list"; j["values"] = values; break;
    }
    return j.dump();
}

Perturbation Perturbation::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::string k = j.at("kind").get<std::string>();
    if (k == "zero") return zero();
    if (k == "power") return power(j.at("a").get<double>(), j.at("alpha").get<double>());
    if (k == "exp") return exponential(j.at("a").get<double>(), j.at("alpha").get<double>());
    if (k == "list") return explicit_list(j.at("values").get<std::vector<double>>());
    throw std::invalid_argument("Perturbation::from_json: unknown kind " + k);
}

double NodePlan::x(long n) const {
    double v = static_cast<double>(n) + eps.eps(n);
    if (v < 0) throw std::domain_error("NodePlan: n + eps_n < 0");
    return std::sqrt(v);
}

double NodePlan::y(long n) const {
    double v = static_cast<double>(n) + delta.eps(n);
    if (v < 0) throw std::domain_error("NodePlan: n + delta_n < 0");
    return std::sqrt(v);
}

std::string NodePlan::to_json() const {
    nlohmann::ordered_json j;
    j["eps"] = nlohmann::json::parse(eps.to_json());
    j["delta"] = nlohmann::json::parse(delta.to_json());
    j["N"] = N;
    j["weight"] = weight_descriptor;
    return j.dump();
}

NodePlan NodePlan::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    NodePlan p;
    p.eps = Perturbation::from_json(j.at("eps").dump());
    p.delta = Perturbation::from_json(j.at("delta").dump());
    p.N = j.at("N").get<long>();
    p.weight_descriptor = j.at("weight").get<std::string>();
    return p;
}

DecayReport check_decay(const Perturbation& p, double c, double delta, long n_limit) {
    DecayReport r;
    r.admissible = true;
    for (long n = 0; n <= n_limit; ++n) {
        double ratio = std::fabs(p.eps(n)) * std::pow(1.0 + static_cast<double>(n), 1.25 + delta);
        if (ratio > r.max_ratio) {
            r.max_ratio = ratio;
            r.worst_index = n;
        }
    }
    if (!(r.max_ratio < c)) r.admissible = false;
    return r;
}

namespace {

void tail_bounds(const std::vector<double>& s, double p, long window, double& sup, double& inf) {
    if (s.size() < 3) throw std::invalid_argument("classify_pair: sequence too short");
    for (size_t i = 1; i < s.size(); ++i)
        if (!(s[i] > s[i - 1])) throw std::invalid_argument("classify_pair: sequence not strictly increasing");
    size_t n = std::min<size_t>(s.size() - 1, static_cast<size_t>(window));
    size_t lo = n / 2;
    sup = -1e300;
    inf = 1e300;
    for (size_t i = lo; i < n; ++i) {
        double f = std::pow(std::fabs(s[i + 1]), p - 1.0) * (s[i + 1] - s[i]);
        sup = std::max(sup, f);
        inf = std::min(inf, f);
    }
}

} // namespace

ClassifyReport classify_pair(const std::vector<double>& xs, const std::vector<double>& ys,
                             double p, double q, long n_window) {
    if (!(p > 1.0) || !(q > 1.0) || std::fabs(1.0 / p + 1.0 / q - 1.0) > 1e-12)
        throw std::invalid_argument("classify_pair: need p, q > 1 with 1/p + 1/q = 1");
    double sx, ix, sy, iy;
    tail_bounds(xs, p, n_window, sx, ix);
    tail_bounds(ys, q, n_window, sy, iy);
    ClassifyReport r;
    r.tail_sup = std::max(sx, sy);
    r.tail_inf = std::min(ix, iy);
    const double tol = 0.02;
    if (r.tail_sup < 0.5 - tol) r.verdict = Criticality::Supercritical;
    else if (r.tail_inf > 0.5 + tol) r.verdict = Criticality::Subcritical;
    else r.verdict = Criticality::Indeterminate;
    return r;
}

MatchReport match_nodes(const std::vector<double>& xs, double D, double c_D) {
    if (xs.size() < 2) throw std::invalid_argument("match_nodes: need at least two nodes");
    for (size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw std::invalid_argument("match_nodes: nodes not strictly increasing");

    MatchReport r;
    r.delta_derived = (D - 1.0) / 2.0 - 1.25;

    double lo2 = xs.front() * xs.front();
    double hi2 = xs.back() * xs.back();
    r.n_lo = static_cast<long>(std::ceil(lo2));
    while (static_cast<double>(r.n_lo) < lo2) ++r.n_lo;
    r.n_hi = static_cast<long>(std::floor(hi2));
    if (static_cast<double>(r.n_hi) >= hi2) --r.n_hi; // sqrt(n) must lie strictly below xs.back()
    r.truncated = true; // a finite window always truncates the mapping

    for (long n = r.n_lo; n <= r.n_hi; ++n) {
        double root = std::sqrt(static_cast<double>(n));
        // interval [x_i, x_{i+1}) containing sqrt(n); upper_bound - 1 ties to the lower index
        auto it = std::upper_bound(xs.begin(), xs.end(), root);
        long i = static_cast<long>(it - xs.begin()) - 1;
        if (i < 0 || i + 1 >= static_cast<long>(xs.size())) continue;
        NodeMatch m;
        m.m = i;
        m.eps = xs[static_cast<size_t>(i)] * xs[static_cast<size_t>(i)] - static_cast<double>(n);
        r.matches.push_back(m);
        double ratio = std::fabs(m.eps) *
                       std::pow(1.0 + static_cast<double>(n), 1.25 + std::max(r.delta_derived, 0.0));
        r.max_ratio = std::max(r.max_ratio, ratio);
    }
    r.n_hi = r.n_lo + static_cast<long>(r.matches.size()); // exclusive
    r.admissible = r.delta_derived > 0.0 && r.max_ratio < c_D;
    return r;
}

} // namespace fil
