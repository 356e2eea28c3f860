#pragma once

// Node sequences sqrt(n + eps_n), perturbation envelopes, the
// supercritical/subcritical gap classifier and nearest-node matching.

#include <optional>
#include <string>
#include <vector>

namespace fil {

struct Perturbation {
    enum class Kind { Zero, Power, Exponential, Explicit };
    Kind kind = Kind::Zero;
    double c = 0.0;     // amplitude
    double alpha = 0.0; // power exponent or exponential rate
    std::vector<double> values;

    // eps_n; Power: c (1+n)^-alpha, Exponential: c e^{-alpha n}
    double eps(long n) const;

    static Perturbation zero() { return {}; }
    static Perturbation power(double c, double alpha);
    static Perturbation exponential(double c, double alpha);
    static Perturbation explicit_list(std::vector<double> v);
    // "zero" | "power:c,alpha" | "exp:c,C" | "file:PATH"
    static Perturbation parse(const std::string& descriptor);

    std::string to_json() const;
    static Perturbation from_json(const std::string& text);
    bool is_zero() const { return kind == Kind::Zero; }
};

struct NodePlan {
    Perturbation eps;   // space nodes x_n = sqrt(n + eps_n)
    Perturbation delta; // frequency nodes y_n = sqrt(n + delta_n)
    long N = 0;         // truncation
    std::string weight_descriptor; // provenance only

    double x(long n) const;
    double y(long n) const;

    std::string to_json() const;
    static NodePlan from_json(const std::string& text);
};

struct DecayReport {
    bool admissible = false;
    long worst_index = -1;
    double max_ratio = 0.0; // max |eps_n| (1+n)^(5/4+delta)
};

// Verifies |eps_n| < c (1+n)^{-5/4-delta} for n <= n_limit.
DecayReport check_decay(const Perturbation& p, double c, double delta, long n_limit);

enum class Criticality { Supercritical, Subcritical, Indeterminate };

struct ClassifyReport {
    Criticality verdict = Criticality::Indeterminate;
    double tail_sup = 0.0; // empirical limsup of |x_{n+1}|^{p-1} |x_{n+1}-x_n| (max of two sequences)
    double tail_inf = 0.0; // empirical liminf (min of two sequences)
};

// Windowed tail estimate of the gap functionals; "indeterminate" within
// tolerance 0.02 of the 1/2 threshold. Throws on non-monotone inputs.
ClassifyReport classify_pair(const std::vector<double>& xs, const std::vector<double>& ys,
                             double p, double q, long n_window);

struct NodeMatch {
    long m = -1;        // interval index with sqrt(n) in [x_m, x_{m+1})
    double eps = 0.0;   // x_m^2 - n
};

struct MatchReport {
    std::vector<NodeMatch> matches; // indexed by n - n_lo
    long n_lo = 0, n_hi = 0;        // n range actually covered (inclusive/exclusive)
    bool truncated = false;         // sqrt(n) left the covered range
    double delta_derived = 0.0;     // (D-1)/2 - 5/4
    bool admissible = false;
    double max_ratio = 0.0;         // max |eps_n(m)| (1+n)^(5/4+delta)
};

MatchReport match_nodes(const std::vector<double>& xs, double D, double c_D);

} // namespace fil
