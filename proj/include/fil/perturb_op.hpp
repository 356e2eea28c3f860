#pragma once

// Truncated analysis-synthesis operator T on weighted sequence spaces:
// assembly in the rescaled orthonormal basis e_n = (1+n)^{-s} delta_n (or
// e^{-cn} delta_n), Hilbert-Schmidt defect, Neumann / LU inversion and the
// perturbed basis coefficients gamma, gamma~.
//
// Index layout: 0 = combined z slot (Poisson slot, F(x_0) + F^(y_0)),
// 1..N = space block, N+1..2N = frequency block.

#include "fil/nodes.hpp"
#include "fil/rv_basis.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace fil {

struct WeightScheme {
    enum class Kind { Polynomial, Exponential };
    Kind kind = Kind::Polynomial;
    double param = 0.0; // s or c

    double weight(long n) const {
        return kind == Kind::Polynomial ? std::pow(1.0 + static_cast<double>(n), param)
                                        : std::exp(param * static_cast<double>(n));
    }
    static WeightScheme polynomial(double s) { return {Kind::Polynomial, s}; }
    static WeightScheme exponential(double c) { return {Kind::Exponential, c}; }
    // "s=K" or "exp=C"
    static WeightScheme parse(const std::string& descriptor);
    std::string descriptor() const;
};

struct OperatorTruncation {
    long N = 0;
    Eigen::MatrixXd matrix; // (2N+1) x (2N+1), stores T itself
    WeightScheme scheme;
    NodePlan plan;

    long dim() const { return 2 * N + 1; }
};

// Assembles T from tabulated basis values at the perturbed nodes. The table
// must contain x_k = sqrt(k+eps_k) and y_k = sqrt(k+delta_k) for 0 <= k <= N
// as real points; a missing node throws naming the (n, node) pair.
OperatorTruncation build_truncation(const NodePlan& plan, const BasisTable& table,
                                    const WeightScheme& w, long N);

// Frobenius norm of I - T (the truncated Hilbert-Schmidt defect).
double hs_defect(const OperatorTruncation& op);

struct NeumannReport {
    Eigen::MatrixXd inverse;
    int terms = 0;
    double last_increment = 0.0;
    double defect = 0.0;
};

// Partial sums of sum_k (I-T)^k; requires hs_defect < 1.
NeumannReport invert_neumann(const OperatorTruncation& op, double tol = 1e-13, int max_terms = 512);

struct DirectInverse {
    Eigen::MatrixXd inverse;
    double condition_1norm = 0.0;
};

DirectInverse invert_direct(const OperatorTruncation& op);

struct PerturbedBasisCoeffs {
    long n = 0;
    // gamma[0] multiplies a_0 (z slot), gamma[k] multiplies a_k, k = 1..N;
    // gamma_tilde[0] = 0 by convention, gamma_tilde[k] multiplies a^_k
    std::vector<double> gamma, gamma_tilde;
};

// Coefficients of h_n = T^{-1}-pullback of the space delta at n (and, via
// `frequency_side`, of g_n for the frequency delta). Unweighted.
PerturbedBasisCoeffs perturbed_coeffs(const Eigen::MatrixXd& inverse, const WeightScheme& w,
                                      long N, long n, bool frequency_side = false);

// h_n(x) (space side) and g_n(x) (frequency side) from tabulated values at
// table point index p.
double eval_perturbed_basis(const PerturbedBasisCoeffs& c, const BasisTable& table, size_t p);
std::complex<double> eval_perturbed_basis_c(const PerturbedBasisCoeffs& c, const BasisTable& table, size_t p);

// CSV (row,col,value) and JSON summary dumps.
void dump_operator_csv(const OperatorTruncation& op, const std::string& path);
std::string operator_summary_json(const OperatorTruncation& op, double defect,
                                  double condition, int neumann_terms);

} // namespace fil
