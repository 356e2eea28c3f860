#pragma once

// Sampling of even test functions at perturbed nodes, reconstruction through
// the (inverted) analysis operator, and error functionals: sup norm, Schwartz
// seminorms p_{alpha,beta}, Gelfand-Shilov norms.
//
// Fourier convention throughout: f^(xi) = Int f(x) e^{-2 pi i x xi} dx.

#include "fil/perturb_op.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace fil {

struct TestFunction {
    // even Gaussian e^{-pi a x^2} (a > 0) or x^{2k} e^{-pi x^2} (k <= 2)
    enum class Family { Gaussian, HermiteGaussian, Zero };
    Family family = Family::Gaussian;
    double a = 1.0;
    int k = 0;

    double value(double x) const;
    double fourier(double xi) const;
    std::complex<double> value(std::complex<double> z) const; // entire extension

    static TestFunction gaussian(double a);
    static TestFunction hermite(int k);
    static TestFunction zero();
    // "gauss:a" | "hermite:k" | "zero"
    static TestFunction parse(const std::string& descriptor);
    std::string descriptor() const;
};

// (z slot; space samples; frequency samples), length 2N+1.
Eigen::VectorXd sample(const TestFunction& f, const NodePlan& plan);

struct ReconstructionReport {
    std::vector<double> grid;
    std::vector<double> reconstruction;
    std::vector<double> truth;
    double sup_error = 0.0;
    std::vector<std::pair<std::pair<int, int>, double>> seminorm_errors; // ((alpha,beta), value)
    double max_node_residual = 0.0;
    long N = 0;
    std::string inverse_provenance; // "identity" | "neumann" | "direct"
};

// Applies the inverse (pass nullptr for the epsilon == 0 identity path, which
// then reproduces the direct truncated RV synthesis bit for bit), then the RV
// synthesis sum truncated at N. Summation order is fixed: z term, then k
// ascending with the space/frequency contributions interleaved.
ReconstructionReport reconstruct(const Eigen::VectorXd& samples, const Eigen::MatrixXd* inverse,
                                 const WeightScheme& w, const NodePlan& plan,
                                 const BasisTable& table, const std::vector<double>& grid,
                                 const TestFunction& truth,
                                 const std::vector<std::pair<int, int>>& seminorms = {});

// Direct truncated RV synthesis sum_{k<=N} f(sqrt k) a_k + f^(sqrt k) a^_k at
// table point index p (used as the bit-identity oracle for the eps == 0 path).
double rv_synthesis(const Eigen::VectorXd& exact_samples, const BasisTable& table, long N, size_t p);

// sup_x |x^alpha d^beta f| on a uniform grid; beta <= 4 via centered
// differences with one Richardson step.
double seminorm_grid(const std::vector<double>& grid, const std::vector<double>& values, int alpha,
                     int beta);
double seminorm(const TestFunction& f, int alpha, int beta, double x_max = 12.0, double h = 1e-3);

struct GelfandShilovResult {
    double value = 0.0;
    bool diverged = false; // growth at the grid edge: not in the class at this h
};

GelfandShilovResult gelfand_shilov_norm(const std::vector<double>& grid,
                                        const std::vector<double>& values,
                                        const std::vector<double>& transform_values, double h);

} // namespace fil
