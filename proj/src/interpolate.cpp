#include "fil/interpolate.hpp"

#include <cmath>
#include <stdexcept>

namespace fil {

namespace {

template <typename T>
T hermite_poly(int k, T x2) {
    // closed-form transforms fix these three cases
    switch (k) {
        case 0: return T(1);
        case 1: return x2;
        case 2: return x2 * x2;
        default: throw std::invalid_argument("TestFunction: hermite k <= 2 supported");
    }
}

} // namespace

double TestFunction::value(double x) const {
    switch (family) {
        case Family::Zero: return 0.0;
        case Family::Gaussian: return std::exp(-M_PI * a * x * x);
        case Family::HermiteGaussian:
            return hermite_poly<double>(k, x * x) * std::exp(-M_PI * x * x);
    }
    return 0.0;
}

std::complex<double> TestFunction::value(std::complex<double> z) const {
    switch (family) {
        case Family::Zero: return {0.0, 0.0};
        case Family::Gaussian: return std::exp(-M_PI * a * z * z);
        case Family::HermiteGaussian:
            return hermite_poly<std::complex<double>>(k, z * z) * std::exp(-M_PI * z * z);
    }
    return {0.0, 0.0};
}

double TestFunction::fourier(double xi) const {
    switch (family) {
        case Family::Zero: return 0.0;
        case Family::Gaussian: return std::exp(-M_PI * xi * xi / a) / std::sqrt(a);
        case Family::HermiteGaussian: {
            double g = std::exp(-M_PI * xi * xi);
            double u = xi * xi;
            switch (k) {
                case 0: return g;
                case 1: return (1.0 / (2.0 * M_PI) - u) * g;
                case 2: return (u * u - 3.0 * u / M_PI + 3.0 / (4.0 * M_PI * M_PI)) * g;
                default: throw std::invalid_argument("TestFunction: hermite k <= 2 supported");
            }
        }
    }
    return 0.0;
}

TestFunction TestFunction::gaussian(double a) {
    if (!(a > 0)) throw std::invalid_argument("TestFunction::gaussian: a > 0 required");
    TestFunction f;
    f.family = Family::Gaussian;
    f.a = a;
    return f;
}

TestFunction TestFunction::hermite(int k) {
    if (k < 0 || k > 2) throw std::invalid_argument("TestFunction::hermite: k in {0,1,2}");
    TestFunction f;
    f.family = Family::HermiteGaussian;
    f.k = k;
    return f;
}

TestFunction TestFunction::zero() {
    TestFunction f;
    f.family = Family::Zero;
    return f;
}

TestFunction TestFunction::parse(const std::string& d) {
    if (d == "zero") return zero();
    auto colon = d.find(':');
    std::string head = d.substr(0, colon);
    if (head == "gauss") return gaussian(std::stod(d.substr(colon + 1)));
    if (head == "hermite") return hermite(std::stoi(d.substr(colon + 1)));
    throw std::invalid_argument("TestFunction::parse: unknown descriptor " + d);
}

std::string TestFunction::descriptor() const {
    switch (family) {
        case Family::Zero: return "zero";
        case Family::Gaussian: return "gauss:" + std::to_string(a);
        case Family::HermiteGaussian: return "hermite:" + std::to_string(k);
    }
    return "?";
}

Eigen::VectorXd sample(const TestFunction& f, const NodePlan& plan) {
    long N = plan.N;
    Eigen::VectorXd s(2 * N + 1);
    s(0) = f.value(plan.x(0)) + f.fourier(plan.y(0));
    for (long k = 1; k <= N; ++k) {
        s(k) = f.value(plan.x(k));
        s(N + k) = f.fourier(plan.y(k));
    }
    return s;
}

double rv_synthesis(const Eigen::VectorXd& exact_samples, const BasisTable& table, long N, size_t p) {
    double acc = exact_samples(0) * table.a(0, p).real();
    for (long k = 1; k <= N; ++k) {
        acc += exact_samples(k) * table.a(k, p).real();
        acc += exact_samples(N + k) * table.a_hat(k, p).real();
    }
    return acc;
}

ReconstructionReport reconstruct(const Eigen::VectorXd& samples, const Eigen::MatrixXd* inverse,
                                 const WeightScheme& w, const NodePlan& plan,
                                 const BasisTable& table, const std::vector<double>& grid,
                                 const TestFunction& truth,
                                 const std::vector<std::pair<int, int>>& seminorms) {
    long N = plan.N;
    if (samples.size() != 2 * N + 1) throw std::invalid_argument("reconstruct: sample size != 2N+1");

    // recovered exact-node samples r = C (M^{-1} (C^{-1} s)) with C = diag(c)
    Eigen::VectorXd r;
    if (inverse == nullptr) {
        r = samples;
    } else {
        if (inverse->rows() != 2 * N + 1) throw std::invalid_argument("reconstruct: inverse dimension mismatch");
        Eigen::VectorXd sw(2 * N + 1);
        sw(0) = samples(0);
        for (long k = 1; k <= N; ++k) {
            double ck = 1.0 / w.weight(k);
            sw(k) = samples(k) / ck;
            sw(N + k) = samples(N + k) / ck;
        }
        Eigen::VectorXd u = (*inverse) * sw;
        r.resize(2 * N + 1);
        r(0) = u(0);
        for (long k = 1; k <= N; ++k) {
            double ck = 1.0 / w.weight(k);
            r(k) = ck * u(k);
            r(N + k) = ck * u(N + k);
        }
    }

    ReconstructionReport rep;
    rep.N = N;
    rep.grid = grid;
    rep.inverse_provenance = inverse ? "direct" : "identity";
    rep.reconstruction.resize(grid.size());
    rep.truth.resize(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        auto p = table.find_real(grid[i]);
        if (!p) throw std::runtime_error("reconstruct: grid point not tabulated");
        rep.reconstruction[i] = rv_synthesis(r, table, N, *p);
        rep.truth[i] = truth.value(grid[i]);
        rep.sup_error = std::max(rep.sup_error, std::fabs(rep.reconstruction[i] - rep.truth[i]));
    }

    // residuals at the perturbed nodes
    for (long k = 1; k <= N; ++k) {
        auto p = table.find_real(plan.x(k));
        if (!p) continue;
        double v = rv_synthesis(r, table, N, *p);
        rep.max_node_residual = std::max(rep.max_node_residual, std::fabs(v - samples(k)));
    }

    if (!seminorms.empty()) {
        std::vector<double> diff(grid.size());
        for (size_t i = 0; i < grid.size(); ++i) diff[i] = rep.reconstruction[i] - rep.truth[i];
        for (auto [al, be] : seminorms)
            rep.seminorm_errors.push_back({{al, be}, seminorm_grid(grid, diff, al, be)});
    }
    return rep;
}

namespace {

// centered finite difference of order `beta` (<= 4) at index i, spacing h
double central_diff(const std::vector<double>& v, size_t i, double h, int beta, int stride) {
    auto at = [&](long off) { return v[i + static_cast<size_t>(off * stride)]; };
    switch (beta) {
        case 0: return at(0);
        case 1: return (at(1) - at(-1)) / (2 * h * stride);
        case 2: return (at(1) - 2 * at(0) + at(-1)) / (h * stride * h * stride);
        case 3: return (at(2) - 2 * at(1) + 2 * at(-1) - at(-2)) / (2 * std::pow(h * stride, 3));
        case 4: return (at(2) - 4 * at(1) + 6 * at(0) - 4 * at(-1) + at(-2)) / std::pow(h * stride, 4);
        default: throw std::invalid_argument("seminorm: beta <= 4 required");
    }
}

} // namespace

double seminorm_grid(const std::vector<double>& grid, const std::vector<double>& values, int alpha,
                     int beta) {
    if (beta < 0 || beta > 4) throw std::invalid_argument("seminorm_grid: beta in [0,4] required");
    if (grid.size() != values.size() || grid.size() < 9)
        throw std::invalid_argument("seminorm_grid: need >= 9 uniformly spaced points");
    double h = grid[1] - grid[0];
    for (size_t i = 1; i + 1 < grid.size(); ++i)
        if (std::fabs((grid[i + 1] - grid[i]) - h) > 1e-9 * std::max(1.0, std::fabs(h)))
            throw std::invalid_argument("seminorm_grid: grid not uniform");
    if (h <= 0) throw std::invalid_argument("seminorm_grid: grid not increasing");
    if (beta >= 3 && grid.size() < 4 * 2 + 1)
        throw std::invalid_argument("seminorm_grid: grid too coarse for beta");

    double best = 0.0;
    size_t margin = 4; // room for the stride-2 Richardson stencil
    for (size_t i = margin; i + margin < grid.size(); ++i) {
        double d1 = central_diff(values, i, h, beta, 1);
        double d2 = central_diff(values, i, h, beta, 2);
        double d = d1 + (d1 - d2) / 3.0; // Richardson: errors O(h^2), O((2h)^2)
        best = std::max(best, std::pow(std::fabs(grid[i]), alpha) * std::fabs(d));
    }
    return best;
}

double seminorm(const TestFunction& f, int alpha, int beta, double x_max, double h) {
    std::vector<double> g, v;
    for (double x = -x_max; x <= x_max + h / 2; x += h) {
        g.push_back(x);
        v.push_back(f.value(x));
    }
    return seminorm_grid(g, v, alpha, beta);
}

GelfandShilovResult gelfand_shilov_norm(const std::vector<double>& grid,
                                        const std::vector<double>& values,
                                        const std::vector<double>& transform_values, double h) {
    if (grid.size() != values.size() || grid.size() != transform_values.size())
        throw std::invalid_argument("gelfand_shilov_norm: size mismatch");
    GelfandShilovResult r;
    double m1 = 0, m2 = 0;
    size_t i1 = 0, i2 = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
        double wgt = std::exp(h * std::fabs(grid[i]));
        double v1 = std::fabs(values[i]) * wgt;
        double v2 = std::fabs(transform_values[i]) * wgt;
        if (v1 > m1) { m1 = v1; i1 = i; }
        if (v2 > m2) { m2 = v2; i2 = i; }
    }
    r.value = m1 + m2;
    // max attained at the outermost grid points: growth, not in the class at this h
    double edge = std::max(std::fabs(grid.front()), std::fabs(grid.back()));
    if (std::fabs(grid[i1]) >= edge - 1e-12 || std::fabs(grid[i2]) >= edge - 1e-12) r.diverged = true;
    return r;
}

} // namespace fil
