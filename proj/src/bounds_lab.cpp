#include "fil/bounds_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace fil {

namespace {

// local maxima of |values| between consecutive sqrt(m) zeros
std::vector<std::pair<double, double>> envelope_peaks(const std::vector<double>& xs,
                                                      const std::vector<double>& vals) {
    std::vector<std::pair<double, double>> peaks;
    long m = 0;
    size_t i = 0;
    while (i < xs.size()) {
        double lo = std::sqrt(static_cast<double>(m));
        double hi = std::sqrt(static_cast<double>(m + 1));
        double best = 0.0, bx = 0.5 * (lo + hi);
        bool any = false;
        for (; i < xs.size() && xs[i] < hi; ++i) {
            if (xs[i] < lo) continue;
            if (std::fabs(vals[i]) > best) {
                best = std::fabs(vals[i]);
                bx = xs[i];
                any = true;
            }
        }
        if (any && best > 0) peaks.emplace_back(bx, best);
        ++m;
    }
    return peaks;
}

struct LsqLine {
    double a = 0.0, b = 0.0, r2 = 0.0; // y ~ a + b x
};

LsqLine lsq(const std::vector<double>& x, const std::vector<double>& y) {
    size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    LsqLine l;
    double d = n * sxx - sx * sx;
    if (d == 0) return l;
    l.b = (n * sxy - sx * sy) / d;
    l.a = (sy - l.b * sx) / n;
    double sse = 0, sst = 0, ym = sy / n;
    for (size_t i = 0; i < n; ++i) {
        double e = y[i] - (l.a + l.b * x[i]);
        sse += e * e;
        sst += (y[i] - ym) * (y[i] - ym);
    }
    l.r2 = sst > 0 ? 1.0 - sse / sst : 1.0;
    return l;
}

} // namespace

EnvelopeFit decay_fit(BasisContext& ctx, long n_lo, long n_hi, const std::vector<double>& x_grid) {
    EnvelopeFit fit;
    fit.claim = "two-regime decay envelope for a_n, a_n'";
    fit.method = "per-band peaks; (c,C) log-domain least squares over a C scan; A lifted to cover";
    if (n_hi < n_lo || x_grid.size() < 16) {
        fit.degenerate = true;
        return fit;
    }
    fit.ranges = "n in [" + std::to_string(n_lo) + "," + std::to_string(n_hi) + "], x in [" +
                 std::to_string(x_grid.front()) + "," + std::to_string(x_grid.back()) + "]";

    // collect peak data for |a_n| and |a_n'| (central differences at h=1e-3)
    struct Pt {
        long n;
        double x, v;
    };
    std::vector<Pt> data;
    const double h = 1e-3;
    for (long n = n_lo; n <= n_hi; ++n) {
        std::vector<double> va(x_grid.size()), vd(x_grid.size());
        for (size_t i = 0; i < x_grid.size(); ++i) {
            va[i] = ctx.an(n, x_grid[i]);
            vd[i] = (ctx.an(n, x_grid[i] + h) - ctx.an(n, x_grid[i] - h)) / (2 * h);
        }
        for (auto& [x, v] : envelope_peaks(x_grid, va)) data.push_back({n, x, v});
        for (auto& [x, v] : envelope_peaks(x_grid, vd)) data.push_back({n, x, v});
    }
    if (data.size() < 8) {
        fit.degenerate = true;
        return fit;
    }

    auto shape_log = [](double x, double n, double c, double C) {
        double amp = 0.75 * std::log(n) + 3.0 * std::log(std::log(1.0 + n) + 1e-30);
        double e1 = -c * x * x / n, e2 = -c * x;
        return amp + ((x <= C * n) ? e1 : e2);
    };

    double best_c = 0, best_C = 1, best_rms = 1e300, best_logA = 0;
    for (double C : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0}) {
        // least squares for (logA, c): log v = logA + amp(n) + c * s with
        // s = -x^2/n or -x depending on the branch
        std::vector<double> S, Y;
        for (auto& p : data) {
            double amp = 0.75 * std::log(static_cast<double>(p.n)) +
                         3.0 * std::log(std::log(1.0 + p.n) + 1e-30);
            double s = (p.x <= C * p.n) ? -p.x * p.x / p.n : -p.x;
            S.push_back(s);
            Y.push_back(std::log(p.v) - amp);
        }
        LsqLine l = lsq(S, Y);
        if (l.b <= 0) continue; // decay rate must be positive
        double sse = 0;
        for (size_t i = 0; i < S.size(); ++i) {
            double e = Y[i] - (l.a + l.b * S[i]);
            sse += e * e;
        }
        double rms = std::sqrt(sse / S.size());
        if (rms < best_rms) {
            best_rms = rms;
            best_c = l.b;
            best_C = C;
            best_logA = l.a;
        }
    }
    if (best_c <= 0) {
        fit.degenerate = true;
        return fit;
    }

    // lift A to cover every data point, then re-scan for the reported violation
    double lift = 0;
    for (auto& p : data) {
        double env = best_logA + shape_log(p.x, static_cast<double>(p.n), best_c, best_C);
        lift = std::max(lift, std::log(p.v) - env);
    }
    best_logA += lift;
    double viol = 0;
    for (auto& p : data) {
        double env = std::exp(best_logA + shape_log(p.x, static_cast<double>(p.n), best_c, best_C));
        viol = std::max(viol, (p.v - env) / env);
    }
    fit.constants = {{"c", best_c}, {"C", best_C}, {"A", std::exp(best_logA)}, {"rms_log", best_rms}};
    fit.max_violation = viol;
    return fit;
}

EnvelopeFit a0_rate_fit(BasisContext& ctx, double x_lo, double x_hi) {
    EnvelopeFit fit;
    fit.claim = "a_0 exponential decay rate";
    fit.method = "log-linear least squares at inter-node extrema x = sqrt(m + 1/2)";
    fit.ranges = "[" + std::to_string(x_lo) + "," + std::to_string(x_hi) + "]";
    std::vector<double> X, Y;
    for (long m = 0;; ++m) {
        double x = std::sqrt(static_cast<double>(m) + 0.5);
        if (x > x_hi) break;
        if (x < x_lo) continue;
        double v = std::fabs(ctx.an(0, x));
        if (v <= 0) continue;
        X.push_back(x);
        Y.push_back(std::log(v));
    }
    if (X.size() < 4) {
        fit.degenerate = true;
        return fit;
    }
    LsqLine l = lsq(X, Y);
    fit.constants = {{"rate", -l.b}, {"A", std::exp(l.a)}, {"r2", l.r2}};
    return fit;
}

GrowthEstimate growth_on_disks(const std::function<std::complex<double>(std::complex<double>)>& fn,
                               const std::vector<double>& radii, int samples_per_circle) {
    GrowthEstimate g;
    g.radii = radii;
    for (double r : radii) {
        double m = 0.0;
        for (int i = 0; i < samples_per_circle; ++i) {
            double th = 2.0 * M_PI * (i + 0.5) / samples_per_circle;
            std::complex<double> z = r * std::exp(std::complex<double>(0.0, th));
            double v = std::abs(fn(z));
            if (!std::isfinite(v)) {
                g.overflowed = true;
                continue;
            }
            m = std::max(m, v);
        }
        if (m <= 0) {
            g.degenerate = true;
            g.log_max.push_back(-1e300);
            continue;
        }
        g.log_max.push_back(std::log(m));
    }
    if (g.degenerate || g.radii.size() < 2) {
        g.degenerate = true;
        return g;
    }
    size_t k = g.radii.size();
    g.order = (std::log(g.log_max[k - 1]) - std::log(g.log_max[k - 2])) /
              (std::log(g.radii[k - 1]) - std::log(g.radii[k - 2]));
    g.type = g.log_max[k - 1] / (g.radii[k - 1] * g.radii[k - 1]);
    // regression of log M against r^2 as a growth-slope summary
    std::vector<double> R2, LM;
    for (size_t i = 0; i < k; ++i) {
        R2.push_back(g.radii[i] * g.radii[i]);
        LM.push_back(g.log_max[i]);
    }
    g.growth_slope_r2 = lsq(R2, LM).b;
    return g;
}

GrowthInN bn_growth_in_n(BasisContext& ctx, long n_hi, double r0, int samples_per_circle) {
    GrowthInN out;
    std::vector<double> N, L;
    for (long n = 0; n <= n_hi; ++n) {
        double m = 0.0;
        for (int i = 0; i < samples_per_circle; ++i) {
            double th = 2.0 * M_PI * (i + 0.5) / samples_per_circle;
            std::complex<double> z = r0 * std::exp(std::complex<double>(0.0, th));
            m = std::max(m, std::abs(ctx.bn(n, +1, z)));
        }
        out.log_max.push_back(std::log(m));
        N.push_back(static_cast<double>(n));
        L.push_back(std::log(m));
    }
    LsqLine l = lsq(N, L);
    out.slope = l.b;
    out.r2 = l.r2;
    return out;
}

EnvelopeFit lower_bound_check(BasisContext& ctx, long n, int sign, double x_lo, double x_hi) {
    EnvelopeFit fit;
    fit.claim = "lower bound |b_n(x)| >= c_n dist(x, sqrt(N)) e^{-c|x|}";
    fit.ranges = "[" + std::to_string(x_lo) + "," + std::to_string(x_hi) + "]";
    fit.method = "c from the decay slope of |b|/dist at mid-band points; c_n = min ratio";
    if (n == 0 && sign < 0) {
        fit.degenerate = true; // b_0^- == 0: vacuous, excluded
        return fit;
    }
    std::vector<double> X, Y;
    for (long m = 0;; ++m) {
        // sample three off-node offsets per band to respect dist(x, sqrt(N))
        for (double f : {0.25, 0.5, 0.75}) {
            double x = std::sqrt(static_cast<double>(m) + f);
            if (x < x_lo || x > x_hi) continue;
            double b = std::fabs(ctx.bn(n, sign, x));
            double lo = std::sqrt(static_cast<double>(m)), hi = std::sqrt(static_cast<double>(m + 1));
            double dist = std::min(x - lo, hi - x);
            if (b <= 0 || dist <= 0) continue;
            X.push_back(x);
            Y.push_back(std::log(b / dist));
        }
        if (std::sqrt(static_cast<double>(m)) > x_hi) break;
    }
    if (X.size() < 6) {
        fit.degenerate = true;
        return fit;
    }
    LsqLine l = lsq(X, Y);
    double c = std::max(1e-3, -l.b);
    double cn = 1e300;
    for (size_t i = 0; i < X.size(); ++i) cn = std::min(cn, std::exp(Y[i] + c * X[i]));
    cn *= 0.99;
    fit.constants = {{"c", c}, {"c_n", cn}, {"r2", l.r2}};
    fit.max_violation = 0.0; // c_n chosen below every sampled ratio
    return fit;
}

AnalyticityReport analyticity_demo(BasisContext& ctx, const NodePlan& plan, const WeightScheme& w,
                                   const TestFunction& f, double alpha,
                                   const std::vector<double>& radii, int samples_per_circle) {
    if (w.kind != WeightScheme::Kind::Exponential)
        throw std::invalid_argument("analyticity_demo: exponential weight scheme required");
    long N = plan.N;

    std::vector<double> pts;
    pts.reserve(2 * static_cast<size_t>(N) + 2);
    for (long k = 0; k <= N; ++k) {
        pts.push_back(plan.x(k));
        pts.push_back(plan.y(k));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    BasisTable table = tabulate(ctx, N, pts, {}, 1);

    OperatorTruncation op = build_truncation(plan, table, w, N);
    DirectInverse inv = invert_direct(op);

    // fitted coefficient decay rate: |gamma_{n,k}| <~ e^{c(n-k)}
    std::vector<double> D, L;
    for (long n = 1; n <= std::min<long>(N, 12); ++n) {
        auto co = perturbed_coeffs(inv.inverse, w, N, n);
        for (long k = 1; k <= N; ++k) {
            double g = std::fabs(co.gamma[static_cast<size_t>(k)]);
            if (g > 1e-14 && k != n) {
                D.push_back(static_cast<double>(n - k));
                L.push_back(std::log(g));
            }
        }
    }
    AnalyticityReport rep;
    rep.gamma_decay_rate = D.size() >= 4 ? lsq(D, L).b : 0.0;

    // absolute-convergence majorant sum_n e^{(c-alpha) n}
    double margin = 0.0;
    for (long n = 0; n <= N; ++n) margin += std::exp((rep.gamma_decay_rate - alpha) * n);
    rep.convergence_margin = margin;
    if (rep.gamma_decay_rate >= alpha)
        throw std::runtime_error("analyticity_demo: alpha below the coefficient decay rate (majorant diverges)");

    // samples and synthesis of the complex extension through the inverse
    Eigen::VectorXd s = sample(f, plan);
    Eigen::VectorXd sw(2 * N + 1);
    sw(0) = s(0);
    for (long k = 1; k <= N; ++k) {
        double ck = 1.0 / w.weight(k);
        sw(k) = s(k) / ck;
        sw(N + k) = s(N + k) / ck;
    }
    Eigen::VectorXd u = inv.inverse * sw;
    Eigen::VectorXd r(2 * N + 1);
    r(0) = u(0);
    for (long k = 1; k <= N; ++k) {
        double ck = 1.0 / w.weight(k);
        r(k) = ck * u(k);
        r(N + k) = ck * u(N + k);
    }

    auto F = [&](std::complex<double> z) {
        std::complex<double> acc = r(0) * ctx.an(0L, z);
        for (long k = 1; k <= N; ++k)
            acc += r(k) * ctx.an(k, z) + r(N + k) * ctx.an_hat(k, z);
        return acc;
    };
    rep.growth = growth_on_disks(F, radii, samples_per_circle);

    if (f.family != TestFunction::Family::Zero) {
        double maxerr = 0.0;
        for (double rr : {0.5, 1.0, 1.5}) {
            for (int i = 0; i < 16; ++i) {
                double th = 2.0 * M_PI * (i + 0.5) / 16;
                std::complex<double> z = rr * std::exp(std::complex<double>(0.0, th));
                maxerr = std::max(maxerr, std::abs(F(z) - f.value(z)));
            }
        }
        rep.max_abs_error = maxerr;
    }
    return rep;
}

} // namespace fil
