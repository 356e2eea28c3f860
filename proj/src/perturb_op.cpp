#include "fil/perturb_op.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace fil {

WeightScheme WeightScheme::parse(const std::string& d) {
    auto eq = d.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("WeightScheme::parse: expected s=K or exp=C");
    std::string head = d.substr(0, eq);
    double v = std::stod(d.substr(eq + 1));
    if (head == "s") return polynomial(v);
    if (head == "exp") return exponential(v);
    throw std::invalid_argument("WeightScheme::parse: unknown scheme " + d);
}

std::string WeightScheme::descriptor() const {
    return (kind == Kind::Polynomial ? "s=" : "exp=") + std::to_string(param);
}

namespace {

struct TableView {
    const BasisTable& t;
    std::vector<size_t> x_idx, y_idx; // point indices for x_k, y_k, k = 0..N

    double a(long n, size_t p) const { return t.a(n, p).real(); }
    double ah(long n, size_t p) const { return t.a_hat(n, p).real(); }
};

TableView resolve_nodes(const NodePlan& plan, const BasisTable& table, long N) {
    TableView v{table, {}, {}};
    v.x_idx.resize(static_cast<size_t>(N + 1));
    v.y_idx.resize(static_cast<size_t>(N + 1));
    for (long k = 0; k <= N; ++k) {
        double xk = plan.x(k);
        double yk = plan.y(k);
        auto ix = table.find_real(xk);
        if (!ix)
            throw std::runtime_error("build_truncation: missing tabulated value at (n=*, x_" +
                                     std::to_string(k) + " = " + std::to_string(xk) + ")");
        auto iy = table.find_real(yk);
        if (!iy)
            throw std::runtime_error("build_truncation: missing tabulated value at (n=*, y_" +
                                     std::to_string(k) + " = " + std::to_string(yk) + ")");
        v.x_idx[static_cast<size_t>(k)] = *ix;
        v.y_idx[static_cast<size_t>(k)] = *iy;
    }
    return v;
}

} // namespace

OperatorTruncation build_truncation(const NodePlan& plan, const BasisTable& table,
                                    const WeightScheme& w, long N) {
    if (table.n_max < N)
        throw std::runtime_error("build_truncation: table n_max < N");
    TableView v = resolve_nodes(plan, table, N);

    OperatorTruncation op;
    op.N = N;
    op.scheme = w;
    op.plan = plan;
    long dim = 2 * N + 1;
    op.matrix.resize(dim, dim);

    std::vector<double> c(static_cast<size_t>(N + 1));
    for (long n = 0; n <= N; ++n) c[static_cast<size_t>(n)] = 1.0 / w.weight(n);

    size_t x0 = v.x_idx[0], y0 = v.y_idx[0];

    // column 0: input (1,0,0) carries F = F^ = a_0
    op.matrix(0, 0) = v.a(0, x0) + v.a(0, y0);
    for (long k = 1; k <= N; ++k) {
        op.matrix(k, 0) = v.a(0, v.x_idx[static_cast<size_t>(k)]) / c[static_cast<size_t>(k)];
        op.matrix(N + k, 0) = v.a(0, v.y_idx[static_cast<size_t>(k)]) / c[static_cast<size_t>(k)];
    }
    for (long n = 1; n <= N; ++n) {
        double cn = c[static_cast<size_t>(n)];
        // space column: F = c_n a_n, F^ = c_n a^_n
        op.matrix(0, n) = cn * (v.a(n, x0) + v.ah(n, y0));
        // frequency column: F = c_n a^_n, F^ = c_n a_n
        op.matrix(0, N + n) = cn * (v.ah(n, x0) + v.a(n, y0));
        for (long k = 1; k <= N; ++k) {
            double ck = c[static_cast<size_t>(k)];
            size_t xk = v.x_idx[static_cast<size_t>(k)], yk = v.y_idx[static_cast<size_t>(k)];
            op.matrix(k, n) = cn / ck * v.a(n, xk);
            op.matrix(N + k, n) = cn / ck * v.ah(n, yk);
            op.matrix(k, N + n) = cn / ck * v.ah(n, xk);
            op.matrix(N + k, N + n) = cn / ck * v.a(n, yk);
        }
    }
    return op;
}

double hs_defect(const OperatorTruncation& op) {
    Eigen::MatrixXd E = Eigen::MatrixXd::Identity(op.dim(), op.dim()) - op.matrix;
    return E.norm();
}

NeumannReport invert_neumann(const OperatorTruncation& op, double tol, int max_terms) {
    NeumannReport r;
    r.defect = hs_defect(op);
    if (!(r.defect < 1.0))
        throw std::runtime_error("invert_neumann: Neumann inapplicable, ||I-T||_HS = " +
                                 std::to_string(r.defect) + " >= 1");
    long d = op.dim();
    Eigen::MatrixXd E = Eigen::MatrixXd::Identity(d, d) - op.matrix;
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd sum = term;
    for (int k = 1; k <= max_terms; ++k) {
        term = term * E;
        sum += term;
        r.terms = k + 1;
        r.last_increment = term.norm();
        if (r.last_increment < tol) {
            r.inverse = std::move(sum);
            return r;
        }
    }
    throw std::runtime_error("invert_neumann: no convergence within max_terms, last increment " +
                             std::to_string(r.last_increment));
}

DirectInverse invert_direct(const OperatorTruncation& op) {
    DirectInverse r;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(op.matrix);
    r.inverse = lu.inverse();
    if (!r.inverse.allFinite())
        throw std::runtime_error("invert_direct: matrix singular to working precision");
    double n1 = op.matrix.cwiseAbs().colwise().sum().maxCoeff();
    double n1inv = r.inverse.cwiseAbs().colwise().sum().maxCoeff();
    r.condition_1norm = n1 * n1inv;
    if (r.condition_1norm > 1e15)
        throw std::runtime_error("invert_direct: matrix singular to working precision (cond ~ " +
                                 std::to_string(r.condition_1norm) + ")");
    return r;
}

PerturbedBasisCoeffs perturbed_coeffs(const Eigen::MatrixXd& inverse, const WeightScheme& w,
                                      long N, long n, bool frequency_side) {
    if (n < 1 || n > N) throw std::invalid_argument("perturbed_coeffs: 1 <= n <= N required");
    PerturbedBasisCoeffs out;
    out.n = n;
    long col = frequency_side ? N + n : n;
    double cn = 1.0 / w.weight(n);
    // delta_n input = e_n / c_n in the rescaled basis
    Eigen::VectorXd v = inverse.col(col) / cn;
    out.gamma.assign(static_cast<size_t>(N + 1), 0.0);
    out.gamma_tilde.assign(static_cast<size_t>(N + 1), 0.0);
    out.gamma[0] = v(0); // z slot multiplies a_0
    for (long k = 1; k <= N; ++k) {
        double ck = 1.0 / w.weight(k);
        out.gamma[static_cast<size_t>(k)] = ck * v(k);
        out.gamma_tilde[static_cast<size_t>(k)] = ck * v(N + k);
    }
    return out;
}

double eval_perturbed_basis(const PerturbedBasisCoeffs& c, const BasisTable& table, size_t p) {
    return eval_perturbed_basis_c(c, table, p).real();
}

std::complex<double> eval_perturbed_basis_c(const PerturbedBasisCoeffs& c, const BasisTable& table,
                                            size_t p) {
    std::complex<double> acc = c.gamma[0] * table.a(0, p);
    for (size_t k = 1; k < c.gamma.size(); ++k)
        acc += c.gamma[k] * table.a(static_cast<long>(k), p) +
               c.gamma_tilde[k] * table.a_hat(static_cast<long>(k), p);
    return acc;
}

void dump_operator_csv(const OperatorTruncation& op, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("dump_operator_csv: cannot open " + path);
    f << "row,col,value\n";
    for (long i = 0; i < op.dim(); ++i)
        for (long j = 0; j < op.dim(); ++j) f << i << ',' << j << ',' << op.matrix(i, j) << '\n';
}

std::string operator_summary_json(const OperatorTruncation& op, double defect, double condition,
                                  int neumann_terms) {
    nlohmann::ordered_json j;
    j["N"] = op.N;
    j["weight"] = op.scheme.descriptor();
    j["hs_defect"] = defect;
    j["condition_1norm"] = condition;
    j["neumann_terms"] = neumann_terms;
    return j.dump(2);
}

} // namespace fil
