#include <cmath>
#include <string>

#include "agc/controllers.hpp"
#include "agc/errors.hpp"

namespace agc {

LqrModel build_lqr_model(const ControllerConfig& cfg, const LqrDesign& design, double energy_mwh) {
    if (!(design.m_inertia_s > 0.0) || !(cfg.ta_s > 0.0) || !(design.r > 0.0) || !(energy_mwh > 0.0)) {
        throw ConfigError("LQR model needs positive M, T_a, r and E");
    }
    const double m = design.m_inertia_s;
    const double ta = cfg.ta_s;
    LqrModel model;
    // clang-format off
    model.a << -1.0 / m,           1.0 / m,   0.0,       0.0,
               -cfg.rega.kp / ta, -1.0 / ta, -1.0 / ta,  0.0,
                cfg.rega.ki,       0.0,       0.0,       0.0,
                0.0,               0.0,       0.0,       0.0;
    // clang-format on
    model.b << 1.0 / m, 0.0, 0.0, design.literal_b ? 1.0 : -1.0 / 3600.0;

    std::array<double, 4> q = design.q_diag;
    if (q == std::array<double, 4>{}) {
        const double ratio = cfg.cd_mw / cfg.ca_mw;
        q = {1.0, ratio * ratio, 0.0, 1.0 / (energy_mwh * energy_mwh)};
    }
    model.q = Eigen::Vector4d(q[0], q[1], q[2], q[3]).asDiagonal();
    model.r = design.r;
    return model;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c) {
    const Eigen::Index n = a.rows();
    const Eigen::Index nn = n * n;
    // vec(A'X + XA) = (I (x) A' + A' (x) I) vec(X), column-major vec.
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(nn, nn);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::Index row = j * n + i;
            for (Eigen::Index k = 0; k < n; ++k) {
                op(row, j * n + k) += a(k, i);  // (A'X)(i,j) = sum_k A(k,i) X(k,j)
                op(row, k * n + i) += a(k, j);  // (XA)(i,j)  = sum_k X(i,k) A(k,j)
            }
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(op);
    if (!lu.isInvertible()) throw NumericError("singular Lyapunov operator");
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(c.data(), nn);
    Eigen::VectorXd x = lu.solve(rhs);
    return Eigen::Map<Eigen::MatrixXd>(x.data(), n, n);
}

bool is_hurwitz(const Eigen::MatrixXd& a) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    return (es.eigenvalues().real().array() < 0.0).all();
}

namespace {

double spectral_abscissa(const Eigen::MatrixXd& a) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    return es.eigenvalues().real().maxCoeff();
}

struct NewtonResult {
    Eigen::MatrixXd p;
    Eigen::MatrixXd k;
};

// Newton-Kleinman from a stabilizing gain k0 for the pair (a, b).
NewtonResult newton_kleinman(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& q,
                             const Eigen::MatrixXd& r, Eigen::MatrixXd k) {
    const Eigen::MatrixXd r_inv_bt = r.ldlt().solve(b.transpose());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(a.rows(), a.cols());
    for (int iter = 0; iter < 200; ++iter) {
        const Eigen::MatrixXd ac = a - b * k;
        Eigen::MatrixXd next = solve_lyapunov(ac, q + k.transpose() * r * k);
        next = 0.5 * (next + next.transpose()).eval();
        const double change = (next - p).norm();
        p = next;
        k = r_inv_bt * p;
        if (iter > 0 && change <= 1e-14 * (1.0 + p.norm())) break;
    }
    return {p, k};
}

}  // namespace

Eigen::MatrixXd solve_care(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& q,
                           const Eigen::MatrixXd& r) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n || b.rows() != n || q.rows() != n || q.cols() != n || r.rows() != b.cols() ||
        r.cols() != b.cols()) {
        throw ConfigError("CARE dimension mismatch");
    }
    if (r.ldlt().vectorD().minCoeff() <= 0.0) throw ConfigError("CARE input cost must be positive definite");

    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    // Shift continuation: K = 0 stabilizes a - s I for s beyond the spectral
    // abscissa; walk s down to zero, warm-starting each solve from the last gain.
    const double scale = std::max(1.0, a.norm());
    double shift = std::max(0.0, spectral_abscissa(a) + 0.1 * scale);
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(b.cols(), n);
    NewtonResult sol{};
    for (int stage = 0; stage < 500; ++stage) {
        sol = newton_kleinman(a - shift * eye, b, q, r, k);
        k = sol.k;
        if (shift == 0.0) break;
        const double margin = -spectral_abscissa(a - shift * eye - b * k);
        if (!(margin > 1e-12 * scale)) throw NumericError("CARE: pair (A, B) is not stabilizable");
        shift = shift - 0.5 * margin <= 1e-9 * scale ? 0.0 : shift - 0.5 * margin;
        if (shift == 0.0 && !is_hurwitz(a - b * k)) {
            throw NumericError("CARE: continuation failed to reach a stabilizing gain");
        }
    }
    // Newton steps in defect-correction form: A_c' dP + dP A_c + Res(P) = 0
    const auto ldlt = r.ldlt();
    auto riccati_residual = [&](const Eigen::MatrixXd& x) {
        const Eigen::MatrixXd xb = x * b;
        return (a.transpose() * x + x * a - xb * ldlt.solve(xb.transpose()) + q).eval();
    };
    auto closed_loop = [&](const Eigen::MatrixXd& x) { return (a - b * ldlt.solve(b.transpose() * x)).eval(); };
    Eigen::MatrixXd p = sol.p;
    Eigen::MatrixXd residual = riccati_residual(p);
    for (int iter = 0; iter < 10; ++iter) {
        const Eigen::MatrixXd ac = closed_loop(p);
        if (!is_hurwitz(ac)) break;
        Eigen::MatrixXd next = p + solve_lyapunov(ac, residual);
        next = 0.5 * (next + next.transpose()).eval();
        const Eigen::MatrixXd next_residual = riccati_residual(next);
        if (!(next_residual.norm() < residual.norm())) break;
        p = next;
        residual = next_residual;
    }
    if (!is_hurwitz(closed_loop(p))) throw NumericError("CARE: closed loop is not Hurwitz");
    if (!(residual.norm() <= 1e-8 * (1.0 + q.norm()))) {
        throw NumericError("CARE: residual " + std::to_string(residual.norm()) + " above tolerance");
    }
    return p;
}

void synthesize_lqr_gain(LqrModel& model) {
    const Eigen::MatrixXd b = model.b;
    const Eigen::MatrixXd r = Eigen::MatrixXd::Constant(1, 1, model.r);
    const Eigen::MatrixXd p = solve_care(model.a, b, model.q, r);
    model.k = (b.transpose() * p / model.r).transpose();
}

}  // namespace agc
