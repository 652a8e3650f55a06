#include <doctest.h>

#include <cmath>
#include <random>

#include "agc/controllers.hpp"
#include "agc/errors.hpp"

using namespace agc;
using Eigen::MatrixXd;

namespace {

double residual(const MatrixXd& a, const MatrixXd& b, const MatrixXd& q, const MatrixXd& r, const MatrixXd& p) {
    return (a.transpose() * p + p * a - p * b * r.inverse() * b.transpose() * p + q).norm();
}

MatrixXd scalar(double v) { return MatrixXd::Constant(1, 1, v); }

}  // namespace

TEST_CASE("care scalar cases") {
    const MatrixXd p1 = solve_care(scalar(-1.0), scalar(1.0), scalar(1.0), scalar(1.0));
    CHECK(std::abs(p1(0, 0) - (std::sqrt(2.0) - 1.0)) <= 1e-10);
    const MatrixXd p2 = solve_care(scalar(0.0), scalar(1.0), scalar(1.0), scalar(1.0));
    CHECK(std::abs(p2(0, 0) - 1.0) <= 1e-10);
    const MatrixXd p3 = solve_care(scalar(3.0), scalar(2.0), scalar(5.0), scalar(0.5));
    // 2 a p - (b^2/r) p^2 + q = 0, positive root
    const double c = 4.0 / 0.5;
    CHECK(std::abs(p3(0, 0) - (6.0 + std::sqrt(36.0 + 4.0 * c * 5.0)) / (2.0 * c)) <= 1e-10);
}

TEST_CASE("care rejects an unstabilizable pair") {
    MatrixXd a(2, 2);
    a << 1.0, 0.0, 0.0, -1.0;
    MatrixXd b(2, 1);
    b << 0.0, 1.0;
    CHECK_THROWS_AS(solve_care(a, b, MatrixXd::Identity(2, 2), scalar(1.0)), NumericError);
}

TEST_CASE("care dimension checks") {
    CHECK_THROWS(solve_care(MatrixXd::Zero(2, 2), MatrixXd::Zero(3, 1), MatrixXd::Identity(2, 2), scalar(1.0)));
}

TEST_CASE("lyapunov solve") {
    MatrixXd a(2, 2);
    a << -1.0, 2.0, 0.0, -3.0;
    const MatrixXd c = MatrixXd::Identity(2, 2);
    const MatrixXd x = solve_lyapunov(a, c);
    CHECK((a.transpose() * x + x * a + c).norm() <= 1e-12);
}

TEST_CASE("care on the AGC model") {
    const ControllerConfig cfg;
    for (bool literal : {false, true}) {
        LqrDesign design;
        design.literal_b = literal;
        LqrModel m = build_lqr_model(cfg, design, 50.0);
        synthesize_lqr_gain(m);
        const MatrixXd p = solve_care(m.a, m.b, m.q, scalar(m.r));
        CHECK(residual(m.a, m.b, m.q, scalar(m.r), p) <= 1e-8 * (1.0 + m.q.norm()));
        CHECK(is_hurwitz(m.a - m.b * m.k.transpose()));
    }
}

TEST_CASE("agc model default weights") {
    ControllerConfig cfg;
    cfg.ca_mw = 400.0;
    cfg.cd_mw = 200.0;
    const LqrModel m = build_lqr_model(cfg, LqrDesign{}, 50.0);
    CHECK(m.q(0, 0) == 1.0);
    CHECK(m.q(1, 1) == 0.25);
    CHECK(m.q(2, 2) == 0.0);
    CHECK(m.q(3, 3) == 1.0 / 2500.0);
    CHECK(m.b(3) == -1.0 / 3600.0);
}

TEST_CASE("care on random stabilizable systems") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 2 + trial % 4;
        MatrixXd a(dim, dim), b(dim, 2), l(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                a(i, j) = n(rng);
                l(i, j) = n(rng);
            }
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < 2; ++j) b(i, j) = n(rng);
        const MatrixXd q = l * l.transpose() + 0.1 * MatrixXd::Identity(dim, dim);
        const MatrixXd r = MatrixXd::Identity(2, 2);
        const MatrixXd p = solve_care(a, b, q, r);
        CHECK(residual(a, b, q, r, p) <= 1e-8 * (1.0 + q.norm()));
        CHECK(is_hurwitz(a - b * r.inverse() * b.transpose() * p));
    }
}

TEST_CASE("lqr gain minimizes the quadratic cost among nearby stabilizing gains") {
    // Cost of gain k from x0 is x0' X x0 with (A-bk)'X + X(A-bk) + Q + k' r k = 0.
    const ControllerConfig cfg;
    LqrModel m = build_lqr_model(cfg, LqrDesign{}, 50.0);
    synthesize_lqr_gain(m);
    auto cost = [&](const Eigen::Vector4d& k, const Eigen::Vector4d& x0) {
        const MatrixXd ac = m.a - m.b * k.transpose();
        const MatrixXd x = solve_lyapunov(ac, m.q + k * m.r * k.transpose());
        return x0.dot(x * x0);
    };
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(0.0, 1.0);
    const Eigen::Vector4d x0(30.0, -10.0, 5.0, 2.0);
    const double best = cost(m.k, x0);
    int compared = 0;
    for (int i = 0; i < 50; ++i) {
        Eigen::Vector4d k = m.k;
        for (int j = 0; j < 4; ++j) k(j) *= 1.0 + 0.05 * n(rng);
        if (!is_hurwitz(m.a - m.b * k.transpose())) continue;
        ++compared;
        CHECK(best <= cost(k, x0) * (1.0 + 1e-9));
    }
    CHECK(compared > 0);
}
