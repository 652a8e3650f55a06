#include <doctest.h>

#include <cmath>
#include <random>

#include "agc/controllers.hpp"
#include "agc/errors.hpp"
#include "agc/policy.hpp"

using namespace agc;

namespace {

// Filters bypassed so the static maps are visible in one step.
ControllerConfig bypassed() {
    ControllerConfig c;
    c.tf_s = 0.0;
    c.ta_s = 0.0;
    c.td_s = 0.0;
    return c;
}

}  // namespace

TEST_CASE("pjm zero fixed point") {
    const ControllerConfig cfg;
    const auto r = pjm_step({}, 0.0, {}, cfg, 2.0);
    CHECK(r.cmd == Command{0.0, 0.0});
    CHECK(r.state == ControllerState{});
}

TEST_CASE("pjm splits the AGC request between RegA and RegD") {
    ControllerConfig cfg = bypassed();
    cfg.rega = {1.0, 0.0};
    cfg.neutrality_enabled = false;
    cfg.ca_mw = 400.0;
    cfg.cd_mw = 200.0;
    const auto r = pjm_step({}, -600.0, {}, cfg, 2.0);
    CHECK(r.cmd.rega_mw == 400.0);
    CHECK(r.cmd.regd_mw == 200.0);

    const auto small = pjm_step({}, -100.0, {}, cfg, 2.0);
    CHECK(small.cmd.rega_mw == 100.0);
    CHECK(small.cmd.regd_mw == 0.0);
}

TEST_CASE("pjm RegA low-pass uses the exact discretization") {
    ControllerConfig cfg;
    cfg.tf_s = 0.0;
    cfg.rega = {1.0, 0.0};
    const auto r = pjm_step({}, -100.0, {}, cfg, 2.0);
    CHECK(r.cmd.rega_mw == doctest::Approx(100.0 * (1.0 - std::exp(-2.0 / 60.0))).epsilon(1e-14));
}

TEST_CASE("pjm neutrality shrinks the mean RegD") {
    auto mean_regd = [](double gain) {
        ControllerConfig cfg;
        cfg.neutrality_gain_per_h = gain;
        ControllerState s;
        Feedback fb;
        double sum = 0.0;
        const int n = 3600;
        for (int i = 0; i < n; ++i) {
            const auto r = pjm_step(s, -80.0, fb, cfg, 2.0);
            s = r.state;
            fb.p_g_mw = r.cmd.rega_mw;
            fb.p_e_mw = r.cmd.regd_mw;
            sum += r.cmd.regd_mw;
        }
        return sum / n;
    };
    const double low = mean_regd(0.5);
    const double high = mean_regd(8.0);
    CHECK(std::abs(high) < std::abs(low));
}

TEST_CASE("anti-windup integrator arithmetic") {
    CHECK(antiwindup_update(10.0, 7.0, 100.0, 100.0, 5.0, 5.0, 2.0) == 10.0 + 7.0 * 2.0);
    CHECK(antiwindup_update(0.0, 0.0, 100.0, 60.0, 3.0, 3.0, 2.0) == 80.0);
    CHECK(antiwindup_update(0.0, -50.0, 0.0, 0.0, -50.0, 0.0, 2.0) == -200.0);
}

TEST_CASE("anti-windup toggle in the controller") {
    ControllerConfig cfg = bypassed();
    ControllerState s;
    s.last = {100.0, 0.0};
    const Feedback fb{60.0, 0.0, 25.0};
    CHECK(pjm_step(s, 0.0, fb, cfg, 2.0).state.i_ace_mws == 80.0);
    cfg.antiwindup = false;
    CHECK(pjm_step(s, 0.0, fb, cfg, 2.0).state.i_ace_mws == 0.0);
}

TEST_CASE("proposed controller examples") {
    ControllerConfig cfg = bypassed();
    cfg.regd = {1.0, 0.0};
    const Feedback at_ref{0.0, 0.0, cfg.soc_ref_mwh};

    CHECK(proposed_step({}, 10.0, at_ref, 0.0, cfg, 2.0).cmd.regd_mw == -10.0);
    CHECK(proposed_step({}, 0.0, at_ref, 3.0, cfg, 2.0).cmd == Command{0.0, 0.0});

    // over-full storage discharges
    const Feedback over{0.0, 0.0, cfg.soc_ref_mwh + 2.0};
    CHECK(proposed_step({}, 0.0, over, 3.0, cfg, 2.0).cmd.regd_mw == 6.0);
    const Feedback under{0.0, 0.0, cfg.soc_ref_mwh - 2.0};
    CHECK(proposed_step({}, 0.0, under, 3.0, cfg, 2.0).cmd.regd_mw == -6.0);
}

TEST_CASE("proposed controller integral path and saturation") {
    ControllerConfig cfg = bypassed();
    cfg.regd = {1.0, 0.8};
    const Feedback at_ref{0.0, 0.0, cfg.soc_ref_mwh};
    // integrator updates first: I = 10 * 2
    CHECK(proposed_step({}, 10.0, at_ref, 0.0, cfg, 2.0).cmd.regd_mw == doctest::Approx(-10.0 - 0.8 * 20.0));
    CHECK(proposed_step({}, 1e4, at_ref, 0.0, cfg, 2.0).cmd.regd_mw == -cfg.cd_mw);
}

TEST_CASE("proposed controller reads its gain from the table") {
    ControllerConfig cfg = bypassed();
    SocPolicyTable table = SocPolicyTable::uniform(50.0, 5, 0.0);
    table.gains = {1.0, 2.0, 3.0, 4.0, 5.0};
    const Feedback fb{0.0, 0.0, 45.0};
    const auto a = proposed_step({}, 0.0, fb, table, cfg, 2.0);
    const auto b = proposed_step({}, 0.0, fb, 5.0, cfg, 2.0);
    CHECK(a.cmd == b.cmd);
    CHECK(a.cmd.regd_mw == 5.0 * (45.0 - cfg.soc_ref_mwh));
}

TEST_CASE("controller rejects non-finite inputs and bad settings") {
    const ControllerConfig cfg;
    CHECK_THROWS_AS(pjm_step({}, NAN, {}, cfg, 2.0), std::invalid_argument);
    ControllerConfig bad;
    bad.cd_mw = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ControllerConfig{};
    bad.rega.ki = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("lqr law substitutions") {
    const Eigen::Vector4d k(0.4309, -0.0339, 0.1210, 8.0);
    CHECK(lqr_law(k, Eigen::Vector4d(1, 0, 0, 0)) == doctest::Approx(-0.4309));
    CHECK(lqr_law(k, Eigen::Vector4d::Zero()) == 0.0);
    CHECK(lqr_law(k, Eigen::Vector4d(0, 0, 0, 1)) == -8.0);
}

TEST_CASE("lqr step assembles the state vector") {
    ControllerConfig cfg = bypassed();
    cfg.rega = {0.0, 0.5};
    const Eigen::Vector4d k(1.0, 2.0, 3.0, 4.0);
    const Feedback fb{0.0, 0.0, cfg.soc_ref_mwh + 1.5};
    const auto r = lqr_step({}, 3.0, fb, k, cfg, 2.0);
    const double i = 3.0 * 2.0;
    const double rega = -0.5 * i;
    CHECK(r.cmd.rega_mw == rega);
    CHECK(r.cmd.regd_mw == doctest::Approx(-(1.0 * 3.0 + 2.0 * rega + 3.0 * 0.5 * i + 4.0 * 1.5)));
}
