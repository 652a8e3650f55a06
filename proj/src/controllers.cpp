#include "agc/controllers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "agc/errors.hpp"
#include "agc/lag.hpp"

namespace agc {

void ControllerConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(what);
    };
    require(std::isfinite(rega.kp) && std::isfinite(rega.ki) && rega.ki >= 0.0, "invalid RegA PI gains");
    require(std::isfinite(regd.kp) && std::isfinite(regd.ki) && regd.ki >= 0.0, "invalid RegD PI gains");
    require(ca_mw > 0.0 && cd_mw > 0.0, "regulation capacities must be positive");
    require(std::isfinite(tf_s) && std::isfinite(ta_s) && std::isfinite(td_s), "filter time constants must be finite");
    require(neutrality_gain_per_h >= 0.0, "neutrality gain must be non-negative");
    require(std::isfinite(soc_ref_mwh), "SoC reference must be finite");
}

double antiwindup_update(double i_ace_mws, double p_ace_mw, double rega_mw, double p_g_mw, double regd_mw,
                         double p_e_mw, double dt_s) {
    return i_ace_mws + (p_ace_mw + (rega_mw - p_g_mw) + (regd_mw - p_e_mw)) * dt_s;
}

namespace {

void require_finite(double p_ace_mw, const Feedback& fb) {
    if (!std::isfinite(p_ace_mw) || !std::isfinite(fb.p_g_mw) || !std::isfinite(fb.p_e_mw) ||
        !std::isfinite(fb.soc_mwh)) {
        throw std::invalid_argument("non-finite controller input");
    }
}

// Shared front end: ACE filter, integrator and the pre-set PI RegA path.
struct FrontEnd {
    double ace;    // filtered ACE
    double p_agc;  // -kp*ace - ki*I
    double rega;   // saturated RegA command
};

FrontEnd front_end(ControllerState& s, double p_ace_mw, const Feedback& fb, const ControllerConfig& cfg,
                   double dt_s) {
    require_finite(p_ace_mw, fb);
    s.ace_filter_mw = FirstOrderLag(cfg.tf_s, dt_s).step(s.ace_filter_mw, p_ace_mw);
    const double ace = s.ace_filter_mw;
    if (cfg.antiwindup) {
        s.i_ace_mws = antiwindup_update(s.i_ace_mws, ace, s.last.rega_mw, fb.p_g_mw, s.last.regd_mw, fb.p_e_mw, dt_s);
    } else {
        s.i_ace_mws += ace * dt_s;
    }
    const double p_agc = -cfg.rega.kp * ace - cfg.rega.ki * s.i_ace_mws;
    s.rega_filter_mw = FirstOrderLag(cfg.ta_s, dt_s).step(s.rega_filter_mw, p_agc);
    return {ace, p_agc, clamp_abs(s.rega_filter_mw, cfg.ca_mw)};
}

StepResult finish(ControllerState& s, double rega, double regd, double dt_s) {
    s.regd_energy_mws += regd * dt_s;
    s.last = {rega, regd};
    return {s, s.last};
}

}  // namespace

StepResult pjm_step(const ControllerState& state, double p_ace_mw, const Feedback& fb, const ControllerConfig& cfg,
                    double dt_s) {
    ControllerState s = state;
    const FrontEnd fe = front_end(s, p_ace_mw, fb, cfg, dt_s);
    s.regd_filter_mw = FirstOrderLag(cfg.td_s, dt_s).step(s.regd_filter_mw, fe.p_agc - fe.rega);
    double regd = s.regd_filter_mw;
    if (cfg.neutrality_enabled) {
        regd -= cfg.neutrality_gain_per_h * s.regd_energy_mws / 3600.0;
    }
    return finish(s, fe.rega, clamp_abs(regd, cfg.cd_mw), dt_s);
}

StepResult proposed_step(const ControllerState& state, double p_ace_mw, const Feedback& fb, double soc_gain,
                         const ControllerConfig& cfg, double dt_s) {
    ControllerState s = state;
    const FrontEnd fe = front_end(s, p_ace_mw, fb, cfg, dt_s);
    const double regd = -cfg.regd.kp * fe.ace - cfg.regd.ki * s.i_ace_mws + soc_gain * (fb.soc_mwh - cfg.soc_ref_mwh);
    return finish(s, fe.rega, clamp_abs(regd, cfg.cd_mw), dt_s);
}

StepResult proposed_step(const ControllerState& state, double p_ace_mw, const Feedback& fb,
                         const SocPolicyTable& policy, const ControllerConfig& cfg, double dt_s) {
    return proposed_step(state, p_ace_mw, fb, eval_policy(policy, fb.soc_mwh), cfg, dt_s);
}

double lqr_law(const Eigen::Vector4d& k, const Eigen::Vector4d& x) { return -k.dot(x); }

StepResult lqr_step(const ControllerState& state, double p_ace_mw, const Feedback& fb, const Eigen::Vector4d& k,
                    const ControllerConfig& cfg, double dt_s) {
    ControllerState s = state;
    const FrontEnd fe = front_end(s, p_ace_mw, fb, cfg, dt_s);
    const Eigen::Vector4d x(fe.ace, fe.rega, cfg.rega.ki * s.i_ace_mws, fb.soc_mwh - cfg.soc_ref_mwh);
    return finish(s, fe.rega, clamp_abs(lqr_law(k, x), cfg.cd_mw), dt_s);
}

}  // namespace agc
