#pragma once

#include <array>

#include <Eigen/Dense>

#include "agc/policy.hpp"

namespace agc {

struct PiGains {
    double kp = 0.0;  // dimensionless
    double ki = 0.0;  // 1/s
};

/// Settings shared by the three AGC designs. Each step function reads the
/// subset it needs.
struct ControllerConfig {
    PiGains rega{0.0, 0.4};
    PiGains regd{1.0, 0.8};
    double tf_s = 4.0;   // ACE input filter
    double ta_s = 60.0;  // RegA low-pass G_f1
    double td_s = 10.0;  // RegD low-pass G_f2
    double ca_mw = 400.0;
    double cd_mw = 200.0;
    double neutrality_gain_per_h = 2.0;
    bool neutrality_enabled = true;
    bool antiwindup = true;
    double soc_ref_mwh = 25.0;

    void validate() const;
};

struct Command {
    double rega_mw = 0.0;
    double regd_mw = 0.0;
    bool operator==(const Command&) const = default;
};

struct ControllerState {
    double i_ace_mws = 0.0;
    double ace_filter_mw = 0.0;
    double rega_filter_mw = 0.0;
    double regd_filter_mw = 0.0;
    double regd_energy_mws = 0.0;
    Command last;  // previous step's commands, compared with the measured outputs

    bool operator==(const ControllerState&) const = default;
};

/// Measured actuator states fed back to the AGC.
struct Feedback {
    double p_g_mw = 0.0;
    double p_e_mw = 0.0;
    double soc_mwh = 0.0;
};

struct StepResult {
    ControllerState state;
    Command cmd;
};

/// I' = I + [P_ACE + (RegA - P_g) + (RegD - P_e)] dt
double antiwindup_update(double i_ace_mws, double p_ace_mw, double rega_mw, double p_g_mw, double regd_mw,
                         double p_e_mw, double dt_s);

/// PJM conditional-neutrality controller: PI on the filtered ACE, low-passed
/// RegA, RegD as the low-passed residual with optional energy-neutrality feedback.
StepResult pjm_step(const ControllerState& state, double p_ace_mw, const Feedback& fb, const ControllerConfig& cfg,
                    double dt_s);

/// Pre-set PI RegA and a PI + nonlinear SoC feedback RegD:
/// RegD = -K_P^D P - K_I^D I + f(e) (e - e_ref), saturated to +-C_d.
/// The SoC term restores the storage toward its reference (positive RegD discharges).
StepResult proposed_step(const ControllerState& state, double p_ace_mw, const Feedback& fb,
                         const SocPolicyTable& policy, const ControllerConfig& cfg, double dt_s);
StepResult proposed_step(const ControllerState& state, double p_ace_mw, const Feedback& fb, double soc_gain,
                         const ControllerConfig& cfg, double dt_s);

// ---------------------------------------------------------------------------
// LQR

/// Linear AGC model with state [P_ACE, RegA, K_I * I_ACE, e - e_ref] and input RegD.
struct LqrModel {
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    Eigen::Vector4d b = Eigen::Vector4d::Zero();
    Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
    double r = 1.0;
    Eigen::Vector4d k = Eigen::Vector4d::Zero();
};

struct LqrDesign {
    double m_inertia_s = 10.0;
    std::array<double, 4> q_diag{};  // all-zero means the default (1, (C_d/C_a)^2, 0, 1/E^2)
    double r = 1.0;
    bool literal_b = false;  // +1 SoC entry in B instead of the physical -1/3600
};

/// Builds A, B, Q, R for the given RegA settings and ratings; k is left zero.
LqrModel build_lqr_model(const ControllerConfig& cfg, const LqrDesign& design, double energy_mwh);

/// Stabilizing solution of A'P + PA - P B R^-1 B' P + Q = 0 by Newton-Kleinman.
/// Throws NumericError if no stabilizing gain can be found.
Eigen::MatrixXd solve_care(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& q,
                           const Eigen::MatrixXd& r);

/// Solves A'X + XA + C = 0.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c);

bool is_hurwitz(const Eigen::MatrixXd& a);

/// Fills model.k = R^-1 B' P from the CARE solution.
void synthesize_lqr_gain(LqrModel& model);

/// u = -k x
double lqr_law(const Eigen::Vector4d& k, const Eigen::Vector4d& x);

/// RegA as in pjm_step; RegD = sat(-k x) with x assembled from the filtered ACE,
/// the RegA command, K_I * I_ACE and the SoC deviation.
StepResult lqr_step(const ControllerState& state, double p_ace_mw, const Feedback& fb, const Eigen::Vector4d& k,
                    const ControllerConfig& cfg, double dt_s);

}  // namespace agc
