#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "agc/controllers.hpp"
#include "agc/plant.hpp"
#include "agc/policy.hpp"
#include "agc/signals.hpp"

namespace agc {

enum class ControllerKind { pjm, lqr, proposed };

const char* to_string(ControllerKind kind);
ControllerKind parse_controller_kind(const std::string& name);

/// Everything needed to instantiate one AGC for a closed-loop run.
struct ControllerSpec {
    ControllerKind kind = ControllerKind::pjm;
    ControllerConfig cfg;
    Eigen::Vector4d lqr_gain = Eigen::Vector4d::Zero();          // used when kind == lqr
    std::shared_ptr<const SocPolicyTable> policy;                 // required when kind == proposed
};

struct InitialConditions {
    double soc0_mwh = 0.0;
    ControllerState controller;
};

/// Per-step record of the closed loop.
struct SimTrace {
    std::vector<double> t_s;
    std::vector<double> ace_uncorrected_mw;
    std::vector<double> p_ace_mw;
    std::vector<double> rega_mw;
    std::vector<double> regd_mw;
    std::vector<double> p_g_mw;
    std::vector<double> p_e_mw;
    std::vector<double> soc_mwh;
    std::vector<double> i_ace_mws;

    std::size_t size() const { return t_s.size(); }
    void reserve(std::size_t n);
};

struct Metrics {
    double mean_sq_pace_mw2 = 0.0;
    double mean_sq_soc_dev_mwh2 = 0.0;
};

/// Closed loop: P_ACE[t] = ace[t] + P_g[t-1] + P_e[t-1]; the controller sees
/// P_ACE[t] and the previous-step unit outputs and SoC; the plant then steps.
SimTrace run_closed_loop(const AceSeries& ace, const ControllerSpec& spec, const PlantConfig& plant,
                         const InitialConditions& init);

Metrics compute_metrics(const SimTrace& trace, double soc_ref_mwh);

void write_trace_csv(std::ostream& out, const SimTrace& trace);
void save_trace_csv(const std::filesystem::path& path, const SimTrace& trace);

// ---------------------------------------------------------------------------
// Comparison harness

/// One storage configuration of the comparison grid.
struct BesRating {
    double power_mw = 200.0;
    double duration_min = 15.0;

    std::string label() const;  // e.g. "200MW/15min"
    double energy_mwh() const { return power_mw * duration_min / 60.0; }
};

/// The six storage configurations of the comparison grid.
std::vector<BesRating> default_ratings();

struct CompareCase {
    BesRating rating;
    std::vector<ControllerKind> controllers{ControllerKind::proposed, ControllerKind::lqr, ControllerKind::pjm};
    std::shared_ptr<const SocPolicyTable> policy;  // needed if the case lists the proposed controller
};

/// Settings common to every case; ratings replace cd_mw, the storage energy
/// and the SoC reference per case.
struct CompareSettings {
    PlantConfig plant;
    ControllerConfig controller;
    LqrDesign lqr;
    std::optional<Eigen::Vector4d> lqr_gain_override;
    double soc0_frac = 0.5;
    double round_trip = 0.85;
    int threads = 1;
};

struct ReportRow {
    std::string config;
    std::string controller;
    double mean_sq_pace_e3 = 0.0;
    double mean_sq_soc_dev = 0.0;
    std::string error;  // non-empty when the row could not be produced

    bool ok() const { return error.empty(); }
};

/// Plant and controller settings for one rating.
PlantConfig plant_for(const CompareSettings& s, const BesRating& rating);
ControllerSpec controller_for(const CompareSettings& s, const BesRating& rating, ControllerKind kind,
                             std::shared_ptr<const SocPolicyTable> policy);

/// Runs every (case, controller) pair on the same series from the same initial
/// conditions. Rows come back in case order, then controller order.
std::vector<ReportRow> compare(const AceSeries& ace_test, const std::vector<CompareCase>& cases,
                               const CompareSettings& settings);

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows);

}  // namespace agc
