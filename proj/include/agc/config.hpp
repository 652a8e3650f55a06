#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "agc/controllers.hpp"
#include "agc/engine.hpp"
#include "agc/hindsight.hpp"
#include "agc/plant.hpp"

namespace agc {

/// Flat key = value run configuration. Every key can also be given as a
/// command-line flag (underscores become dashes); flags win over the file.
struct RunConfig {
    std::string controller = "pjm";
    // AGC
    double kp = 0.0;
    double ki = 0.4;
    double kp_d = 1.0;
    double ki_d = 0.8;
    double tf_s = 4.0;
    double ta_s = 60.0;
    double td_s = 10.0;
    double neutrality_gain = 2.0;  // 1/h
    bool neutrality_enabled = true;
    bool antiwindup = true;
    // LQR
    std::optional<std::array<double, 4>> lqr_gain;
    double m_inertia = 10.0;
    std::array<double, 4> q_diag{};  // zeros select (1, (C_d/C_a)^2, 0, 1/E^2)
    double r = 1.0;
    bool lqr_literal_b = false;
    // plant
    double dt_s = 2.0;
    double ca_mw = 400.0;
    double cd_mw = 200.0;
    double duration_min = 15.0;
    double rte = 0.85;
    double soc0_frac = 0.5;
    double tg_s = 20.0;
    double deadband_mw = 5.0;
    double ramp_mw_per_min = 0.0;  // 0 selects 10% of ca_mw per minute
    // training
    double we = 60.0;
    double window_min = 15.0;
    std::size_t bins = 500;
    std::size_t stride_steps = 0;  // 0 selects half a window
    std::size_t e0_draws = 25;
    double k_hi_mult = 10.0;
    std::uint64_t seed = 1;
    int threads = 1;

    /// Sets one key from its text form; throws ConfigError on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);
    void validate() const;

    static RunConfig load(const std::filesystem::path& path);
    /// Applies "key = value" lines; '#' starts a comment.
    void apply_text(const std::string& text);

    double energy_mwh() const { return cd_mw * duration_min / 60.0; }
    std::size_t window_steps() const;
    std::size_t effective_stride() const;

    PlantConfig plant() const;
    ControllerConfig controller_config() const;
    LqrDesign lqr_design() const;
    SweepConfig sweep_config() const;
    CompareSettings compare_settings() const;
    ControllerSpec controller_spec(std::shared_ptr<const SocPolicyTable> policy) const;
};

/// All accepted configuration keys.
const std::vector<std::string>& config_keys();

}  // namespace agc
