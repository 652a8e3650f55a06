#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "agc/controllers.hpp"
#include "agc/plant.hpp"
#include "agc/policy.hpp"
#include "agc/signals.hpp"

namespace agc {

/// One best-hindsight program: choose the constant SoC feedback gain that
/// minimizes sum_t P_ACE[t]^2 + w_e (e[t] - e_ref)^2 over a historical window.
struct WindowProblem {
    std::span<const double> ace_window;
    double dt_s = 2.0;
    double e0_mwh = 0.0;
    PlantConfig plant;
    ControllerConfig ctrl;  // RegA and RegD PI settings, ratings, SoC reference
    double w_e = 60.0;      // MW^2 per MWh^2
    double k_lo = 0.0;      // MW/MWh
    double k_hi = 40.0;

    void validate() const;
};

struct TrainSample {
    std::size_t t0 = 0;
    double e0_mwh = 0.0;
    double k_e = 0.0;
    double j = 0.0;
    bool operator==(const TrainSample&) const = default;
};

/// Default gain range [0, 10 C_d / E]: full power is reachable at a 10% SoC deviation.
inline double default_k_hi(double power_mw, double energy_mwh, double multiple = 10.0) {
    return multiple * power_mw / energy_mwh;
}

/// Closed-loop cost of the window for gain k_e. Controller and generator start
/// idle, the storage at e0.
double window_objective(const WindowProblem& problem, double k_e);

/// 33-point grid over [k_lo, k_hi], then golden-section refinement to 1e-4 MW/MWh
/// inside the brackets of the three best grid points. Ties go to the smaller |k_e|.
TrainSample solve_window(const WindowProblem& problem);

struct SweepConfig {
    std::size_t window_steps = 450;
    std::size_t stride_steps = 225;
    std::size_t e0_draws = 25;    // initial SoC values per window start
    std::size_t e0_strata = 500;  // SoC strata the draws rotate through
    std::uint64_t seed = 1;
    int threads = 1;
    PlantConfig plant;
    ControllerConfig ctrl;
    double w_e = 60.0;
    double k_lo = 0.0;
    double k_hi = 40.0;
};

/// Initial SoC of global draw g: stratum g mod strata, uniform inside it.
double stratified_e0(std::uint64_t seed, std::uint64_t g, std::size_t strata, double energy_mwh);

/// Window starts 0, stride, ... with start + window <= H; for each start,
/// `e0_draws` initial SoC values. Samples are ordered by start, then draw.
std::vector<TrainSample> sweep(const AceSeries& ace, const SweepConfig& cfg);

/// Bin-averaged gain table over [0, E]. Empty bins take the gain of the nearest
/// non-empty bin (ties toward lower SoC) and keep a zero count.
SocPolicyTable build_table(std::span<const TrainSample> samples, double energy_mwh, std::size_t n_bins);

}  // namespace agc
