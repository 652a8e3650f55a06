#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "agc/plant.hpp"

namespace agc {

/// Uniformly sampled area-control-error signal in MW.
struct AceSeries {
    double dt_s = 2.0;
    std::vector<double> values;
    double start_time_s = 0.0;

    std::size_t size() const { return values.size(); }
    /// Throws DataError if dt is not positive, the series is empty or a value is not finite.
    void validate() const;
};

/// Parameters of the synthetic ACE generator: a discretized mean-reverting
/// process with Gaussian/Laplace mixture innovations and compound-Poisson jumps.
struct SynthConfig {
    std::uint64_t seed = 1;
    double horizon_s = 24.0 * 3600.0;
    double dt_s = 2.0;
    double mean_mw = 0.0;
    double reversion_rate_per_s = 1.0 / 300.0;
    double innovation_scale_mw = 30.0;  // per-step innovation standard deviation
    double heavy_tail_mix = 0.3;        // probability that an innovation is Laplace
    double jump_rate_per_hour = 2.0;
    double jump_scale_mw = 100.0;  // Laplace scale of a single jump

    void validate() const;
    /// Stationary standard deviation of the discretized process (jumps included).
    double stationary_std_mw() const;
};

AceSeries load_ace_csv(const std::filesystem::path& path);
AceSeries parse_ace_csv(std::istream& in);
void write_ace_csv(std::ostream& out, const AceSeries& series);
void save_ace_csv(const std::filesystem::path& path, const AceSeries& series);

AceSeries synth_ace(const SynthConfig& cfg);

/// Jarque-Bera statistic n/6 (S^2 + (K-3)^2/4) with biased moment estimators.
double jarque_bera(std::span<const double> values);

/// Removes the simulated unit responses to historical RegA/RegD commands from a
/// corrected ACE record. Responses enter with the engine's one-step delay, so
/// uncorrected[t] = corrected[t] - (p_g[t-1] + p_e[t-1]) with the initial state
/// supplying the t = 0 outputs.
AceSeries reconstruct_uncorrected(const AceSeries& corrected, const AceSeries& rega_hist,
                                  const AceSeries& regd_hist, const PlantConfig& plant,
                                  const PlantState& init);
AceSeries reconstruct_uncorrected(const AceSeries& corrected, const AceSeries& rega_hist,
                                  const AceSeries& regd_hist, const PlantConfig& plant);

}  // namespace agc
