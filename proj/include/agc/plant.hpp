#pragma once

#include <limits>
#include <vector>

namespace agc {

// Sign convention: positive power is injection into the grid (generation up,
// storage discharge). The corrected ACE is the uncorrected ACE plus all unit
// responses.

struct GeneratorParams {
    double capacity_mw = 400.0;
    double deadband_mw = 5.0;
    double governor_tc_s = 20.0;
    double ramp_mw_per_s = 400.0 * 0.1 / 60.0;

    void validate() const;
};

struct GeneratorState {
    double governor_out_mw = 0.0;
    double p_g_mw = 0.0;
};

struct BesParams {
    double power_mw = 200.0;
    double energy_mwh = 50.0;
    double eta_charge = 0.9219544457292887;  // sqrt(0.85)
    double eta_discharge = 0.9219544457292887;
    double soc_ref_mwh = 25.0;

    void validate() const;
    /// Power/duration configuration with symmetric one-way efficiencies
    /// sqrt(round_trip) and the reference at half the energy.
    static BesParams from_rating(double power_mw, double duration_min, double round_trip = 0.85);
};

struct BesState {
    double soc_mwh = 0.0;
    double p_e_mw = 0.0;
};

struct GeneratorStep {
    GeneratorState state;
    double p_g_mw;
};

struct BesStep {
    BesState state;
    double p_e_mw;
};

/// Deadband, governor lag, ramp limit, capacity limit, in that order.
GeneratorStep generator_step(const GeneratorState& state, const GeneratorParams& params, double cmd_mw,
                             double dt_s);

/// Power saturation, then an energy-feasibility clamp that keeps the SoC
/// exactly inside [0, E]; the delivered power is the clamped command.
BesStep bes_step(const BesState& state, const BesParams& params, double cmd_mw, double dt_s);

/// Conventional (RegA) units and the aggregated storage (RegD) fleet.
/// `bes_units` identical storage units share the RegD command evenly;
/// `bes` describes the whole fleet.
struct PlantConfig {
    GeneratorParams gen;
    BesParams bes;
    int bes_units = 1;

    void validate() const;
};

struct PlantState {
    GeneratorState gen;
    std::vector<BesState> bes;  // one entry per unit

    /// Idle units, every storage unit at the given fleet SoC fraction.
    static PlantState initial(const PlantConfig& cfg, double soc_mwh);

    double soc_mwh() const;
    double p_e_mw() const;
};

/// Steps every unit; returns (p_g, p_e) of the fleet.
struct PlantOutputs {
    double p_g_mw;
    double p_e_mw;
};
PlantOutputs plant_step(PlantState& state, const PlantConfig& cfg, double rega_mw, double regd_mw, double dt_s);

}  // namespace agc
