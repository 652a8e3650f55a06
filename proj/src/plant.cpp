#include "agc/plant.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "agc/errors.hpp"
#include "agc/lag.hpp"

namespace agc {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

void require_finite_command(double cmd_mw) {
    if (!std::isfinite(cmd_mw)) throw std::invalid_argument("non-finite command");
}

}  // namespace

void GeneratorParams::validate() const {
    require(capacity_mw > 0.0, "generator capacity must be positive");
    require(deadband_mw >= 0.0, "generator deadband must be non-negative");
    require(governor_tc_s > 0.0, "governor time constant must be positive");
    require(ramp_mw_per_s > 0.0, "generator ramp rate must be positive");
}

void BesParams::validate() const {
    require(power_mw > 0.0, "storage power rating must be positive");
    require(energy_mwh > 0.0, "storage energy rating must be positive");
    require(eta_charge > 0.0 && eta_charge <= 1.0, "charge efficiency must be in (0, 1]");
    require(eta_discharge > 0.0 && eta_discharge <= 1.0, "discharge efficiency must be in (0, 1]");
    require(soc_ref_mwh >= 0.0 && soc_ref_mwh <= energy_mwh, "SoC reference must lie in [0, E]");
}

BesParams BesParams::from_rating(double power_mw, double duration_min, double round_trip) {
    BesParams p;
    p.power_mw = power_mw;
    p.energy_mwh = power_mw * duration_min / 60.0;
    p.eta_charge = std::sqrt(round_trip);
    p.eta_discharge = p.eta_charge;
    p.soc_ref_mwh = 0.5 * p.energy_mwh;
    return p;
}

GeneratorStep generator_step(const GeneratorState& state, const GeneratorParams& params, double cmd_mw,
                             double dt_s) {
    require_finite_command(cmd_mw);
    const double cmd = std::abs(cmd_mw) < params.deadband_mw ? 0.0 : cmd_mw;
    const double governor = FirstOrderLag(params.governor_tc_s, dt_s).step(state.governor_out_mw, cmd);
    const double max_step = params.ramp_mw_per_s * dt_s;
    double p = std::clamp(governor, state.p_g_mw - max_step, state.p_g_mw + max_step);
    p = clamp_abs(p, params.capacity_mw);
    return {{governor, p}, p};
}

BesStep bes_step(const BesState& state, const BesParams& params, double cmd_mw, double dt_s) {
    require_finite_command(cmd_mw);
    double p = clamp_abs(cmd_mw, params.power_mw);
    double soc = state.soc_mwh;
    if (p > 0.0) {
        const double max_discharge = soc * params.eta_discharge * 3600.0 / dt_s;
        if (p >= max_discharge) {
            p = max_discharge;
            soc = 0.0;
        } else {
            soc = std::max(soc - p * dt_s / (3600.0 * params.eta_discharge), 0.0);
        }
    } else if (p < 0.0) {
        const double max_charge = (params.energy_mwh - soc) * 3600.0 / (dt_s * params.eta_charge);
        if (-p >= max_charge) {
            p = -max_charge;
            soc = params.energy_mwh;
        } else {
            soc = std::min(soc - p * dt_s * params.eta_charge / 3600.0, params.energy_mwh);
        }
    }
    return {{soc, p}, p};
}

void PlantConfig::validate() const {
    gen.validate();
    bes.validate();
    require(bes_units >= 1, "bes_units must be at least 1");
}

namespace {

BesParams unit_params(const PlantConfig& cfg) {
    BesParams unit = cfg.bes;
    const double n = static_cast<double>(cfg.bes_units);
    unit.power_mw /= n;
    unit.energy_mwh /= n;
    unit.soc_ref_mwh /= n;
    return unit;
}

}  // namespace

PlantState PlantState::initial(const PlantConfig& cfg, double soc_mwh) {
    PlantState s;
    s.bes.assign(static_cast<std::size_t>(cfg.bes_units), BesState{soc_mwh / cfg.bes_units, 0.0});
    return s;
}

double PlantState::soc_mwh() const {
    return std::accumulate(bes.begin(), bes.end(), 0.0,
                           [](double acc, const BesState& b) { return acc + b.soc_mwh; });
}

double PlantState::p_e_mw() const {
    return std::accumulate(bes.begin(), bes.end(), 0.0,
                           [](double acc, const BesState& b) { return acc + b.p_e_mw; });
}

PlantOutputs plant_step(PlantState& state, const PlantConfig& cfg, double rega_mw, double regd_mw, double dt_s) {
    const auto g = generator_step(state.gen, cfg.gen, rega_mw, dt_s);
    state.gen = g.state;
    double p_e = 0.0;
    if (cfg.bes_units == 1) {
        const auto b = bes_step(state.bes.front(), cfg.bes, regd_mw, dt_s);
        state.bes.front() = b.state;
        p_e = b.p_e_mw;
    } else {
        const BesParams unit = unit_params(cfg);
        const double share = regd_mw / cfg.bes_units;
        for (auto& u : state.bes) {
            const auto b = bes_step(u, unit, share, dt_s);
            u = b.state;
            p_e += b.p_e_mw;
        }
    }
    return {g.p_g_mw, p_e};
}

}  // namespace agc
