#include "agc/signals.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "agc/csv.hpp"
#include "agc/errors.hpp"

namespace agc {

void AceSeries::validate() const {
    if (!(dt_s > 0.0) || !std::isfinite(dt_s)) throw DataError("ACE series needs a positive timestep");
    if (values.empty()) throw DataError("no samples");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw DataError("non-finite ACE value at sample " + std::to_string(i));
    }
}

// ---------------------------------------------------------------------------
// CSV

namespace {
constexpr const char* kAceHeader = "t_s,ace_mw";
}

AceSeries parse_ace_csv(std::istream& in) {
    const auto rows = csv::read_rows(in, kAceHeader);
    if (rows.empty()) throw DataError("no samples");
    AceSeries s;
    s.values.reserve(rows.size());
    double first_t = 0.0;
    double prev_t = 0.0;
    for (const auto& r : rows) {
        if (r.cells.size() != 2) throw DataError("parse error at row " + std::to_string(r.row) + ": expected 2 columns");
        const double t = csv::parse_double(r, 0);
        const double v = csv::parse_double(r, 1);
        if (r.row == 1) {
            first_t = t;
        } else {
            const double gap = t - prev_t;
            if (!(gap > 0.0)) {
                throw DataError("timestamps not strictly increasing at row " + std::to_string(r.row));
            }
            if (r.row == 2) {
                s.dt_s = gap;
            } else if (std::abs(gap - s.dt_s) > 1e-6 * s.dt_s) {
                throw DataError("non-uniform spacing at row " + std::to_string(r.row));
            }
        }
        prev_t = t;
        s.values.push_back(v);
    }
    s.start_time_s = first_t;
    s.validate();
    return s;
}

AceSeries load_ace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open ACE file " + path.string());
    return parse_ace_csv(in);
}

void write_ace_csv(std::ostream& out, const AceSeries& series) {
    out << kAceHeader << '\n';
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const double t = series.start_time_s + static_cast<double>(i) * series.dt_s;
        out << csv::format_double(t) << ',' << csv::format_double(series.values[i]) << '\n';
    }
}

void save_ace_csv(const std::filesystem::path& path, const AceSeries& series) {
    std::ostringstream buf;
    write_ace_csv(buf, series);
    csv::write_file(path, buf.str());
}

// ---------------------------------------------------------------------------
// Synthetic data

void SynthConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(what);
    };
    require(dt_s > 0.0 && std::isfinite(dt_s), "synthetic timestep must be positive");
    require(std::isfinite(horizon_s) && horizon_s >= dt_s, "horizon too short");
    require(std::isfinite(mean_mw), "mean must be finite");
    require(reversion_rate_per_s >= 0.0, "reversion rate must be non-negative");
    require(innovation_scale_mw >= 0.0 && jump_scale_mw >= 0.0, "scales must be non-negative");
    require(heavy_tail_mix >= 0.0 && heavy_tail_mix <= 1.0, "heavy_tail_mix must lie in [0, 1]");
    require(jump_rate_per_hour >= 0.0, "jump rate must be non-negative");
}

double SynthConfig::stationary_std_mw() const {
    const double phi = std::exp(-reversion_rate_per_s * dt_s);
    const double jumps_per_step = jump_rate_per_hour * dt_s / 3600.0;
    const double step_var = innovation_scale_mw * innovation_scale_mw + jumps_per_step * 2.0 * jump_scale_mw * jump_scale_mw;
    return std::sqrt(step_var / (1.0 - phi * phi));
}

namespace {

// 53 random bits mapped to [0, 1).
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double laplace(std::mt19937_64& rng, double scale) {
    // inverse CDF on (-1/2, 1/2]
    const double u = 0.5 - unit_uniform(rng);
    const double a = std::abs(u);
    return -scale * std::copysign(std::log1p(-2.0 * a), u);
}

}  // namespace

AceSeries synth_ace(const SynthConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(std::floor(cfg.horizon_s / cfg.dt_s + 1e-9));
    const double phi = std::exp(-cfg.reversion_rate_per_s * cfg.dt_s);
    const double jumps_per_step = cfg.jump_rate_per_hour * cfg.dt_s / 3600.0;
    const double unit_laplace = 1.0 / std::sqrt(2.0);

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::poisson_distribution<int> jumps(jumps_per_step > 0.0 ? jumps_per_step : 1.0);

    AceSeries s;
    s.dt_s = cfg.dt_s;
    s.values.resize(n);
    double x = cfg.mean_mw;
    for (std::size_t i = 0; i < n; ++i) {
        s.values[i] = x;
        const double eps = unit_uniform(rng) < cfg.heavy_tail_mix ? laplace(rng, unit_laplace) : normal(rng);
        double jump = 0.0;
        if (jumps_per_step > 0.0) {
            for (int j = jumps(rng); j > 0; --j) jump += laplace(rng, cfg.jump_scale_mw);
        }
        x = cfg.mean_mw + phi * (x - cfg.mean_mw) + cfg.innovation_scale_mw * eps + jump;
    }
    return s;
}

// ---------------------------------------------------------------------------

double jarque_bera(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 4) throw std::invalid_argument("Jarque-Bera needs at least 4 samples");
    double mean = 0.0;
    double max_abs = 0.0;
    for (double v : values) {
        mean += v;
        max_abs = std::max(max_abs, std::abs(v));
    }
    mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    const double floor = 1e-14 * max_abs;
    if (!(m2 > floor * floor)) throw std::domain_error("degenerate sample");
    const double skew = m3 / std::pow(m2, 1.5);
    const double excess = m4 / (m2 * m2) - 3.0;
    return static_cast<double>(n) / 6.0 * (skew * skew + excess * excess / 4.0);
}

AceSeries reconstruct_uncorrected(const AceSeries& corrected, const AceSeries& rega_hist, const AceSeries& regd_hist,
                                  const PlantConfig& plant, const PlantState& init) {
    corrected.validate();
    rega_hist.validate();
    regd_hist.validate();
    if (rega_hist.size() != corrected.size() || regd_hist.size() != corrected.size()) {
        throw DataError("length mismatch between corrected ACE and command histories");
    }
    if (rega_hist.dt_s != corrected.dt_s || regd_hist.dt_s != corrected.dt_s) {
        throw DataError("timestep mismatch between corrected ACE and command histories");
    }
    plant.validate();
    PlantState state = init;
    double p_g = state.gen.p_g_mw;
    double p_e = state.p_e_mw();
    AceSeries out = corrected;
    for (std::size_t t = 0; t < corrected.size(); ++t) {
        out.values[t] = corrected.values[t] - (p_g + p_e);
        const auto resp = plant_step(state, plant, rega_hist.values[t], regd_hist.values[t], corrected.dt_s);
        p_g = resp.p_g_mw;
        p_e = resp.p_e_mw;
    }
    return out;
}

AceSeries reconstruct_uncorrected(const AceSeries& corrected, const AceSeries& rega_hist, const AceSeries& regd_hist,
                                  const PlantConfig& plant) {
    return reconstruct_uncorrected(corrected, rega_hist, regd_hist, plant,
                                   PlantState::initial(plant, plant.bes.soc_ref_mwh));
}

}  // namespace agc
