#include "agc/engine.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "agc/csv.hpp"
#include "agc/errors.hpp"
#include "agc/parallel.hpp"

namespace agc {

const char* to_string(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::pjm: return "pjm";
        case ControllerKind::lqr: return "lqr";
        case ControllerKind::proposed: return "proposed";
    }
    return "?";
}

ControllerKind parse_controller_kind(const std::string& name) {
    if (name == "pjm") return ControllerKind::pjm;
    if (name == "lqr") return ControllerKind::lqr;
    if (name == "proposed") return ControllerKind::proposed;
    throw ConfigError("unknown controller '" + name + "' (expected pjm, lqr or proposed)");
}

void SimTrace::reserve(std::size_t n) {
    for (auto* col : {&t_s, &ace_uncorrected_mw, &p_ace_mw, &rega_mw, &regd_mw, &p_g_mw, &p_e_mw, &soc_mwh, &i_ace_mws}) {
        col->reserve(n);
    }
}

SimTrace run_closed_loop(const AceSeries& ace, const ControllerSpec& spec, const PlantConfig& plant,
                         const InitialConditions& init) {
    ace.validate();
    plant.validate();
    spec.cfg.validate();
    const double energy = plant.bes.energy_mwh;
    if (!(init.soc0_mwh >= 0.0 && init.soc0_mwh <= energy)) throw ConfigError("initial SoC outside [0, E]");
    if (spec.kind == ControllerKind::proposed) {
        if (!spec.policy) throw ConfigError("proposed controller needs a SoC policy table");
        spec.policy->validate();
        if (spec.policy->energy_mwh != energy) {
            throw ConfigError("policy table covers [0, " + csv::format_double(spec.policy->energy_mwh) +
                              "] MWh but the storage holds " + csv::format_double(energy) + " MWh");
        }
    }

    const double dt = ace.dt_s;
    PlantState units = PlantState::initial(plant, init.soc0_mwh);
    ControllerState ctrl = init.controller;
    Feedback fb{units.gen.p_g_mw, units.p_e_mw(), units.soc_mwh()};

    SimTrace trace;
    trace.reserve(ace.size());
    for (std::size_t t = 0; t < ace.size(); ++t) {
        const double p_ace = ace.values[t] + fb.p_g_mw + fb.p_e_mw;
        StepResult step;
        switch (spec.kind) {
            case ControllerKind::pjm: step = pjm_step(ctrl, p_ace, fb, spec.cfg, dt); break;
            case ControllerKind::lqr: step = lqr_step(ctrl, p_ace, fb, spec.lqr_gain, spec.cfg, dt); break;
            case ControllerKind::proposed: step = proposed_step(ctrl, p_ace, fb, *spec.policy, spec.cfg, dt); break;
        }
        ctrl = step.state;
        const PlantOutputs out = plant_step(units, plant, step.cmd.rega_mw, step.cmd.regd_mw, dt);
        fb = {out.p_g_mw, out.p_e_mw, units.soc_mwh()};

        trace.t_s.push_back(ace.start_time_s + static_cast<double>(t) * dt);
        trace.ace_uncorrected_mw.push_back(ace.values[t]);
        trace.p_ace_mw.push_back(p_ace);
        trace.rega_mw.push_back(step.cmd.rega_mw);
        trace.regd_mw.push_back(step.cmd.regd_mw);
        trace.p_g_mw.push_back(out.p_g_mw);
        trace.p_e_mw.push_back(out.p_e_mw);
        trace.soc_mwh.push_back(fb.soc_mwh);
        trace.i_ace_mws.push_back(ctrl.i_ace_mws);
    }
    return trace;
}

Metrics compute_metrics(const SimTrace& trace, double soc_ref_mwh) {
    if (trace.size() == 0) throw DataError("empty trace");
    Metrics m;
    for (std::size_t t = 0; t < trace.size(); ++t) {
        const double dev = trace.soc_mwh[t] - soc_ref_mwh;
        m.mean_sq_pace_mw2 += trace.p_ace_mw[t] * trace.p_ace_mw[t];
        m.mean_sq_soc_dev_mwh2 += dev * dev;
    }
    const auto n = static_cast<double>(trace.size());
    m.mean_sq_pace_mw2 /= n;
    m.mean_sq_soc_dev_mwh2 /= n;
    return m;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
    out << "t_s,ace_uncorrected_mw,p_ace_mw,rega_mw,regd_mw,pg_mw,pe_mw,soc_mwh,i_ace_mws\n";
    for (std::size_t t = 0; t < trace.size(); ++t) {
        out << csv::format_double(trace.t_s[t]) << ',' << csv::format_double(trace.ace_uncorrected_mw[t]) << ','
            << csv::format_double(trace.p_ace_mw[t]) << ',' << csv::format_double(trace.rega_mw[t]) << ','
            << csv::format_double(trace.regd_mw[t]) << ',' << csv::format_double(trace.p_g_mw[t]) << ','
            << csv::format_double(trace.p_e_mw[t]) << ',' << csv::format_double(trace.soc_mwh[t]) << ','
            << csv::format_double(trace.i_ace_mws[t]) << '\n';
    }
}

void save_trace_csv(const std::filesystem::path& path, const SimTrace& trace) {
    std::ostringstream buf;
    write_trace_csv(buf, trace);
    csv::write_file(path, buf.str());
}

// ---------------------------------------------------------------------------

std::string BesRating::label() const {
    return csv::format_double(power_mw) + "MW/" + csv::format_double(duration_min) + "min";
}

std::vector<BesRating> default_ratings() {
    return {{200, 15}, {200, 20}, {200, 30}, {200, 60}, {300, 15}, {400, 15}};
}

PlantConfig plant_for(const CompareSettings& s, const BesRating& rating) {
    PlantConfig p = s.plant;
    p.bes = BesParams::from_rating(rating.power_mw, rating.duration_min, s.round_trip);
    return p;
}

ControllerSpec controller_for(const CompareSettings& s, const BesRating& rating, ControllerKind kind,
                             std::shared_ptr<const SocPolicyTable> policy) {
    ControllerSpec spec;
    spec.kind = kind;
    spec.cfg = s.controller;
    spec.cfg.ca_mw = s.plant.gen.capacity_mw;
    spec.cfg.cd_mw = rating.power_mw;
    spec.cfg.soc_ref_mwh = 0.5 * rating.energy_mwh();
    if (kind == ControllerKind::lqr) {
        if (s.lqr_gain_override) {
            spec.lqr_gain = *s.lqr_gain_override;
        } else {
            LqrModel model = build_lqr_model(spec.cfg, s.lqr, rating.energy_mwh());
            synthesize_lqr_gain(model);
            spec.lqr_gain = model.k;
        }
    }
    if (kind == ControllerKind::proposed) spec.policy = std::move(policy);
    return spec;
}

std::vector<ReportRow> compare(const AceSeries& ace_test, const std::vector<CompareCase>& cases,
                               const CompareSettings& settings) {
    ace_test.validate();
    struct Task {
        std::size_t case_index;
        ControllerKind kind;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        for (ControllerKind kind : cases[c].controllers) tasks.push_back({c, kind});
    }
    std::vector<ReportRow> rows(tasks.size());
    parallel_for(tasks.size(), settings.threads, [&](std::size_t i) {
        const CompareCase& cc = cases[tasks[i].case_index];
        ReportRow& row = rows[i];
        row.config = cc.rating.label();
        row.controller = to_string(tasks[i].kind);
        if (tasks[i].kind == ControllerKind::proposed && !cc.policy) {
            row.error = "missing trained policy for " + row.config;
            return;
        }
        const PlantConfig plant = plant_for(settings, cc.rating);
        const ControllerSpec spec = controller_for(settings, cc.rating, tasks[i].kind, cc.policy);
        const double soc0 = settings.soc0_frac * plant.bes.energy_mwh;
        const SimTrace trace = run_closed_loop(ace_test, spec, plant, {soc0, {}});
        const Metrics m = compute_metrics(trace, plant.bes.soc_ref_mwh);
        row.mean_sq_pace_e3 = m.mean_sq_pace_mw2 / 1e3;
        row.mean_sq_soc_dev = m.mean_sq_soc_dev_mwh2;
    });
    return rows;
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
    out << "config,controller,mean_sq_pace_e3,mean_sq_soc_dev\n";
    for (const auto& r : rows) {
        if (!r.ok()) continue;
        out << r.config << ',' << r.controller << ',' << csv::format_double(r.mean_sq_pace_e3) << ','
            << csv::format_double(r.mean_sq_soc_dev) << '\n';
    }
}

}  // namespace agc
