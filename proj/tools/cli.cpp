#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "agc/config.hpp"
#include "agc/csv.hpp"
#include "agc/engine.hpp"
#include "agc/errors.hpp"
#include "agc/hindsight.hpp"
#include "agc/policy.hpp"
#include "agc/signals.hpp"

namespace agc::cli {

namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, usage = 2, data = 3, numeric = 4 };

std::string dashed(std::string key) {
    for (char& c : key)
        if (c == '_') c = '-';
    return key;
}

/// Config keys exposed as flags on one subcommand, plus --config.
struct ConfigFlags {
    std::string config_path;
    std::map<std::string, std::string> values;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "flat key = value configuration file");
        for (const auto& key : config_keys()) app->add_option("--" + dashed(key), values[key]);
    }

    RunConfig resolve(const CLI::App* app) const {
        RunConfig cfg;
        if (const char* env = std::getenv("AGC_THREADS"); env != nullptr && *env != '\0') cfg.set("threads", env);
        if (!config_path.empty()) {
            const RunConfig file = RunConfig::load(config_path);
            cfg = file;
        }
        for (const auto& key : config_keys()) {
            if (app->count("--" + dashed(key)) > 0) cfg.set(key, values.at(key));
        }
        cfg.validate();
        return cfg;
    }
};

AceSeries load_ace_for(const fs::path& path, const RunConfig& cfg) {
    AceSeries ace = load_ace_csv(path);
    ace.validate();
    if (ace.size() > 1 && std::abs(ace.dt_s - cfg.dt_s) > 1e-9 * cfg.dt_s) {
        throw DataError("sample spacing of " + path.string() + " is " + csv::format_double(ace.dt_s) +
                        " s but dt_s is " + csv::format_double(cfg.dt_s));
    }
    ace.dt_s = cfg.dt_s;
    return ace;
}

SocPolicyTable train_policy(const AceSeries& ace, const RunConfig& cfg, std::size_t* n_samples) {
    const auto samples = sweep(ace, cfg.sweep_config());
    if (n_samples != nullptr) *n_samples = samples.size();
    return build_table(samples, cfg.energy_mwh(), cfg.bins);
}

SocPolicyTable load_policy_for(const fs::path& path, const RunConfig& cfg) {
    SocPolicyTable table = load_policy_csv(path);
    if (std::abs(table.energy_mwh - cfg.energy_mwh()) > 1e-9 * cfg.energy_mwh()) {
        throw DataError("policy " + path.string() + " covers " + csv::format_double(table.energy_mwh) +
                        " MWh but the configured storage holds " + csv::format_double(cfg.energy_mwh()) + " MWh");
    }
    return table;
}

std::string policy_file_name(const BesRating& r) {
    return "policy_" + csv::format_double(r.power_mw) + "MW_" + csv::format_double(r.duration_min) + "min.csv";
}

std::vector<BesRating> parse_ratings(const std::string& text) {
    std::vector<BesRating> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto slash = item.find('/');
        if (slash == std::string::npos) throw ConfigError("rating '" + item + "' is not POWER/MINUTES");
        BesRating r;
        try {
            r.power_mw = std::stod(item.substr(0, slash));
            r.duration_min = std::stod(item.substr(slash + 1));
        } catch (const std::exception&) {
            throw ConfigError("rating '" + item + "' is not POWER/MINUTES");
        }
        if (!(r.power_mw > 0.0) || !(r.duration_min > 0.0)) throw ConfigError("rating '" + item + "' must be positive");
        out.push_back(r);
    }
    if (out.empty()) throw ConfigError("empty rating list");
    return out;
}

void print_deciles(std::ostream& out, const SocPolicyTable& table) {
    const std::size_t n = table.n_bins();
    for (std::size_t d = 0; d < 10; ++d) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i * 10 / n == d) {
                sum += table.gains[i];
                ++count;
            }
        }
        out << "decile " << d << ": " << (count > 0 ? csv::format_double(sum / static_cast<double>(count)) : "n/a")
            << " MW/MWh\n";
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"AGC simulation with state-of-charge feedback for battery storage", "agcsim"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic uncorrected ACE series");
    SynthConfig synth_cfg;
    double hours = synth_cfg.horizon_s / 3600.0;
    std::string synth_out;
    synth->add_option("--seed", synth_cfg.seed);
    synth->add_option("--hours", hours);
    synth->add_option("--dt-s", synth_cfg.dt_s);
    synth->add_option("--mean-mw", synth_cfg.mean_mw);
    synth->add_option("--reversion-rate", synth_cfg.reversion_rate_per_s, "1/s");
    synth->add_option("--innovation-mw", synth_cfg.innovation_scale_mw);
    synth->add_option("--heavy-tail-mix", synth_cfg.heavy_tail_mix);
    synth->add_option("--jump-rate", synth_cfg.jump_rate_per_hour, "jumps per hour");
    synth->add_option("--jump-scale-mw", synth_cfg.jump_scale_mw);
    synth->add_option("--out", synth_out)->required();

    // train
    auto* train = app.add_subcommand("train", "learn a SoC feedback gain table from historical ACE");
    ConfigFlags train_flags;
    train_flags.attach(train);
    std::string train_ace, train_out;
    train->add_option("--ace", train_ace)->required();
    train->add_option("--out", train_out)->required();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run one controller in closed loop");
    ConfigFlags sim_flags;
    sim_flags.attach(simulate);
    std::string sim_ace, sim_policy, sim_out;
    simulate->add_option("--ace", sim_ace)->required();
    simulate->add_option("--policy", sim_policy);
    simulate->add_option("--out", sim_out)->required();

    // compare
    auto* cmp = app.add_subcommand("compare", "run every controller on every storage rating");
    ConfigFlags cmp_flags;
    cmp_flags.attach(cmp);
    std::string cmp_ace, cmp_policy_dir, cmp_train_ace, cmp_out, cmp_ratings;
    cmp->add_option("--ace", cmp_ace)->required();
    cmp->add_option("--policy-dir", cmp_policy_dir, "directory of policy_<P>MW_<D>min.csv files");
    cmp->add_option("--train-ace", cmp_train_ace, "train missing policies on this series");
    cmp->add_option("--ratings", cmp_ratings, "comma-separated POWER/MINUTES list");
    cmp->add_option("--out", cmp_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return usage;
    }

    try {
        if (synth->parsed()) {
            synth_cfg.horizon_s = hours * 3600.0;
            save_ace_csv(synth_out, synth_ace(synth_cfg));
            return ok;
        }

        if (train->parsed()) {
            const RunConfig cfg = train_flags.resolve(train);
            const AceSeries ace = load_ace_for(train_ace, cfg);
            std::size_t n_samples = 0;
            const SocPolicyTable table = train_policy(ace, cfg, &n_samples);
            save_policy_csv(train_out, table);
            out << "samples: " << n_samples << "\n";
            print_deciles(out, table);
            return ok;
        }

        if (simulate->parsed()) {
            const RunConfig cfg = sim_flags.resolve(simulate);
            const ControllerKind kind = parse_controller_kind(cfg.controller);
            std::shared_ptr<const SocPolicyTable> policy;
            if (kind == ControllerKind::proposed) {
                if (sim_policy.empty()) throw ConfigError("the proposed controller needs --policy");
                policy = std::make_shared<const SocPolicyTable>(load_policy_for(sim_policy, cfg));
            }
            const AceSeries ace = load_ace_for(sim_ace, cfg);
            const ControllerSpec spec = cfg.controller_spec(policy);
            InitialConditions init;
            init.soc0_mwh = cfg.soc0_frac * cfg.energy_mwh();
            const SimTrace trace = run_closed_loop(ace, spec, cfg.plant(), init);
            save_trace_csv(sim_out, trace);
            const Metrics m = compute_metrics(trace, spec.cfg.soc_ref_mwh);
            out << csv::format_double(m.mean_sq_pace_mw2) << "," << csv::format_double(m.mean_sq_soc_dev_mwh2) << "\n";
            return ok;
        }

        if (cmp->parsed()) {
            const RunConfig cfg = cmp_flags.resolve(cmp);
            const std::vector<BesRating> ratings = cmp_ratings.empty() ? default_ratings() : parse_ratings(cmp_ratings);
            const AceSeries ace = load_ace_for(cmp_ace, cfg);
            std::optional<AceSeries> train_series;
            if (!cmp_train_ace.empty()) train_series = load_ace_for(cmp_train_ace, cfg);

            std::vector<CompareCase> cases;
            for (const auto& rating : ratings) {
                RunConfig rc = cfg;
                rc.cd_mw = rating.power_mw;
                rc.duration_min = rating.duration_min;
                CompareCase c;
                c.rating = rating;
                const fs::path file = cmp_policy_dir.empty() ? fs::path{} : fs::path(cmp_policy_dir) / policy_file_name(rating);
                if (!cmp_policy_dir.empty() && fs::exists(file)) {
                    c.policy = std::make_shared<const SocPolicyTable>(load_policy_for(file, rc));
                } else if (train_series) {
                    c.policy = std::make_shared<const SocPolicyTable>(train_policy(*train_series, rc, nullptr));
                }
                cases.push_back(std::move(c));
            }

            const auto rows = compare(ace, cases, cfg.compare_settings());
            std::ostringstream report;
            write_report_csv(report, rows);
            csv::write_file(cmp_out, report.str());
            int code = ok;
            for (const auto& row : rows) {
                if (!row.ok()) {
                    err << "error: " << row.config << " " << row.controller << ": " << row.error << "\n";
                    code = data;
                }
            }
            return code;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return numeric;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return data;
    }
    return usage;
}

}  // namespace agc::cli
