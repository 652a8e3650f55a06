#include "agc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "agc/errors.hpp"

namespace agc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw ConfigError("invalid value '" + value + "' for key '" + key + "'");
}

double to_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(v)) bad_value(key, value);
    return v;
}

template <class Int>
Int to_int(const std::string& key, const std::string& value) {
    Int v{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value);
    return v;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    bad_value(key, value);
}

std::array<double, 4> to_vec4(const std::string& key, const std::string& value) {
    std::string body = trim(value);
    if (body.size() >= 2 && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
    std::array<double, 4> out{};
    std::stringstream ss(body);
    std::string item;
    std::size_t n = 0;
    while (std::getline(ss, item, ',')) {
        if (n == 4) bad_value(key, value);
        out[n++] = to_double(key, trim(item));
    }
    if (n != 4) bad_value(key, value);
    return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "controller", "kp", "ki", "kp_d", "ki_d", "tf_s", "ta_s", "td_s", "tg_s", "neutrality_gain",
        "neutrality_enabled", "antiwindup", "lqr_gain", "m_inertia", "q_diag", "r", "lqr_literal_b", "dt_s",
        "ca_mw", "cd_mw", "duration_min", "rte", "soc0_frac", "deadband_mw", "ramp_mw_per_min", "we",
        "window_min", "bins", "stride_steps", "e0_draws", "k_hi_mult", "seed", "threads"};
    return keys;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    if (key == "controller") {
        parse_controller_kind(value);
        controller = value;
    } else if (key == "kp") kp = to_double(key, value);
    else if (key == "ki") ki = to_double(key, value);
    else if (key == "kp_d") kp_d = to_double(key, value);
    else if (key == "ki_d") ki_d = to_double(key, value);
    else if (key == "tf_s") tf_s = to_double(key, value);
    else if (key == "ta_s") ta_s = to_double(key, value);
    else if (key == "td_s") td_s = to_double(key, value);
    else if (key == "tg_s") tg_s = to_double(key, value);
    else if (key == "neutrality_gain") neutrality_gain = to_double(key, value);
    else if (key == "neutrality_enabled") neutrality_enabled = to_bool(key, value);
    else if (key == "antiwindup") antiwindup = to_bool(key, value);
    else if (key == "lqr_gain") lqr_gain = to_vec4(key, value);
    else if (key == "m_inertia") m_inertia = to_double(key, value);
    else if (key == "q_diag") q_diag = to_vec4(key, value);
    else if (key == "r") r = to_double(key, value);
    else if (key == "lqr_literal_b") lqr_literal_b = to_bool(key, value);
    else if (key == "dt_s") dt_s = to_double(key, value);
    else if (key == "ca_mw") ca_mw = to_double(key, value);
    else if (key == "cd_mw") cd_mw = to_double(key, value);
    else if (key == "duration_min") duration_min = to_double(key, value);
    else if (key == "rte") rte = to_double(key, value);
    else if (key == "soc0_frac") soc0_frac = to_double(key, value);
    else if (key == "deadband_mw") deadband_mw = to_double(key, value);
    else if (key == "ramp_mw_per_min") ramp_mw_per_min = to_double(key, value);
    else if (key == "we") we = to_double(key, value);
    else if (key == "window_min") window_min = to_double(key, value);
    else if (key == "bins") bins = to_int<std::size_t>(key, value);
    else if (key == "stride_steps") stride_steps = to_int<std::size_t>(key, value);
    else if (key == "e0_draws") e0_draws = to_int<std::size_t>(key, value);
    else if (key == "k_hi_mult") k_hi_mult = to_double(key, value);
    else if (key == "seed") seed = to_int<std::uint64_t>(key, value);
    else if (key == "threads") threads = to_int<int>(key, value);
    else throw ConfigError("unknown configuration key '" + key + "'");
}

void RunConfig::apply_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    RunConfig cfg;
    cfg.apply_text(buf.str());
    return cfg;
}

void RunConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    require(dt_s > 0.0, "dt_s must be positive");
    require(rte > 0.0 && rte <= 1.0, "rte must lie in (0, 1]");
    require(soc0_frac >= 0.0 && soc0_frac <= 1.0, "soc0_frac must lie in [0, 1]");
    require(duration_min > 0.0, "duration_min must be positive");
    require(window_min > 0.0 && window_steps() >= 1, "window_min must cover at least one step");
    require(bins >= 1, "bins must be at least 1");
    require(e0_draws >= 1, "e0_draws must be at least 1");
    require(k_hi_mult >= 0.0, "k_hi_mult must be non-negative");
    require(threads >= 1, "threads must be at least 1");
    require(ramp_mw_per_min >= 0.0, "ramp_mw_per_min must be non-negative");
    require(m_inertia > 0.0 && r > 0.0, "m_inertia and r must be positive");
    plant().validate();
    controller_config().validate();
}

std::size_t RunConfig::window_steps() const {
    return static_cast<std::size_t>(std::llround(window_min * 60.0 / dt_s));
}

std::size_t RunConfig::effective_stride() const {
    return stride_steps > 0 ? stride_steps : std::max<std::size_t>(1, window_steps() / 2);
}

PlantConfig RunConfig::plant() const {
    PlantConfig p;
    p.gen.capacity_mw = ca_mw;
    p.gen.deadband_mw = deadband_mw;
    p.gen.governor_tc_s = tg_s;
    p.gen.ramp_mw_per_s = (ramp_mw_per_min > 0.0 ? ramp_mw_per_min : 0.1 * ca_mw) / 60.0;
    p.bes = BesParams::from_rating(cd_mw, duration_min, rte);
    return p;
}

ControllerConfig RunConfig::controller_config() const {
    ControllerConfig c;
    c.rega = {kp, ki};
    c.regd = {kp_d, ki_d};
    c.tf_s = tf_s;
    c.ta_s = ta_s;
    c.td_s = td_s;
    c.ca_mw = ca_mw;
    c.cd_mw = cd_mw;
    c.neutrality_gain_per_h = neutrality_gain;
    c.neutrality_enabled = neutrality_enabled;
    c.antiwindup = antiwindup;
    c.soc_ref_mwh = 0.5 * energy_mwh();
    return c;
}

LqrDesign RunConfig::lqr_design() const {
    LqrDesign d;
    d.m_inertia_s = m_inertia;
    d.q_diag = q_diag;
    d.r = r;
    d.literal_b = lqr_literal_b;
    return d;
}

SweepConfig RunConfig::sweep_config() const {
    SweepConfig s;
    s.window_steps = window_steps();
    s.stride_steps = effective_stride();
    s.e0_draws = e0_draws;
    s.e0_strata = bins;
    s.seed = seed;
    s.threads = threads;
    s.plant = plant();
    s.ctrl = controller_config();
    s.w_e = we;
    s.k_lo = 0.0;
    s.k_hi = default_k_hi(cd_mw, energy_mwh(), k_hi_mult);
    return s;
}

CompareSettings RunConfig::compare_settings() const {
    CompareSettings s;
    s.plant = plant();
    s.controller = controller_config();
    s.lqr = lqr_design();
    if (lqr_gain) s.lqr_gain_override = Eigen::Vector4d((*lqr_gain)[0], (*lqr_gain)[1], (*lqr_gain)[2], (*lqr_gain)[3]);
    s.soc0_frac = soc0_frac;
    s.round_trip = rte;
    s.threads = threads;
    return s;
}

ControllerSpec RunConfig::controller_spec(std::shared_ptr<const SocPolicyTable> policy) const {
    return controller_for(compare_settings(), BesRating{cd_mw, duration_min}, parse_controller_kind(controller),
                          std::move(policy));
}

}  // namespace agc
