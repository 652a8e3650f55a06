#include "agc/hindsight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "agc/errors.hpp"
#include "agc/parallel.hpp"

namespace agc {

void WindowProblem::validate() const {
    if (ace_window.empty()) throw ConfigError("empty ACE window");
    if (!(dt_s > 0.0)) throw ConfigError("window timestep must be positive");
    plant.validate();
    ctrl.validate();
    if (!(e0_mwh >= 0.0 && e0_mwh <= plant.bes.energy_mwh)) throw ConfigError("e0 outside [0, E]");
    if (!(k_lo <= k_hi) || !std::isfinite(k_lo) || !std::isfinite(k_hi)) throw ConfigError("invalid gain bounds");
    if (!(w_e >= 0.0)) throw ConfigError("w_e must be non-negative");
}

double window_objective(const WindowProblem& problem, double k_e) {
    if (!std::isfinite(k_e)) throw std::invalid_argument("non-finite gain");
    const double dt = problem.dt_s;
    const double ref = problem.ctrl.soc_ref_mwh;
    PlantState units = PlantState::initial(problem.plant, problem.e0_mwh);
    ControllerState ctrl;
    Feedback fb{0.0, 0.0, problem.e0_mwh};
    double j = 0.0;
    for (double ace : problem.ace_window) {
        const double p_ace = ace + fb.p_g_mw + fb.p_e_mw;
        const StepResult step = proposed_step(ctrl, p_ace, fb, k_e, problem.ctrl, dt);
        ctrl = step.state;
        const PlantOutputs out = plant_step(units, problem.plant, step.cmd.rega_mw, step.cmd.regd_mw, dt);
        fb = {out.p_g_mw, out.p_e_mw, units.soc_mwh()};
        const double dev = fb.soc_mwh - ref;
        j += p_ace * p_ace + problem.w_e * dev * dev;
    }
    return j;
}

namespace {

struct Candidate {
    double k;
    double j;
};

bool better(const Candidate& a, const Candidate& b) {
    return a.j < b.j || (a.j == b.j && std::abs(a.k) < std::abs(b.k));
}

}  // namespace

TrainSample solve_window(const WindowProblem& problem) {
    problem.validate();
    constexpr int kGrid = 33;
    constexpr std::size_t kBrackets = 3;
    constexpr double kTol = 1e-4;
    auto f = [&](double k) { return window_objective(problem, k); };

    const double lo = problem.k_lo;
    const double hi = problem.k_hi;
    const double spacing = (hi - lo) / (kGrid - 1);
    std::vector<Candidate> grid;
    grid.reserve(kGrid);
    for (int i = 0; i < kGrid; ++i) {
        const double k = i == kGrid - 1 ? hi : lo + spacing * i;
        grid.push_back({k, f(k)});
        if (spacing == 0.0) break;
    }
    Candidate best = grid.front();
    for (const Candidate& c : grid) {
        if (better(c, best)) best = c;
    }
    if (spacing == 0.0) return {0, problem.e0_mwh, best.k, best.j};

    // golden-section inside the brackets of the best grid points
    std::vector<int> order(kGrid);
    for (int i = 0; i < kGrid; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return better(grid[x], grid[y]); });
    order.resize(kBrackets);

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i : order) {
        double a = i == 0 ? lo : grid[i - 1].k;
        double b = i == kGrid - 1 ? hi : grid[i + 1].k;
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = f(c);
        double fd = f(d);
        while (b - a > kTol) {
            if (fc <= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = f(d);
            }
        }
        const double mid = 0.5 * (a + b);
        for (const Candidate& cand : {Candidate{c, fc}, Candidate{d, fd}, Candidate{mid, f(mid)}}) {
            if (better(cand, best)) best = cand;
        }
    }
    return {0, problem.e0_mwh, best.k, best.j};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

double stratified_e0(std::uint64_t seed, std::uint64_t g, std::size_t strata, double energy_mwh) {
    const std::size_t s = static_cast<std::size_t>(g % strata);
    const double u = static_cast<double>(splitmix64(seed ^ splitmix64(g)) >> 11) * 0x1.0p-53;
    const double lo = energy_mwh * static_cast<double>(s) / static_cast<double>(strata);
    const double hi = s + 1 == strata ? energy_mwh : energy_mwh * static_cast<double>(s + 1) / static_cast<double>(strata);
    const double e0 = lo + u * (hi - lo);
    return e0 < hi ? e0 : std::nextafter(hi, lo);
}

std::vector<TrainSample> sweep(const AceSeries& ace, const SweepConfig& cfg) {
    ace.validate();
    if (cfg.window_steps == 0 || cfg.stride_steps == 0 || cfg.e0_draws == 0 || cfg.e0_strata == 0) {
        throw ConfigError("window, stride, draws and strata must be positive");
    }
    if (ace.size() < cfg.window_steps) {
        throw DataError("data shorter than one window (" + std::to_string(ace.size()) + " < " +
                        std::to_string(cfg.window_steps) + " samples)");
    }
    std::vector<std::size_t> starts;
    for (std::size_t t0 = 0; t0 + cfg.window_steps <= ace.size(); t0 += cfg.stride_steps) starts.push_back(t0);

    WindowProblem base;
    base.dt_s = ace.dt_s;
    base.plant = cfg.plant;
    base.ctrl = cfg.ctrl;
    base.w_e = cfg.w_e;
    base.k_lo = cfg.k_lo;
    base.k_hi = cfg.k_hi;

    const double energy = cfg.plant.bes.energy_mwh;
    std::vector<TrainSample> samples(starts.size() * cfg.e0_draws);
    parallel_for(samples.size(), cfg.threads, [&](std::size_t g) {
        WindowProblem p = base;
        const std::size_t t0 = starts[g / cfg.e0_draws];
        p.ace_window = std::span<const double>(ace.values).subspan(t0, cfg.window_steps);
        p.e0_mwh = stratified_e0(cfg.seed, g, cfg.e0_strata, energy);
        TrainSample s = solve_window(p);
        s.t0 = t0;
        samples[g] = s;
    });
    return samples;
}

SocPolicyTable build_table(std::span<const TrainSample> samples, double energy_mwh, std::size_t n_bins) {
    if (samples.empty()) throw DataError("zero training samples");
    SocPolicyTable t = SocPolicyTable::uniform(energy_mwh, n_bins, 0.0);
    std::vector<std::vector<double>> per_bin(n_bins);
    for (const auto& s : samples) {
        if (!(s.e0_mwh >= 0.0 && s.e0_mwh <= energy_mwh)) throw DataError("training sample e0 outside [0, E]");
        per_bin[t.bin_of(s.e0_mwh)].push_back(s.k_e);
    }
    std::vector<std::size_t> filled;
    for (std::size_t i = 0; i < n_bins; ++i) {
        auto& ks = per_bin[i];
        if (ks.empty()) continue;
        // summed in sorted order
        std::sort(ks.begin(), ks.end());
        double sum = 0.0;
        for (double k : ks) sum += k;
        t.gains[i] = sum / static_cast<double>(ks.size());
        t.counts[i] = ks.size();
        filled.push_back(i);
    }
    std::size_t next = 0;  // first filled bin at or above i
    for (std::size_t i = 0; i < n_bins; ++i) {
        if (t.counts[i] > 0) continue;
        while (next < filled.size() && filled[next] < i) ++next;
        std::size_t src;
        if (next == filled.size()) {
            src = filled.back();
        } else if (next == 0) {
            src = filled.front();
        } else {
            const std::size_t below = filled[next - 1];
            const std::size_t above = filled[next];
            src = (i - below) <= (above - i) ? below : above;
        }
        t.gains[i] = t.gains[src];
    }
    return t;
}

}  // namespace agc
