#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "agc/engine.hpp"
#include "agc/errors.hpp"
#include "agc/signals.hpp"

using namespace agc;

namespace {

AceSeries parse(const std::string& text) {
    std::istringstream in(text);
    return parse_ace_csv(in);
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const DataError& e) {
        return e.what();
    }
    return "";
}

std::string to_csv(const AceSeries& s) {
    std::ostringstream out;
    write_ace_csv(out, s);
    return out.str();
}

}  // namespace

TEST_CASE("ace csv parses uniform rows") {
    const AceSeries s = parse("t_s,ace_mw\n0,5.0\n2,-3.0\n4,0.0\n");
    CHECK(s.dt_s == 2.0);
    CHECK(s.values == std::vector<double>{5.0, -3.0, 0.0});
}

TEST_CASE("ace csv rejects bad files") {
    CHECK(error_of("t_s,ace_mw\n0,1\n2,2\n5,3\n") == "non-uniform spacing at row 3");
    CHECK(error_of("") == "no samples");
    CHECK(error_of("t_s,ace_mw\n") == "no samples");
    CHECK(error_of("t_s,ace_mw\n0,1\n2,abc\n").find("row 2") != std::string::npos);
    CHECK(error_of("t_s,ace_mw\n0,1\n0,2\n") == "timestamps not strictly increasing at row 2");
    CHECK(error_of("time,ace\n0,1\n").size() > 0);
    CHECK_THROWS_AS(load_ace_csv("/nonexistent/ace.csv"), DataError);
}

TEST_CASE("ace csv tolerates CRLF and keeps the start time") {
    const AceSeries s = parse("t_s,ace_mw\r\n10,1\r\n12,2\r\n");
    CHECK(s.start_time_s == 10.0);
    CHECK(s.values.size() == 2);
    const AceSeries back = parse(to_csv(s));
    CHECK(back.values == s.values);
    CHECK(back.start_time_s == 10.0);
}

TEST_CASE("synth is deterministic per seed") {
    SynthConfig cfg;
    cfg.seed = 7;
    cfg.horizon_s = 3600.0;
    CHECK(to_csv(synth_ace(cfg)) == to_csv(synth_ace(cfg)));
    SynthConfig other = cfg;
    other.seed = 8;
    CHECK(synth_ace(other).values != synth_ace(cfg).values);
    CHECK(synth_ace(cfg).size() == 1800);
}

TEST_CASE("synth without noise is constant at the mean") {
    SynthConfig cfg;
    cfg.mean_mw = 12.5;
    cfg.innovation_scale_mw = 0.0;
    cfg.jump_rate_per_hour = 0.0;
    cfg.horizon_s = 600.0;
    for (double v : synth_ace(cfg).values) CHECK(v == 12.5);
}

TEST_CASE("synth rejects a short horizon") {
    SynthConfig cfg;
    cfg.horizon_s = 0.0;
    CHECK_THROWS_WITH_AS(synth_ace(cfg), "horizon too short", ConfigError);
}

TEST_CASE("synth sample mean stays within the stationary bound") {
    // Effective sample count of an AR(1) with coefficient phi: n (1 - phi) / (1 + phi).
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        SynthConfig cfg;
        cfg.seed = seed;
        const AceSeries s = synth_ace(cfg);
        const double n = static_cast<double>(s.size());
        double mean = 0.0;
        for (double v : s.values) mean += v;
        mean /= n;
        const double phi = std::exp(-cfg.reversion_rate_per_s * cfg.dt_s);
        const double n_eff = n * (1.0 - phi) / (1.0 + phi);
        CHECK(std::abs(mean) <= 3.0 * cfg.stationary_std_mw() / std::sqrt(n_eff));
    }
}

TEST_CASE("synth sample variance matches the stationary formula") {
    SynthConfig cfg;
    cfg.seed = 11;
    cfg.horizon_s = 20 * 86400.0;
    const AceSeries s = synth_ace(cfg);
    double m = 0.0, v = 0.0;
    for (double x : s.values) m += x;
    m /= static_cast<double>(s.size());
    for (double x : s.values) v += (x - m) * (x - m);
    v /= static_cast<double>(s.size());
    CHECK(std::sqrt(v) == doctest::Approx(cfg.stationary_std_mw()).epsilon(0.1));
}

TEST_CASE("jarque-bera closed forms") {
    std::vector<double> alternating;
    for (int i = 0; i < 600; ++i) alternating.push_back(i % 2 == 0 ? -1.0 : 1.0);
    CHECK(jarque_bera(alternating) == doctest::Approx(100.0).epsilon(1e-12));

    // mass 1/6 at each of -1 and +1, 2/3 at 0: S = 0, K = 3
    std::vector<double> mesokurtic;
    for (int i = 0; i < 300; ++i) mesokurtic.push_back(i % 6 == 0 ? -1.0 : (i % 6 == 1 ? 1.0 : 0.0));
    CHECK(jarque_bera(mesokurtic) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("jarque-bera is affine invariant") {
    std::mt19937_64 rng(3);
    std::exponential_distribution<double> d(1.0);
    std::vector<double> x(500), y(500);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = d(rng);
        y[i] = -3.5 * x[i] + 40.0;
    }
    CHECK(jarque_bera(y) == doctest::Approx(jarque_bera(x)).epsilon(1e-9));
}

TEST_CASE("jarque-bera errors") {
    const std::vector<double> flat(100, 4.0);
    CHECK_THROWS_WITH(jarque_bera(flat), "degenerate sample");
    const std::vector<double> tiny{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(jarque_bera(tiny), std::invalid_argument);
}

TEST_CASE("jarque-bera accepts gaussian draws at the 1% level") {
    int accepted = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> n(0.0, 1.0);
        std::vector<double> x(10000);
        for (double& v : x) v = n(rng);
        if (jarque_bera(x) < 9.21) ++accepted;
    }
    CHECK(accepted >= 95);
}

TEST_CASE("jarque-bera rejects synthetic ace as non-gaussian") {
    SynthConfig cfg;
    const AceSeries s = synth_ace(cfg);
    CHECK(jarque_bera(s.values) > 9.21);
}

namespace {

AceSeries series(std::vector<double> v) {
    AceSeries s;
    s.values = std::move(v);
    return s;
}

}  // namespace

TEST_CASE("reconstruct with zero commands returns the input") {
    const PlantConfig plant;
    const AceSeries corrected = series({3.0, -1.0, 8.0});
    const AceSeries zero = series({0.0, 0.0, 0.0});
    CHECK(reconstruct_uncorrected(corrected, zero, zero, plant).values == corrected.values);
}

TEST_CASE("reconstruct of zero corrected ace is the negated response") {
    const PlantConfig plant;
    const AceSeries zero = series({0.0, 0.0, 0.0, 0.0});
    const AceSeries rega = series({100.0, 100.0, 100.0, 100.0});
    const AceSeries regd = series({50.0, -20.0, 0.0, 10.0});
    const AceSeries out = reconstruct_uncorrected(zero, rega, regd, plant);

    // responses by hand: lag alpha = exp(-0.1), ramp 4/3 MW/s, eta_d = sqrt(0.85)
    const double a = std::exp(-0.1);
    const double g1 = (1 - a) * 100.0;
    const double ramp = 400.0 * 0.1 / 60.0 * 2.0;
    const double p1 = std::min(g1, ramp);
    CHECK(out.values[0] == 0.0);
    CHECK(out.values[1] == doctest::Approx(-(p1 + 50.0)).epsilon(1e-12));
    CHECK(out.values[2] == doctest::Approx(-(std::min(a * g1 + (1 - a) * 100.0, p1 + ramp) - 20.0)).epsilon(1e-12));
}

TEST_CASE("reconstruct length mismatch is a data error") {
    const PlantConfig plant;
    CHECK_THROWS_AS(reconstruct_uncorrected(series({1, 2, 3}), series({0, 0}), series({0, 0, 0}), plant), DataError);
}

TEST_CASE("reconstruct inverts the closed loop") {
    SynthConfig sc;
    sc.seed = 5;
    sc.horizon_s = 7200.0;
    const AceSeries ace = synth_ace(sc);
    CompareSettings settings;
    const BesRating rating{200.0, 15.0};
    const PlantConfig plant = plant_for(settings, rating);
    for (ControllerKind kind : {ControllerKind::pjm, ControllerKind::lqr}) {
        const ControllerSpec spec = controller_for(settings, rating, kind, nullptr);
        InitialConditions init;
        init.soc0_mwh = 20.0;
        const SimTrace tr = run_closed_loop(ace, spec, plant, init);
        AceSeries corrected = series(tr.p_ace_mw), rega = series(tr.rega_mw), regd = series(tr.regd_mw);
        const AceSeries back =
            reconstruct_uncorrected(corrected, rega, regd, plant, PlantState::initial(plant, init.soc0_mwh));
        double worst = 0.0;
        for (std::size_t i = 0; i < ace.size(); ++i) worst = std::max(worst, std::abs(back.values[i] - ace.values[i]));
        CHECK(worst <= 1e-9);
    }
}
