#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "ccccta/oscillator.hpp"

using namespace ccccta;

namespace {

// I_B1 = 56.5u, I_S1 = 200u, I_S2 = 225u, I_B2 = 45u, C = 5n: the stock
// oscillator bias point (ideal-model margin is slightly negative).
BiquadCircuit base_oscillator() {
    return {{56.5e-6, 200e-6, 25.85e-3}, {45e-6, 225e-6, 25.85e-3}, 5e-9, 5e-9};
}

BiquadCircuit started_oscillator(double margin) {
    BiquadCircuit c = base_oscillator();
    c.ccccta2.i_s = (4.0 * c.ccccta1.i_b) * (1.0 + margin);
    return c;
}

// per-cycle |x| peaks, cycles counted from the start of the series
std::vector<double> cycle_peaks(const std::vector<double>& series, size_t per_cycle) {
    std::vector<double> peaks;
    for (size_t begin = 0; begin + per_cycle <= series.size(); begin += per_cycle) {
        double peak = 0.0;
        for (size_t i = begin; i < begin + per_cycle; ++i) {
            peak = std::max(peak, std::abs(series[i]));
        }
        peaks.push_back(peak);
    }
    return peaks;
}

}  // namespace

TEST_CASE("characteristic coefficients") {
    const auto c = base_oscillator();
    const auto d = characteristic_coefficients(c);
    // g_m2 R_X1 = 225/226, so d1 = (1/226) * 5n
    CHECK(d[1] == doctest::Approx(2.212389380530977e-11).epsilon(1e-12));
    CHECK(d[1] > 0.0);

    SUBCASE("boundary bias zeroes the damping term exactly") {
        const auto boundary = started_oscillator(0.0);
        CHECK(characteristic_coefficients(boundary)[1] == 0.0);
    }
    SUBCASE("identical to the transfer-function denominator") {
        const auto h = transfer_function(c, {1.0, -2.0, 0.5});
        CHECK(d[0] == h.d2);
        CHECK(d[1] == h.d1);
        CHECK(d[2] == h.d0);
    }
}

TEST_CASE("oscillation frequency") {
    const auto c = base_oscillator();
    const double oracle =
        std::sqrt(200e-6 * 56.5e-6) / (2.0 * pi * 25.85e-3 * std::sqrt(25e-18));
    CHECK(oscillation_frequency_hz(c) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(oscillation_frequency_hz(c) == doctest::Approx(130.9e3).epsilon(1e-4));
    CHECK(oscillation_frequency_hz(c) == doctest::Approx(130e3).epsilon(1e-2));

    SUBCASE("doubling I_S1 scales by sqrt(2)") {
        BiquadCircuit d = c;
        d.ccccta1.i_s *= 2.0;
        CHECK(oscillation_frequency(d) ==
              doctest::Approx(std::sqrt(2.0) * oscillation_frequency(c)).epsilon(1e-14));
    }
    SUBCASE("filter design point produces the same frequency either way") {
        const BiquadCircuit f{{80e-6, 320e-6, 25.85e-3}, {80e-6, 2e-6, 25.85e-3}, 5e-9, 5e-9};
        CHECK(oscillation_frequency(f) == pole_frequency(f));
        CHECK(oscillation_frequency_hz(f) == doctest::Approx(197.0e3).epsilon(5e-4));
    }
}

TEST_CASE("oscillation condition") {
    SUBCASE("boundary") {
        const auto cond = oscillation_condition(started_oscillator(0.0));
        CHECK(cond.margin == 0.0);
        CHECK(cond.will_start);
    }
    SUBCASE("stock bias sits just below the boundary in the ideal model") {
        const auto cond = oscillation_condition(base_oscillator());
        CHECK(cond.gm2_rx1 == doctest::Approx(0.995575221238938).epsilon(1e-12));
        CHECK(cond.margin == doctest::Approx(-0.004424778761061954).epsilon(1e-9));
        CHECK_FALSE(cond.will_start);
    }
    SUBCASE("I_S2 = 4.4 I_B1 gives margin 0.1") {
        BiquadCircuit c = base_oscillator();
        c.ccccta2.i_s = 4.4 * c.ccccta1.i_b;
        CHECK(oscillation_condition(c).margin == doctest::Approx(0.1).epsilon(1e-12));
    }
}

TEST_CASE("state derivatives linearize to the characteristic polynomial") {
    const auto c = started_oscillator(0.1);
    const auto d = characteristic_coefficients(c);
    // closed-form Jacobian at the origin (tanh'(0) = 1):
    //   [ (g_m2 - 1/R_X1)/C1   -g_m1/C1 ]
    //   [ 1/(C2 R_X1)           0       ]
    const double rx1 = parasitic_resistance(c.ccccta1);
    const double trace = (transconductance(c.ccccta2) - 1.0 / rx1) / c.c1;
    const double det = transconductance(c.ccccta1) / (c.c1 * c.c2 * rx1);
    CHECK(trace == doctest::Approx(-d[1] / d[0]).epsilon(1e-12));
    CHECK(det == doctest::Approx(d[2] / d[0]).epsilon(1e-12));

    // the derivative function agrees with that Jacobian for small states
    const double h = 1e-9;
    const auto fx = state_derivatives(c, 50e-3, h, 0.0);
    const auto fy = state_derivatives(c, 50e-3, 0.0, h);
    CHECK(fx[0] / h == doctest::Approx(trace).epsilon(1e-9));
    CHECK(fx[1] / h == doctest::Approx(1.0 / (c.c2 * rx1)).epsilon(1e-9));
    CHECK(fy[0] / h == doctest::Approx(-transconductance(c.ccccta1) / c.c1).epsilon(1e-9));
    CHECK(fy[1] == 0.0);
}

TEST_CASE("simulation with positive margin settles near the closed-form frequency") {
    const auto c = started_oscillator(0.1);
    const auto run = simulate(default_oscillator_config(c));
    CHECK(run.settled);
    REQUIRE(run.est_freq_hz.has_value());
    CHECK(*run.est_freq_hz ==
          doctest::Approx(oscillation_frequency_hz(c)).epsilon(0.02));
    CHECK(run.steady_amplitude > 1e-3);
    CHECK(run.t.size() == run.v_o1.size());
    CHECK(run.v_o1.size() == run.v_o2.size());
    CHECK(run.v_o2.size() == run.v_o3.size());
    for (size_t i = 0; i < run.v_o2.size(); i += 97) {
        CHECK(run.v_o3[i] == -run.v_o2[i]);
    }
    REQUIRE(run.est_phase_o2_vs_o1_deg.has_value());
    CHECK(std::abs(*run.est_phase_o2_vs_o1_deg - (-90.0)) < 2.0);
}

TEST_CASE("simulation with negative margin decays and reports unsettled") {
    auto cfg = default_oscillator_config(base_oscillator());
    cfg.x1_init = 10e-3;
    const auto run = simulate(cfg);
    CHECK_FALSE(run.settled);

    const size_t per_cycle = run.v_o1.size() / 100;
    const auto peaks = cycle_peaks(run.v_o1, per_cycle);
    REQUIRE(peaks.size() > 20);
    for (size_t i = 11; i < peaks.size(); ++i) {
        CHECK(peaks[i] < peaks[i - 1]);  // monotone decay after the initial transient
    }
}

TEST_CASE("marginally stable run holds its amplitude with the limiter disabled") {
    auto cfg = default_oscillator_config(started_oscillator(0.0));
    cfg.v_limit = std::numeric_limits<double>::infinity();
    const auto run = simulate(cfg);
    const size_t per_cycle = run.v_o1.size() / 100;
    const auto peaks = cycle_peaks(run.v_o1, per_cycle);
    REQUIRE(peaks.size() >= 100);
    CHECK(std::abs(peaks.back() - peaks[1]) / peaks[1] < 1e-6);
}

TEST_CASE("limiter is neutral for small signals") {
    const auto c = started_oscillator(0.0);
    const double v_limit = 50e-3;
    auto cfg = default_oscillator_config(c);
    cfg.x1_init = v_limit / 100.0;
    cfg.duration = 10.0 / oscillation_frequency_hz(c);

    auto linear_cfg = cfg;
    linear_cfg.v_limit = std::numeric_limits<double>::infinity();
    cfg.v_limit = v_limit;

    const auto limited = simulate(cfg);
    const auto linear = simulate(linear_cfg);
    REQUIRE(limited.v_o1.size() == linear.v_o1.size());
    double worst = 0.0;
    for (size_t i = 0; i < limited.v_o1.size(); ++i) {
        worst = std::max(worst, std::abs(limited.v_o1[i] - linear.v_o1[i]));
    }
    CHECK(worst < 0.001 * cfg.x1_init);
}

TEST_CASE("steady amplitude grows with the startup margin") {
    double previous = 0.0;
    for (double margin : {0.02, 0.05, 0.1, 0.2}) {
        auto cfg = default_oscillator_config(started_oscillator(margin));
        cfg.duration = 3.0 * cfg.duration;  // generous settling room at small margins
        const auto run = simulate(cfg);
        CHECK(run.settled);
        CHECK(run.steady_amplitude > previous);
        previous = run.steady_amplitude;
    }
}

TEST_CASE("halving dt barely moves the settled frequency estimate") {
    const auto c = started_oscillator(0.1);
    auto cfg = default_oscillator_config(c);
    const auto coarse = simulate(cfg);
    cfg.dt /= 2.0;
    const auto fine = simulate(cfg);
    REQUIRE(coarse.est_freq_hz.has_value());
    REQUIRE(fine.est_freq_hz.has_value());
    CHECK(std::abs(*coarse.est_freq_hz - *fine.est_freq_hz) / *fine.est_freq_hz < 1e-4);
}

TEST_CASE("configuration validation") {
    const auto c = started_oscillator(0.1);
    const double period = 1.0 / oscillation_frequency_hz(c);
    SUBCASE("dt above T/200 is rejected") {
        auto cfg = default_oscillator_config(c);
        cfg.dt = period / 100.0;
        CHECK_THROWS_WITH_AS(simulate(cfg), doctest::Contains("dt too large"),
                             std::domain_error);
    }
    SUBCASE("too-short duration is rejected") {
        auto cfg = default_oscillator_config(c);
        cfg.duration = 50.0 * cfg.dt;
        CHECK_THROWS_AS(simulate(cfg), std::domain_error);
    }
    SUBCASE("non-positive limiter scale is rejected") {
        auto cfg = default_oscillator_config(c);
        cfg.v_limit = 0.0;
        CHECK_THROWS_AS(simulate(cfg), std::domain_error);
    }
}

TEST_CASE("unbounded growth raises a divergence error with its time") {
    auto cfg = default_oscillator_config(started_oscillator(2.0));
    cfg.v_limit = std::numeric_limits<double>::infinity();  // no limiting, margin 2
    cfg.duration = 10000.0 / oscillation_frequency_hz(cfg.circuit);
    try {
        simulate(cfg);
        FAIL("expected divergence");
    } catch (const divergence_error& err) {
        CHECK(err.time_s() > 0.0);
        CHECK(err.time_s() < cfg.duration);
    }
}

TEST_CASE("frequency estimation on synthetic signals") {
    const double dt = 10e-9;
    const double f = 130.9e3;
    SUBCASE("pure sine") {
        std::vector<double> wave;
        for (double t = 0.0; t < 2e-3; t += dt) {
            wave.push_back(std::sin(2.0 * pi * f * t));
        }
        CHECK(estimate_frequency(wave, dt) == doctest::Approx(f).epsilon(1e-3));
    }
    SUBCASE("1% third harmonic") {
        std::vector<double> wave;
        for (double t = 0.0; t < 2e-3; t += dt) {
            wave.push_back(std::sin(2.0 * pi * f * t) +
                           0.01 * std::sin(2.0 * pi * 3.0 * f * t));
        }
        CHECK(estimate_frequency(wave, dt) == doctest::Approx(f).epsilon(5e-3));
    }
    SUBCASE("flat series has no crossings") {
        const std::vector<double> flat(10000, 0.0);
        CHECK_THROWS_AS(estimate_frequency(flat, dt), estimation_error);
    }
    SUBCASE("too few crossings") {
        std::vector<double> wave;
        for (double t = 0.0; t < 2.0 / f; t += dt) {
            wave.push_back(std::sin(2.0 * pi * f * t));
        }
        CHECK_THROWS_AS(estimate_frequency(wave, dt), estimation_error);
    }
}

TEST_CASE("phase estimation on synthetic signals") {
    const double dt = 5e-9;
    const double f = 100e3;
    std::vector<double> a, b, neg;
    for (double t = 0.0; t < 20.5 / f; t += dt) {
        a.push_back(std::sin(2.0 * pi * f * t));
        b.push_back(-std::cos(2.0 * pi * f * t));
        neg.push_back(-a.back());
    }
    CHECK(estimate_phase(a, b, dt, f) == doctest::Approx(-90.0).epsilon(1e-6));
    CHECK(std::abs(wrap_phase_deg(estimate_phase(a, neg, dt, f) - 180.0)) < 1e-9);

    SUBCASE("window shorter than one period") {
        const std::vector<double> blip(100, 1.0);
        CHECK_THROWS_AS(estimate_phase(blip, blip, dt, f), estimation_error);
    }
    SUBCASE("mismatched lengths") {
        CHECK_THROWS_AS(estimate_phase(a, std::span<const double>(b).subspan(1), dt, f),
                        std::domain_error);
    }
}

TEST_CASE("wrap_phase_deg lands in (-180, 180]") {
    CHECK(wrap_phase_deg(270.0) == -90.0);
    CHECK(wrap_phase_deg(-270.0) == 90.0);
    CHECK(wrap_phase_deg(180.0) == 180.0);
    CHECK(wrap_phase_deg(-180.0) == 180.0);
    CHECK(wrap_phase_deg(540.0) == 180.0);
    CHECK(wrap_phase_deg(0.0) == 0.0);
}
