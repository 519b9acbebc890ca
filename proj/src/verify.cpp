#include "ccccta/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>

#include "ccccta/biquad.hpp"
#include "ccccta/designer.hpp"
#include "ccccta/oscillator.hpp"

namespace ccccta {

namespace {

std::string strf(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

BiquadCircuit reference_filter_circuit(double v_t) {
    return {{80e-6, 320e-6, v_t}, {80e-6, 2e-6, v_t}, 5e-9, 5e-9};
}

BiquadCircuit reference_oscillator_circuit(double v_t) {
    return {{56.5e-6, 200e-6, v_t}, {45e-6, 225e-6, v_t}, 5e-9, 5e-9};
}

double log_uniform(std::mt19937& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(std::log(lo), std::log(hi));
    return std::exp(d(rng));
}

BiquadCircuit random_circuit(std::mt19937& rng, double v_t) {
    std::uniform_real_distribution<double> damping(0.0, 0.9);
    const double i_b1 = log_uniform(rng, 1e-6, 1e-3);
    const double i_s1 = log_uniform(rng, 1e-6, 1e-3);
    const double i_b2 = log_uniform(rng, 1e-6, 1e-3);
    const double i_s2 = damping(rng) * (4.0 * i_b1);
    const double c1 = log_uniform(rng, 100e-12, 100e-9);
    const double c2 = log_uniform(rng, 100e-12, 100e-9);
    return {{i_b1, i_s1, v_t}, {i_b2, i_s2, v_t}, c1, c2};
}

double circular_distance_deg(double a, double b) {
    return std::abs(wrap_phase_deg(a - b));
}

CheckResult check_filter_design_point(double v_t) {
    Timer timer;
    const BiquadCircuit c = reference_filter_circuit(v_t);
    const double f0 = pole_frequency_hz(c);
    const double q = quality_factor_approx(c);
    const double f0_err = std::abs(f0 - 196.71e3) / 196.71e3;
    const double q_err = std::abs(q - 1.0);
    const double elapsed = timer.seconds();
    const bool pass = f0_err <= 0.005 && q_err <= 1e-9 && elapsed < 1.0;
    return {"filter design point",
            pass,
            strf("f0 = %.2f Hz (ref 196710, rel err %.2e <= 5e-3), |Q-1| = %.2e <= 1e-9, "
                 "%.3f s < 1 s",
                 f0, f0_err, q_err, elapsed)};
}

CheckResult check_bp_tuning_sweep(double v_t) {
    Timer timer;
    const double currents[] = {30e-6, 60e-6, 120e-6, 240e-6};
    const double simulated[] = {36e3, 72e3, 142e3, 276e3};
    bool pass = true;
    double worst_closed = 0.0, worst_sim = 0.0, worst_q = 0.0;
    for (int i = 0; i < 4; ++i) {
        const BiquadCircuit c{{currents[i], currents[i], v_t},
                              {80e-6, 2e-6, v_t},
                              5e-9,
                              5e-9};
        const double f0 = pole_frequency_hz(c);
        const double closed_form = currents[i] / (2.0 * pi * v_t * 5e-9);
        const double err_closed = std::abs(f0 - closed_form) / closed_form;
        const double err_sim = std::abs(f0 - simulated[i]) / simulated[i];
        const double err_q = std::abs(quality_factor_approx(c) - 0.5);
        worst_closed = std::max(worst_closed, err_closed);
        worst_sim = std::max(worst_sim, err_sim);
        worst_q = std::max(worst_q, err_q);
        pass = pass && err_closed <= 1e-9 && err_sim <= 0.10 && err_q <= 1e-9;
    }
    const double elapsed = timer.seconds();
    pass = pass && elapsed < 1.0;
    return {"band-pass tuning sweep",
            pass,
            strf("worst |f0-I/(2 pi Vt C)| rel = %.2e <= 1e-9, worst vs simulated = "
                 "%.2e <= 0.1, worst |Q-0.5| = %.2e, %.3f s < 1 s",
                 worst_closed, worst_sim, worst_q, elapsed)};
}

CheckResult check_orthogonal_tuning(double v_t) {
    std::mt19937 rng(20240811);
    bool pass = true;
    double worst_f = 0.0, worst_q = 0.0;
    for (int i = 0; i < 100; ++i) {
        const BiquadCircuit c = random_circuit(rng, v_t);
        const double k = log_uniform(rng, 0.1, 10.0);
        BiquadCircuit scaled = c;
        scaled.ccccta1.i_b *= k;
        scaled.ccccta1.i_s *= k;
        const double f_err =
            std::abs(pole_frequency(scaled) - k * pole_frequency(c)) /
            (k * pole_frequency(c));
        const double q_err =
            std::abs(quality_factor_approx(scaled) - quality_factor_approx(c)) /
            quality_factor_approx(c);
        worst_f = std::max(worst_f, f_err);
        worst_q = std::max(worst_q, q_err);
        pass = pass && f_err <= 1e-9 && q_err <= 1e-12;
    }
    return {"orthogonal tuning over 100 random circuits",
            pass,
            strf("worst f0 scaling error = %.2e <= 1e-9, worst approx-Q change = "
                 "%.2e <= 1e-12",
                 worst_f, worst_q)};
}

CheckResult check_mode_shapes(double v_t) {
    const BiquadCircuit c = reference_filter_circuit(v_t);
    const double f0 = pole_frequency_hz(c);

    const auto lp = transfer_function(c, mode_weights(FilterMode::low_pass));
    const double lp_dc = std::abs(evaluate_response(lp, 1.0).magnitude_db);

    const auto hp = transfer_function(c, mode_weights(FilterMode::high_pass));
    const double hp_asym = std::abs(evaluate_response(hp, 1000.0 * f0).magnitude_db);

    const auto br = transfer_function(c, mode_weights(FilterMode::band_reject));
    const double br_notch = evaluate_response(br, f0).magnitude_db;

    // all-pass needs I_S1 = 8 I_B1 and a small g_m2 R_X1 budget
    const double ib = 40e-6;
    const BiquadCircuit ap_circuit{{ib, 8.0 * ib, v_t},
                                   {ib, 0.005 * (4.0 * ib), v_t},
                                   5e-9,
                                   5e-9};
    const auto ap = transfer_function(ap_circuit, mode_weights(FilterMode::all_pass));
    const double ap_f0 = pole_frequency_hz(ap_circuit);
    double ap_ripple = 0.0;
    for (const auto& p : sweep(ap, ap_f0 / 100.0, ap_f0 * 100.0, 50)) {
        ap_ripple = std::max(ap_ripple, std::abs(p.magnitude_db));
    }
    const double ap_phase =
        circular_distance_deg(evaluate_response(ap, ap_f0).phase_deg, -180.0);

    const bool pass = lp_dc <= 1e-6 && hp_asym <= 0.01 && br_notch <= -80.0 &&
                      ap_ripple <= 0.05 && ap_phase <= 0.1;
    return {"mode shapes",
            pass,
            strf("LP DC |%.1e| dB <= 1e-6, HP@1000 f0 |%.1e| dB <= 0.01, BR@f0 %.0f dB "
                 "<= -80, AP ripple %.3f dB <= 0.05, AP phase off -180 by %.1e deg <= 0.1",
                 lp_dc, hp_asym, br_notch, ap_ripple, ap_phase)};
}

CheckResult check_sensitivities(double v_t) {
    Timer timer;
    const BiquadCircuit c = reference_filter_circuit(v_t);
    double worst = 0.0;
    for (const auto& entry : analytic_sensitivities()) {
        const double numeric = numeric_sensitivity(c, entry.parameter, entry.target, 1e-4);
        worst = std::max(worst, std::abs(numeric - entry.value));
    }
    const double elapsed = timer.seconds();
    const bool pass = worst <= 1e-3 && elapsed < 1.0;
    return {"sensitivities vs closed form",
            pass,
            strf("worst |numeric - analytic| = %.2e <= 1e-3 over 12 entries, %.3f s < 1 s",
                 worst, elapsed)};
}

struct OscillatorChecks {
    CheckResult frequency;
    CheckResult quadrature;
};

OscillatorChecks check_oscillator(double v_t) {
    Timer timer;
    const BiquadCircuit base = reference_oscillator_circuit(v_t);
    const double fo = oscillation_frequency_hz(base);
    const double fo_err = std::abs(fo - 130e3) / 130e3;

    // limiter-stabilized run at startup margin 0.1
    BiquadCircuit started = base;
    started.ccccta2.i_s = (4.0 * started.ccccta1.i_b) * 1.1;
    const double fo_run = oscillation_frequency_hz(started);
    const OscillatorRun run = simulate(default_oscillator_config(started));
    const double est_err =
        run.est_freq_hz ? std::abs(*run.est_freq_hz - fo_run) / fo_run : 1.0;
    const double elapsed = timer.seconds();

    const bool freq_pass =
        fo_err <= 0.01 && run.settled && run.est_freq_hz && est_err <= 0.02 &&
        elapsed < 30.0;
    CheckResult frequency{
        "oscillator frequency",
        freq_pass,
        strf("FO = %.2f Hz (ref 130000, rel err %.2e <= 0.01); margin-0.1 run settled=%s, "
             "zero-crossing estimate off by %.2e <= 0.02, %.2f s < 30 s",
             fo, fo_err, run.settled ? "true" : "false", est_err, elapsed)};

    const double phase_21 = run.est_phase_o2_vs_o1_deg.value_or(1e9);
    const size_t half = run.v_o2.size() / 2;
    double phase_32_dist = 1e9;
    if (run.est_freq_hz) {
        const double phase_32 = estimate_phase(
            std::span<const double>(run.v_o2).subspan(half),
            std::span<const double>(run.v_o3).subspan(half), run.t[1], *run.est_freq_hz);
        phase_32_dist = circular_distance_deg(phase_32, 180.0);
    }
    const bool quad_pass =
        std::abs(phase_21 - (-90.0)) <= 2.0 && phase_32_dist <= 1e-9;
    CheckResult quadrature{
        "quadrature outputs",
        quad_pass,
        strf("v_o2 vs v_o1 = %.3f deg (within -90 +- 2), v_o3 vs v_o2 off 180 by %.1e deg",
             phase_21, phase_32_dist)};
    return {frequency, quadrature};
}

CheckResult check_independent_control(double v_t) {
    const BiquadCircuit base = reference_oscillator_circuit(v_t);
    bool fo_invariant = true;
    for (double scale : {0.5, 1.0, 2.0, 4.0}) {
        BiquadCircuit c = base;
        c.ccccta2.i_s = scale * base.ccccta2.i_s;
        fo_invariant =
            fo_invariant && oscillation_frequency(c) == oscillation_frequency(base);
    }
    bool margin_invariant = true;
    for (double scale : {0.5, 1.0, 2.0, 4.0}) {
        BiquadCircuit c = base;
        c.ccccta1.i_s = scale * base.ccccta1.i_s;
        margin_invariant = margin_invariant &&
                           oscillation_condition(c).margin ==
                               oscillation_condition(base).margin;
    }
    const bool pass = fo_invariant && margin_invariant;
    return {"independent FO/CO control",
            pass,
            strf("FO bit-invariant under I_S2 sweep: %s; CO margin bit-invariant under "
                 "I_S1 sweep: %s",
                 fo_invariant ? "yes" : "no", margin_invariant ? "yes" : "no")};
}

CheckResult check_shared_coefficients(double v_t) {
    std::mt19937 rng(7151);
    bool identical = true;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const BiquadCircuit c = random_circuit(rng, v_t);
        const auto den = denominator_coefficients(c);
        const auto chr = characteristic_coefficients(c);
        identical = identical && den[0] == chr[0] && den[1] == chr[1] && den[2] == chr[2];
        const auto h = transfer_function(c, {1.0, 1.0, 1.0});
        identical = identical && h.d2 == den[0] && h.d1 == den[1] && h.d0 == den[2];
        const double w_exact = pole_frequency(c);
        const double w_bias = pole_frequency_from_bias(c);
        worst = std::max(worst, std::abs(w_exact - w_bias) / w_exact);
    }
    const bool pass = identical && worst <= 1e-12;
    return {"shared-coefficient consistency",
            pass,
            strf("denominators bit-identical over 1000 circuits: %s; worst w0 "
                 "two-route gap = %.2e <= 1e-12",
                 identical ? "yes" : "no", worst)};
}

CheckResult check_designer_round_trip(double v_t) {
    std::mt19937 rng(90210);
    double worst_f = 0.0, worst_q = 0.0;
    for (int i = 0; i < 1000; ++i) {
        FilterSpec spec;
        spec.f0_hz = log_uniform(rng, 1e3, 10e6);
        spec.q = log_uniform(rng, 0.2, 5.0);
        spec.c1 = log_uniform(rng, 100e-12, 100e-9);
        spec.c2 = log_uniform(rng, 100e-12, 100e-9);
        spec.gm2_rx1_budget = log_uniform(rng, 1e-3, 0.05);
        spec.v_t = v_t;
        const BiasDesign d = design_filter(spec);
        worst_f = std::max(worst_f, std::abs(d.achieved_f0_hz - spec.f0_hz) / spec.f0_hz);
        worst_q = std::max(worst_q, std::abs(d.achieved_q - spec.q) / spec.q);
    }
    double worst_fo = 0.0;
    for (int i = 0; i < 1000; ++i) {
        OscillatorSpec spec;
        spec.f_hz = log_uniform(rng, 1e3, 10e6);
        spec.c1 = log_uniform(rng, 100e-12, 100e-9);
        spec.c2 = log_uniform(rng, 100e-12, 100e-9);
        spec.current_ratio = log_uniform(rng, 1.0, 16.0);
        spec.startup_margin = log_uniform(rng, 1e-3, 0.3);
        spec.v_t = v_t;
        const BiasDesign d = design_oscillator(spec);
        const double fo = oscillation_frequency_hz(d.circuit);
        worst_fo = std::max(worst_fo, std::abs(fo - spec.f_hz) / spec.f_hz);
    }
    const bool pass = worst_f <= 1e-9 && worst_q <= 1e-9 && worst_fo <= 1e-9;
    return {"designer round-trip",
            pass,
            strf("1000 filter specs: worst f0 err %.2e, worst approx-Q err %.2e; 1000 "
                 "oscillator specs: worst FO err %.2e (all <= 1e-9)",
                 worst_f, worst_q, worst_fo)};
}

}  // namespace

std::vector<CheckResult> run_acceptance_checks(double v_t) {
    std::vector<CheckResult> results;
    results.push_back(check_filter_design_point(v_t));
    results.push_back(check_bp_tuning_sweep(v_t));
    results.push_back(check_orthogonal_tuning(v_t));
    results.push_back(check_mode_shapes(v_t));
    results.push_back(check_sensitivities(v_t));
    const OscillatorChecks osc = check_oscillator(v_t);
    results.push_back(osc.frequency);
    results.push_back(osc.quadrature);
    results.push_back(check_independent_control(v_t));
    results.push_back(check_shared_coefficients(v_t));
    results.push_back(check_designer_round_trip(v_t));
    return results;
}

}  // namespace ccccta
