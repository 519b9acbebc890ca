// cccctakit: design and simulation front end for the two-CCCCTA voltage-mode
// biquad/oscillator. Subcommands: response, design filter, design oscillator,
// oscillate, sensitivity, verify.
//
// Exit codes: 0 success, 1 verify failure, 2 input/validation error,
// 3 strict-constraint failure, 4 numerical divergence.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ccccta/circuit_file.hpp"
#include "ccccta/csv.hpp"
#include "ccccta/designer.hpp"
#include "ccccta/oscillator.hpp"
#include "ccccta/quantity.hpp"
#include "ccccta/verify.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_invalid_input = 2;
constexpr int exit_strict_constraint = 3;
constexpr int exit_divergence = 4;

double parse_flag_quantity(const std::string& text, const char* flag) {
    try {
        return ccccta::parse_quantity(text);
    } catch (const std::invalid_argument& err) {
        throw std::invalid_argument(std::string(flag) + ": " + err.what());
    }
}

// Precedence for the thermal voltage: --vt flag, then CCCCTA_VT, then the
// library default. A vt key inside a circuit file still wins over the
// environment (it is explicit input), but a flag overrides everything.
struct VtResolution {
    std::optional<double> flag;
    std::optional<double> env;

    std::optional<double> fallback() const { return flag ? flag : env; }
    bool force() const { return flag.has_value(); }
};

VtResolution resolve_vt(const std::optional<std::string>& flag_text) {
    VtResolution r;
    if (const char* env = std::getenv("CCCCTA_VT")) {
        r.env = parse_flag_quantity(env, "CCCCTA_VT");
    }
    if (flag_text) {
        r.flag = parse_flag_quantity(*flag_text, "--vt");
    }
    return r;
}

ccccta::BiquadCircuit load_circuit(const std::string& path, const VtResolution& vt) {
    ccccta::BiquadCircuit c = ccccta::load_circuit_file(path, vt.fallback());
    if (vt.force()) {
        c.ccccta1.v_t = *vt.flag;
        c.ccccta2.v_t = *vt.flag;
        ccccta::validate(c);
    }
    return c;
}

void print_constraint(const ccccta::ModeConstraint& constraint) {
    if (constraint.required_gm1_rx1) {
        std::printf("constraint        g_m1*R_X1 required %g, actual %g (%s)\n",
                    *constraint.required_gm1_rx1, constraint.actual_gm1_rx1,
                    constraint.satisfied ? "satisfied" : "NOT satisfied");
    } else {
        std::printf("constraint        none for this mode (g_m1*R_X1 = %g)\n",
                    constraint.actual_gm1_rx1);
    }
}

int cmd_response(const std::string& circuit_path, const std::string& mode_text,
                 const std::string& fstart_text, const std::string& fstop_text,
                 int points_per_decade, bool unwrap, const std::string& out_path,
                 const VtResolution& vt) {
    const auto mode = ccccta::parse_filter_mode(mode_text);
    if (!mode) {
        throw std::invalid_argument("unknown mode '" + mode_text +
                                    "' (use lp, bp, hp, br or ap)");
    }
    const double f_start = parse_flag_quantity(fstart_text, "--fstart");
    const double f_stop = parse_flag_quantity(fstop_text, "--fstop");

    const ccccta::BiquadCircuit circuit = load_circuit(circuit_path, vt);
    const auto selection = ccccta::build_mode(circuit, *mode);
    const auto h = ccccta::transfer_function(circuit, selection.weights);
    const auto points = ccccta::sweep(h, f_start, f_stop, points_per_decade, unwrap);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw std::invalid_argument("cannot write '" + out_path + "'");
    }
    ccccta::write_response_csv(out, points);

    std::printf("mode              %s\n", ccccta::to_string(*mode));
    print_constraint(selection.constraint);
    std::printf("f0_hz             %.17g\n", ccccta::pole_frequency_hz(circuit));
    std::printf("q_exact           %.17g\n", ccccta::quality_factor(circuit));
    std::printf("q_approx          %.17g\n", ccccta::quality_factor_approx(circuit));
    std::printf("bw_hz             %.17g\n",
                ccccta::bandwidth(circuit) / (2.0 * ccccta::pi));
    std::printf("rows              %zu\n", points.size());
    std::printf("wrote             %s\n", out_path.c_str());
    return exit_ok;
}

int report_design(const ccccta::BiasDesign& design, bool strict,
                  const std::optional<std::string>& out_path) {
    std::printf("ib1               %s\n", ccccta::render_quantity(design.circuit.ccccta1.i_b).c_str());
    std::printf("is1               %s\n", ccccta::render_quantity(design.circuit.ccccta1.i_s).c_str());
    std::printf("ib2               %s\n", ccccta::render_quantity(design.circuit.ccccta2.i_b).c_str());
    std::printf("is2               %s\n", ccccta::render_quantity(design.circuit.ccccta2.i_s).c_str());
    std::printf("achieved_f0_hz    %.17g\n", design.achieved_f0_hz);
    std::printf("achieved_q_approx %.17g\n", design.achieved_q);
    std::printf("q_exact           %.17g\n", ccccta::quality_factor(design.circuit));
    const auto condition = ccccta::oscillation_condition(design.circuit);
    std::printf("co_margin         %.17g\n", condition.margin);
    for (const auto& note : design.constraint_notes) {
        std::printf("note              %s\n", note.c_str());
    }

    if (out_path) {
        ccccta::save_circuit_file(*out_path, design.circuit);
        std::printf("wrote             %s\n", out_path->c_str());
    } else {
        std::ostringstream body;
        ccccta::write_circuit_file(body, design.circuit);
        std::printf("circuit:\n%s", body.str().c_str());
    }

    if (strict && !design.constraint_notes.empty()) {
        std::fprintf(stderr, "error: design constraints not met under --strict\n");
        return exit_strict_constraint;
    }
    return exit_ok;
}

int cmd_design_filter(const std::string& f0_text, const std::string& q_text,
                      const std::optional<std::string>& c_text,
                      const std::optional<std::string>& c1_text,
                      const std::optional<std::string>& c2_text,
                      const std::string& mode_text, const std::string& budget_text,
                      bool exact_q, bool strict,
                      const std::optional<std::string>& out_path,
                      const VtResolution& vt) {
    const auto mode = ccccta::parse_filter_mode(mode_text);
    if (!mode) {
        throw std::invalid_argument("unknown mode '" + mode_text + "'");
    }
    ccccta::FilterSpec spec;
    spec.f0_hz = parse_flag_quantity(f0_text, "--f0");
    spec.q = parse_flag_quantity(q_text, "--q");
    if (c_text) {
        spec.c1 = spec.c2 = parse_flag_quantity(*c_text, "--c");
    }
    if (c1_text) spec.c1 = parse_flag_quantity(*c1_text, "--c1");
    if (c2_text) spec.c2 = parse_flag_quantity(*c2_text, "--c2");
    if (!c_text && (!c1_text || !c2_text)) {
        throw std::invalid_argument("capacitance required: pass --c or both --c1 and --c2");
    }
    spec.mode = *mode;
    spec.gm2_rx1_budget = parse_flag_quantity(budget_text, "--budget");
    spec.refine_exact_q = exact_q;
    spec.v_t = vt.fallback().value_or(ccccta::default_thermal_voltage);
    return report_design(ccccta::design_filter(spec), strict, out_path);
}

int cmd_design_oscillator(const std::string& f_text,
                          const std::optional<std::string>& c_text,
                          const std::optional<std::string>& c1_text,
                          const std::optional<std::string>& c2_text,
                          const std::string& ratio_text, const std::string& margin_text,
                          const std::optional<std::string>& out_path,
                          const VtResolution& vt) {
    ccccta::OscillatorSpec spec;
    spec.f_hz = parse_flag_quantity(f_text, "--f");
    if (c_text) {
        spec.c1 = spec.c2 = parse_flag_quantity(*c_text, "--c");
    }
    if (c1_text) spec.c1 = parse_flag_quantity(*c1_text, "--c1");
    if (c2_text) spec.c2 = parse_flag_quantity(*c2_text, "--c2");
    if (!c_text && (!c1_text || !c2_text)) {
        throw std::invalid_argument("capacitance required: pass --c or both --c1 and --c2");
    }
    spec.current_ratio = parse_flag_quantity(ratio_text, "--ratio");
    spec.startup_margin = parse_flag_quantity(margin_text, "--margin");
    spec.v_t = vt.fallback().value_or(ccccta::default_thermal_voltage);
    return report_design(ccccta::design_oscillator(spec), false, out_path);
}

int cmd_oscillate(const std::string& circuit_path,
                  const std::optional<std::string>& duration_text,
                  const std::optional<std::string>& dt_text,
                  const std::string& v_limit_text, const std::string& x1_init_text,
                  const std::string& out_path, const VtResolution& vt) {
    const ccccta::BiquadCircuit circuit = load_circuit(circuit_path, vt);
    ccccta::OscillatorConfig cfg = ccccta::default_oscillator_config(circuit);
    cfg.v_limit = parse_flag_quantity(v_limit_text, "--vlimit");
    cfg.x1_init = parse_flag_quantity(x1_init_text, "--x1init");
    if (duration_text) cfg.duration = parse_flag_quantity(*duration_text, "--duration");
    if (dt_text) cfg.dt = parse_flag_quantity(*dt_text, "--dt");

    const auto condition = ccccta::oscillation_condition(circuit);
    const double fo_theory = ccccta::oscillation_frequency_hz(circuit);
    const auto run = ccccta::simulate(cfg);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw std::invalid_argument("cannot write '" + out_path + "'");
    }
    ccccta::write_run_csv(out, run);

    std::printf("gm2_rx1           %.17g\n", condition.gm2_rx1);
    std::printf("co_margin         %.17g\n", condition.margin);
    std::printf("fo_theory_hz      %.17g\n", fo_theory);
    if (run.est_freq_hz) {
        std::printf("est_freq_hz       %.17g\n", *run.est_freq_hz);
        std::printf("rel_freq_error    %.3e\n",
                    (*run.est_freq_hz - fo_theory) / fo_theory);
    } else {
        std::printf("est_freq_hz       n/a\n");
    }
    if (run.est_phase_o2_vs_o1_deg) {
        std::printf("phase_o2_vs_o1    %.6f deg\n", *run.est_phase_o2_vs_o1_deg);
    } else {
        std::printf("phase_o2_vs_o1    n/a\n");
    }
    std::printf("steady_amplitude  %.17g V\n", run.steady_amplitude);
    std::printf("settled           %s\n", run.settled ? "true" : "false");
    std::printf("samples           %zu\n", run.t.size());
    std::printf("wrote             %s\n", out_path.c_str());
    return exit_ok;
}

int cmd_sensitivity(const std::string& circuit_path, const std::string& step_text,
                    const VtResolution& vt) {
    const double rel_step = parse_flag_quantity(step_text, "--step");
    const ccccta::BiquadCircuit circuit = load_circuit(circuit_path, vt);
    std::printf("%-10s %-22s %10s %14s %12s\n", "parameter", "target", "analytic",
                "numeric", "abs_diff");
    double worst = 0.0;
    for (const auto& entry : ccccta::analytic_sensitivities()) {
        const double numeric =
            ccccta::numeric_sensitivity(circuit, entry.parameter, entry.target, rel_step);
        const double diff = std::abs(numeric - entry.value);
        worst = std::max(worst, diff);
        std::printf("%-10s %-22s %10.1f %14.9f %12.3e\n",
                    ccccta::to_string(entry.parameter), ccccta::to_string(entry.target),
                    entry.value, numeric, diff);
    }
    std::printf("max_abs_diff      %.3e\n", worst);
    return exit_ok;
}

int cmd_verify(const VtResolution& vt) {
    const double v_t = vt.fallback().value_or(ccccta::default_thermal_voltage);

    std::printf("reference design points (thermal voltage %s):\n",
                ccccta::render_quantity(v_t).c_str());
    std::printf("  %-34s %12s %12s %12s %10s %10s\n", "point", "theory_hz", "sim_hz",
                "computed_hz", "vs_theory", "vs_sim");
    for (const auto& row : ccccta::compare_reference_points(v_t)) {
        char theory[24] = "-";
        char err_theory[24] = "-";
        if (row.theoretical_hz) {
            std::snprintf(theory, sizeof(theory), "%.0f", *row.theoretical_hz);
            std::snprintf(err_theory, sizeof(err_theory), "%+.2f%%",
                          100.0 * *row.rel_err_theoretical);
        }
        std::printf("  %-34s %12s %12.0f %12.1f %10s %+9.2f%%\n", row.name.c_str(),
                    theory, row.simulated_hz, row.computed_hz, err_theory,
                    100.0 * row.rel_err_simulated);
    }

    std::printf("\nacceptance criteria:\n");
    bool all_pass = true;
    for (const auto& r : ccccta::run_acceptance_checks(v_t)) {
        std::printf("%s  %-38s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    std::printf("%s\n", all_pass ? "verify: all criteria passed" : "verify: FAILED");
    return all_pass ? exit_ok : exit_verify_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CCCCTA biquad filter / quadrature oscillator design toolkit"};
    app.require_subcommand(1);

    std::optional<std::string> vt_flag;

    // response
    auto* response = app.add_subcommand("response", "sweep a filter-mode frequency response to CSV");
    std::string r_circuit, r_mode, r_out;
    std::string r_fstart = "10k", r_fstop = "10M";
    int r_ppd = 50;
    bool r_unwrap = false;
    response->add_option("--circuit", r_circuit, "circuit file")->required();
    response->add_option("--mode", r_mode, "lp, bp, hp, br or ap")->required();
    response->add_option("--out", r_out, "output CSV path")->required();
    response->add_option("--fstart", r_fstart, "start frequency [Hz] (default 10k)");
    response->add_option("--fstop", r_fstop, "stop frequency [Hz] (default 10M)");
    response->add_option("--points-per-decade", r_ppd, "grid density (default 50)");
    response->add_flag("--unwrap", r_unwrap, "unwrap phase across the sweep");
    response->add_option("--vt", vt_flag, "thermal voltage override");

    // design filter | oscillator
    auto* design = app.add_subcommand("design", "invert the design equations to bias currents");
    design->require_subcommand(1);

    auto* dfilter = design->add_subcommand("filter", "target f0 and Q");
    std::string df_f0 = "100k", df_mode = "bp", df_q = "1", df_budget = "0.01";
    std::optional<std::string> df_c, df_c1, df_c2, df_out;
    bool df_exact_q = false, df_strict = false;
    dfilter->add_option("--f0", df_f0, "target pole frequency [Hz] (default 100k)");
    dfilter->add_option("--q", df_q, "target quality factor (default 1)");
    dfilter->add_option("--c", df_c, "C1 = C2 [F]");
    dfilter->add_option("--c1", df_c1, "C1 [F]");
    dfilter->add_option("--c2", df_c2, "C2 [F]");
    dfilter->add_option("--mode", df_mode, "intended mode for constraint checking (default bp)");
    dfilter->add_option("--budget", df_budget, "g_m2 R_X1 budget in (0, 0.1) (default 0.01)");
    dfilter->add_flag("--exact-q", df_exact_q, "correct the current ratio for the exact-Q form");
    dfilter->add_flag("--strict", df_strict, "exit 3 when a mode constraint is unmet");
    dfilter->add_option("--out", df_out, "circuit file to write");
    dfilter->add_option("--vt", vt_flag, "thermal voltage override");

    auto* dosc = design->add_subcommand("oscillator", "target oscillation frequency");
    std::string do_f, do_ratio = "4", do_margin = "0.05";
    std::optional<std::string> do_c, do_c1, do_c2, do_out;
    dosc->add_option("--f", do_f, "target oscillation frequency [Hz]")->required();
    dosc->add_option("--c", do_c, "C1 = C2 [F]");
    dosc->add_option("--c1", do_c1, "C1 [F]");
    dosc->add_option("--c2", do_c2, "C2 [F]");
    dosc->add_option("--ratio", do_ratio, "I_S1/I_B1 (default 4)");
    dosc->add_option("--margin", do_margin, "startup margin (default 0.05)");
    dosc->add_option("--out", do_out, "circuit file to write");
    dosc->add_option("--vt", vt_flag, "thermal voltage override");

    // oscillate
    auto* oscillate = app.add_subcommand("oscillate", "time-domain oscillator run to CSV");
    std::string o_circuit, o_out, o_vlimit = "50m", o_x1init = "1m";
    std::optional<std::string> o_duration, o_dt;
    oscillate->add_option("--circuit", o_circuit, "circuit file")->required();
    oscillate->add_option("--out", o_out, "output CSV path")->required();
    oscillate->add_option("--duration", o_duration, "run length [s] (default 100 cycles)");
    oscillate->add_option("--dt", o_dt, "integration step [s] (default T/500, max T/200)");
    oscillate->add_option("--vlimit", o_vlimit, "soft limiter scale [V] (default 50m)");
    oscillate->add_option("--x1init", o_x1init, "startup perturbation [V] (default 1m)");
    oscillate->add_option("--vt", vt_flag, "thermal voltage override");

    // sensitivity
    auto* sensitivity = app.add_subcommand("sensitivity", "analytic vs finite-difference sensitivities");
    std::string s_circuit, s_step = "1e-4";
    sensitivity->add_option("--circuit", s_circuit, "circuit file")->required();
    sensitivity->add_option("--step", s_step, "relative step in [1e-8, 1e-2] (default 1e-4)");
    sensitivity->add_option("--vt", vt_flag, "thermal voltage override");

    // verify
    auto* verify = app.add_subcommand("verify", "check the bundled design points and criteria");
    verify->add_option("--vt", vt_flag, "thermal voltage override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_invalid_input;
    }

    try {
        const VtResolution vt = resolve_vt(vt_flag);
        if (response->parsed()) {
            return cmd_response(r_circuit, r_mode, r_fstart, r_fstop, r_ppd, r_unwrap,
                                r_out, vt);
        }
        if (dfilter->parsed()) {
            return cmd_design_filter(df_f0, df_q, df_c, df_c1, df_c2, df_mode, df_budget,
                                     df_exact_q, df_strict, df_out, vt);
        }
        if (dosc->parsed()) {
            return cmd_design_oscillator(do_f, do_c, do_c1, do_c2, do_ratio, do_margin,
                                         do_out, vt);
        }
        if (oscillate->parsed()) {
            return cmd_oscillate(o_circuit, o_duration, o_dt, o_vlimit, o_x1init, o_out, vt);
        }
        if (sensitivity->parsed()) {
            return cmd_sensitivity(s_circuit, s_step, vt);
        }
        if (verify->parsed()) {
            return cmd_verify(vt);
        }
        std::fprintf(stderr, "error: no subcommand selected\n");
        return exit_invalid_input;
    } catch (const ccccta::divergence_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return exit_divergence;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return exit_invalid_input;
    }
}
