#include "ccccta/designer.hpp"

#include <cmath>
#include <sstream>

namespace ccccta {

namespace {

void require_positive(double v, const char* field) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw std::domain_error(std::string(field) + " must be positive");
    }
}

std::string describe(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

BiasDesign design_filter(const FilterSpec& spec) {
    require_positive(spec.f0_hz, "f0_hz");
    require_positive(spec.q, "q");
    require_positive(spec.c1, "c1");
    require_positive(spec.c2, "c2");
    require_positive(spec.v_t, "v_t");
    if (!(spec.gm2_rx1_budget > 0.0 && spec.gm2_rx1_budget < 0.1)) {
        throw std::domain_error("gm2_rx1_budget must lie in (0, 0.1)");
    }

    // I_S1/I_B1 from the Q equation, sqrt(I_S1 I_B1) from the frequency equation.
    double ratio = 4.0 * spec.q * spec.q * (spec.c2 / spec.c1);
    const double root_product =
        2.0 * pi * spec.f0_hz * spec.v_t * std::sqrt(spec.c1 * spec.c2);

    BiasDesign design;
    if (spec.refine_exact_q) {
        // The exact Q exceeds the approximate form by 1/(1 - g_m2 R_X1); aiming
        // the approximate design at Q (1 - budget) lands the exact form on Q.
        const double shrink = (1.0 - spec.gm2_rx1_budget) * (1.0 - spec.gm2_rx1_budget);
        ratio *= shrink;
        design.constraint_notes.push_back(
            "exact-q refinement applied: I_S1/I_B1 scaled by (1-budget)^2 = " +
            describe(shrink));
    }

    const double i_b1 = root_product / std::sqrt(ratio);
    const double i_s1 = root_product * std::sqrt(ratio);
    const double i_s2 = spec.gm2_rx1_budget * (4.0 * i_b1);
    if (!std::isfinite(i_b1) || !(i_b1 > 0.0) || !std::isfinite(i_s1) ||
        !(i_s1 > 0.0) || !std::isfinite(i_s2)) {
        throw design_error("filter spec is not realizable: bias currents out of range");
    }

    design.circuit = BiquadCircuit{{i_b1, i_s1, spec.v_t},
                                   {i_b1, i_s2, spec.v_t},
                                   spec.c1,
                                   spec.c2};
    validate(design.circuit);
    design.achieved_f0_hz = pole_frequency_hz(design.circuit);
    design.achieved_q = quality_factor_approx(design.circuit);

    const ModeSelection sel = build_mode(design.circuit, spec.mode);
    if (!sel.constraint.satisfied) {
        const double required = *sel.constraint.required_gm1_rx1;
        // C1/C2 that meets the mode requirement at the requested Q:
        // g_m1 R_X1 = Q^2 C2/C1 = required.
        const double cap_ratio = spec.q * spec.q / required;
        std::ostringstream note;
        note << to_string(spec.mode) << " requires g_m1*R_X1 = " << required
             << " but the design gives " << sel.constraint.actual_gm1_rx1
             << "; choose C1/C2 = " << cap_ratio << " to meet it at Q = " << spec.q;
        design.constraint_notes.push_back(note.str());
    }
    return design;
}

BiasDesign design_oscillator(const OscillatorSpec& spec) {
    require_positive(spec.f_hz, "f_hz");
    require_positive(spec.c1, "c1");
    require_positive(spec.c2, "c2");
    require_positive(spec.current_ratio, "current_ratio");
    require_positive(spec.v_t, "v_t");
    if (!(spec.startup_margin >= 0.0) || !std::isfinite(spec.startup_margin)) {
        throw std::domain_error("startup_margin must be non-negative");
    }

    const double root_product =
        2.0 * pi * spec.f_hz * spec.v_t * std::sqrt(spec.c1 * spec.c2);
    const double i_b1 = root_product / std::sqrt(spec.current_ratio);
    const double i_s1 = root_product * std::sqrt(spec.current_ratio);
    const double i_s2 = (4.0 * i_b1) * (1.0 + spec.startup_margin);
    if (!std::isfinite(i_b1) || !(i_b1 > 0.0) || !std::isfinite(i_s1) ||
        !(i_s1 > 0.0) || !std::isfinite(i_s2)) {
        throw design_error("oscillator spec is not realizable: bias currents out of range");
    }

    BiasDesign design;
    design.circuit = BiquadCircuit{{i_b1, i_s1, spec.v_t},
                                   {i_b1, i_s2, spec.v_t},
                                   spec.c1,
                                   spec.c2};
    validate(design.circuit);
    design.achieved_f0_hz = pole_frequency_hz(design.circuit);
    design.achieved_q = quality_factor_approx(design.circuit);
    return design;
}

std::vector<ReferencePoint> compare_reference_points(double v_t) {
    require_positive(v_t, "v_t");
    const double c = 5e-9;

    struct Entry {
        std::string name;
        std::optional<double> theoretical_hz;
        double simulated_hz;
        BiquadCircuit circuit;
    };
    const std::vector<Entry> entries = {
        {"filter f0, Q=1 design point", 196.71e3, 184.77e3,
         {{80e-6, 320e-6, v_t}, {80e-6, 2e-6, v_t}, c, c}},
        {"band-pass f0 at I_B1=I_S1=30u", std::nullopt, 36e3,
         {{30e-6, 30e-6, v_t}, {80e-6, 2e-6, v_t}, c, c}},
        {"band-pass f0 at I_B1=I_S1=60u", std::nullopt, 72e3,
         {{60e-6, 60e-6, v_t}, {80e-6, 2e-6, v_t}, c, c}},
        {"band-pass f0 at I_B1=I_S1=120u", std::nullopt, 142e3,
         {{120e-6, 120e-6, v_t}, {80e-6, 2e-6, v_t}, c, c}},
        {"band-pass f0 at I_B1=I_S1=240u", std::nullopt, 276e3,
         {{240e-6, 240e-6, v_t}, {80e-6, 2e-6, v_t}, c, c}},
        {"oscillator FO", 130e3, 128e3,
         {{56.5e-6, 200e-6, v_t}, {45e-6, 225e-6, v_t}, c, c}},
    };

    std::vector<ReferencePoint> rows;
    rows.reserve(entries.size());
    for (const auto& e : entries) {
        ReferencePoint row;
        row.name = e.name;
        row.theoretical_hz = e.theoretical_hz;
        row.simulated_hz = e.simulated_hz;
        row.computed_hz = pole_frequency_hz(e.circuit);
        if (e.theoretical_hz) {
            row.rel_err_theoretical =
                (row.computed_hz - *e.theoretical_hz) / *e.theoretical_hz;
        }
        row.rel_err_simulated = (row.computed_hz - e.simulated_hz) / e.simulated_hz;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ccccta
