#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccccta/biquad.hpp"

namespace ccccta {

class design_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FilterSpec {
    double f0_hz;
    double q;
    double c1;
    double c2;
    FilterMode mode = FilterMode::band_pass;
    double v_t = default_thermal_voltage;
    double gm2_rx1_budget = 0.01;   // designed I_S2 / (4 I_B1); must be in (0, 0.1)
    bool refine_exact_q = false;    // one-step ratio correction for the exact-Q form
};

struct OscillatorSpec {
    double f_hz;
    double c1;
    double c2;
    double current_ratio = 4.0;    // I_S1 / I_B1
    double startup_margin = 0.05;  // g_m2 R_X1 - 1 to design for
    double v_t = default_thermal_voltage;
};

struct BiasDesign {
    BiquadCircuit circuit;   // designed bias currents with the spec's capacitors and V_T
    double achieved_f0_hz;   // recomputed from the circuit, never copied from the spec
    double achieved_q;       // recomputed approximate-form quality factor
    std::vector<std::string> constraint_notes;
};

// Inverts the approximate design equations: I_S1/I_B1 = 4 Q^2 C2/C1 and
// sqrt(I_S1 I_B1) = omega V_T sqrt(C1 C2). Mode constraints on g_m1 R_X1 are
// checked; a conflicting Q yields a note proposing the reconciling C1/C2.
BiasDesign design_filter(const FilterSpec& spec);

// sqrt(I_S1 I_B1) = 2 pi f V_T sqrt(C1 C2) at the requested current ratio;
// I_S2 = 4 I_B1 (1 + startup_margin); I_B2 defaults to I_B1.
BiasDesign design_oscillator(const OscillatorSpec& spec);

// One stock design point compared against its bundled reference values
// (closed-form and transistor-level simulation figures for the same bias).
struct ReferencePoint {
    std::string name;
    std::optional<double> theoretical_hz;  // published closed-form value, if any
    double simulated_hz;                   // transistor-level simulation value
    double computed_hz;                    // this library
    std::optional<double> rel_err_theoretical;
    double rel_err_simulated;
};

std::vector<ReferencePoint> compare_reference_points(double v_t = default_thermal_voltage);

}  // namespace ccccta
