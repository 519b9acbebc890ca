#pragma once

#include <stdexcept>

namespace ccccta {

// Thermal voltage kT/q near 300 K.
inline constexpr double default_thermal_voltage = 25.85e-3;

// Small-signal behavioral parameters of one CCCCTA. The bias current I_B sets
// the parasitic resistance at the X terminal, I_S sets the transconductance
// from the Z voltage to the O-terminal currents.
struct CccctaParams {
    double i_b;                            // bias current I_B [A]
    double i_s;                            // bias current I_S [A]
    double v_t = default_thermal_voltage;  // thermal voltage V_T [V]
};

// Drive applied to the Y, X and Z terminals.
struct PortState {
    double v_y;  // [V]
    double i_x;  // [A]
    double v_z;  // [V]
};

// Resulting terminal quantities for a given drive.
struct PortOutputs {
    double v_x;        // [V]
    double i_z;        // [A]
    double i_o_plus;   // [A]
    double i_o_minus;  // [A]
};

// Throws std::domain_error naming the offending field.
void validate(const CccctaParams& p);
void validate(const PortState& s);

// R_X = V_T / (2 I_B) [ohm]
double parasitic_resistance(const CccctaParams& p);

// g_m = I_S / (2 V_T) [S]
double transconductance(const CccctaParams& p);

// g_m * R_X for a common thermal voltage, reduced to I_S / (4 I_B).
// V_T cancels algebraically, so this form avoids the rounding of the
// two-factor product and is exact at constraint boundaries such as I_S = 4 I_B.
double gm_rx_from_bias(double i_s, double i_b);

// v_x = v_y + i_x R_X, i_z = i_x, i_o+- = +-g_m v_z
PortOutputs evaluate_ports(const CccctaParams& p, const PortState& s);

}  // namespace ccccta
