#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "ccccta/element.hpp"

namespace ccccta {

inline constexpr double pi = 3.14159265358979323846;

// Two CCCCTAs and two grounded capacitors; the complete circuit description.
struct BiquadCircuit {
    CccctaParams ccccta1;
    CccctaParams ccccta2;
    double c1;  // [F]
    double c2;  // [F]
};

void validate(const BiquadCircuit& c);

// Loop gains g_m1 R_X1 and g_m2 R_X1 in bias-current form (see gm_rx_from_bias).
double gm1_rx1(const BiquadCircuit& c);
double gm2_rx1(const BiquadCircuit& c);

// Positive damping: g_m2 R_X1 < 1. At or above 1 the circuit is an oscillator.
bool is_filter_stable(const BiquadCircuit& c);

// Input-voltage selector triple (V1, V2, V3) defining a filter mode.
struct DriveWeights {
    double v1;
    double v2;
    double v3;
};

// Second-order rational function of the complex frequency variable,
// coefficients stored highest power first, no hidden normalization.
struct RationalBiquad {
    double n2, n1, n0;
    double d2, d1, d0;

    std::complex<double> evaluate(std::complex<double> s) const;
};

enum class FilterMode { low_pass, band_pass, high_pass, band_reject, all_pass };

const char* to_string(FilterMode m);
std::optional<FilterMode> parse_filter_mode(std::string_view text);

// Required vs actual g_m1 R_X1 for a mode. Unmet constraints are reported,
// never fatal: the response stays computable, just not the ideal mode shape.
struct ModeConstraint {
    std::optional<double> required_gm1_rx1;  // empty for unconstrained modes
    double actual_gm1_rx1;
    bool satisfied;  // within 1e-6 relative, or no requirement
};

struct ModeSelection {
    DriveWeights weights;
    ModeConstraint constraint;
};

DriveWeights mode_weights(FilterMode m);
ModeSelection build_mode(const BiquadCircuit& c, FilterMode m);

// Denominator (d2, d1, d0) = (C1 C2 R_X1, (1 - g_m2 R_X1) C2, g_m1).
// Shared by the filter transfer function and the oscillator characteristic
// equation; both see bit-identical coefficients.
std::array<double, 3> denominator_coefficients(const BiquadCircuit& c);

RationalBiquad transfer_function(const BiquadCircuit& c, const DriveWeights& w);

double pole_frequency(const BiquadCircuit& c);   // [rad/s]
double pole_frequency_hz(const BiquadCircuit& c);

// Same quantity via sqrt(I_S1 I_B1) / (V_T sqrt(C1 C2)) [rad/s]; agrees with
// pole_frequency to rounding and is the form the designer inverts.
double pole_frequency_from_bias(const BiquadCircuit& c);

// Exact quality factor (1/(1 - g_m2 R_X1)) sqrt(C1 R_X1 g_m1 / C2).
// Returns +inf at the oscillation boundary g_m2 R_X1 = 1.
double quality_factor(const BiquadCircuit& c);

// Approximate form (1/2) sqrt(I_S1 C1 / (I_B1 C2)), valid for I_S2 << I_B1.
double quality_factor_approx(const BiquadCircuit& c);

// |exact - approx| / exact
double quality_factor_gap(const BiquadCircuit& c);

// pole_frequency / exact quality factor [rad/s]
double bandwidth(const BiquadCircuit& c);

inline constexpr double magnitude_db_floor = -300.0;

struct ResponsePoint {
    double freq_hz;
    double magnitude_db;
    double phase_deg;  // principal value in (-180, 180]; sweeps may unwrap
    bool clamped;      // magnitude hit the +-300 dB floor (transmission zero/pole)
};

ResponsePoint evaluate_response(const RationalBiquad& h, double freq_hz);

// Logarithmically spaced points, both endpoints included.
std::vector<ResponsePoint> sweep(const RationalBiquad& h, double f_start_hz,
                                 double f_stop_hz, int points_per_decade,
                                 bool unwrap = false);

// Removes +-360 degree jumps so phase curves read continuously.
void unwrap_phase(std::vector<ResponsePoint>& points);

enum class CircuitParameter { ib1, is1, ib2, is2, c1, c2 };
enum class SensitivityTarget { pole_frequency, quality_factor_approx };

const char* to_string(CircuitParameter p);
const char* to_string(SensitivityTarget t);

struct SensitivityEntry {
    CircuitParameter parameter;
    SensitivityTarget target;
    double value;
};

// The closed-form normalized sensitivities: +-1/2 or 0 per parameter/target.
std::vector<SensitivityEntry> analytic_sensitivities();

// Central finite difference of ln(target) with respect to ln(parameter).
// rel_step must lie in [1e-8, 1e-2].
double numeric_sensitivity(const BiquadCircuit& c, CircuitParameter parameter,
                           SensitivityTarget target, double rel_step);

}  // namespace ccccta
