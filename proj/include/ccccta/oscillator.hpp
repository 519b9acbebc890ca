#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccccta/biquad.hpp"

namespace ccccta {

// Integration state became non-finite; carries the simulated time of failure.
class divergence_error : public std::runtime_error {
public:
    divergence_error(const std::string& what, double time_s)
        : std::runtime_error(what), time_s_(time_s) {}
    double time_s() const { return time_s_; }

private:
    double time_s_;
};

class estimation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// (d2, d1, d0) of the autonomous characteristic equation; bit-identical to the
// transfer-function denominator.
std::array<double, 3> characteristic_coefficients(const BiquadCircuit& c);

// sqrt(g_m1 / (C1 C2 R_X1)) = sqrt(I_S1 I_B1) / (V_T sqrt(C1 C2)) [rad/s];
// identical to the filter pole frequency.
double oscillation_frequency(const BiquadCircuit& c);
double oscillation_frequency_hz(const BiquadCircuit& c);

struct OscillationCondition {
    double gm2_rx1;   // I_S2 / (4 I_B1)
    double margin;    // gm2_rx1 - 1
    bool will_start;  // margin >= 0
};

OscillationCondition oscillation_condition(const BiquadCircuit& c);

struct OscillatorConfig {
    BiquadCircuit circuit;
    double v_limit = 50e-3;  // soft limiter scale V_L [V]; +inf disables limiting
    double x1_init = 1e-3;   // startup perturbation on x1 [V]
    double dt = 0.0;         // integration step [s]; 0 selects T/500
    double duration = 0.0;   // run length [s]; 0 selects 100 cycles
};

// Config with dt = T/500 and duration = 100 T for the circuit's oscillation period T.
OscillatorConfig default_oscillator_config(const BiquadCircuit& c);

struct OscillatorRun {
    std::vector<double> t;     // sample times [s]
    std::vector<double> v_o1;  // x1
    std::vector<double> v_o2;  // x2
    std::vector<double> v_o3;  // -x2
    std::optional<double> est_freq_hz;              // empty if estimation failed
    std::optional<double> est_phase_o2_vs_o1_deg;   // in (-180, 180]
    double steady_amplitude;  // mean per-cycle |v_o1| peak over the final 20% [V]
    bool settled;             // amplitude drift < 1% over the final 20%
};

// Two-integrator-loop dynamics with the regenerative g_m2 path soft-limited:
//   x1' = (g_m2/C1) V_L tanh(x1/V_L) - x1/(C1 R_X1) - (g_m1/C1) x2
//   x2' = x1/(C2 R_X1)
// Linearized about the origin this has exactly the characteristic polynomial
// of characteristic_coefficients.
std::array<double, 2> state_derivatives(const BiquadCircuit& c, double v_limit,
                                        double x1, double x2);

// Classical fixed-step 4th-order integration from (x1_init, 0).
OscillatorRun simulate(const OscillatorConfig& cfg);

// Mean period of linearly interpolated upward zero crossings, first half of
// the samples discarded as startup transient. Needs >= 10 crossings.
double estimate_frequency(std::span<const double> series, double dt);

// Phase of b relative to a at freq_hz via single-bin Fourier projection over
// an integer number of periods; result in (-180, 180].
double estimate_phase(std::span<const double> series_a,
                      std::span<const double> series_b, double dt,
                      double freq_hz);

// Wraps an angle into (-180, 180].
double wrap_phase_deg(double deg);

}  // namespace ccccta
