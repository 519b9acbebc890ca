#pragma once

#include <iosfwd>
#include <span>

#include "ccccta/biquad.hpp"
#include "ccccta/oscillator.hpp"

namespace ccccta {

// Header freq_hz,mag_db,phase_deg; full-precision values, LF line endings,
// byte-stable for identical inputs.
void write_response_csv(std::ostream& out, std::span<const ResponsePoint> points);

// Header t_s,v_o1,v_o2,v_o3.
void write_run_csv(std::ostream& out, const OscillatorRun& run);

}  // namespace ccccta
