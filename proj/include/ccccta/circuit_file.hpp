#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "ccccta/biquad.hpp"

namespace ccccta {

// Flat key=value circuit description. Keys: ib1, is1, ib2, is2, c1, c2 and
// optional vt. '#' starts a comment, values use SI-suffixed quantities.
// Unknown or duplicate keys are rejected with a line-numbered message.
// fallback_v_t applies when the file has no vt key (default 25.85m).
BiquadCircuit parse_circuit_file(std::istream& in,
                                 std::optional<double> fallback_v_t = std::nullopt);
BiquadCircuit load_circuit_file(const std::string& path,
                                std::optional<double> fallback_v_t = std::nullopt);

void write_circuit_file(std::ostream& out, const BiquadCircuit& c);
void save_circuit_file(const std::string& path, const BiquadCircuit& c);

}  // namespace ccccta
