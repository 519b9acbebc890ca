#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ccccta {

// Decimal number with an optional trailing SI suffix: p n u m k M.
// Suffixes are case-sensitive: m = 1e-3, M = 1e6.
std::optional<double> suffix_multiplier(char suffix);

std::optional<double> try_parse_quantity(std::string_view text);

// Throws std::invalid_argument on malformed text.
double parse_quantity(std::string_view text);

// Engineering rendering with a suffix where possible, plain decimal otherwise;
// always satisfies parse_quantity(render_quantity(x)) == x bit-exactly.
std::string render_quantity(double value);

}  // namespace ccccta
