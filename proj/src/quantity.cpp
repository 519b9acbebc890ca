#include "ccccta/quantity.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace ccccta {

std::optional<double> suffix_multiplier(char suffix) {
    switch (suffix) {
        case 'p': return 1e-12;
        case 'n': return 1e-9;
        case 'u': return 1e-6;
        case 'm': return 1e-3;
        case 'k': return 1e3;
        case 'M': return 1e6;
        default: return std::nullopt;
    }
}

std::optional<double> try_parse_quantity(std::string_view text) {
    if (text.empty()) {
        return std::nullopt;
    }
    double multiplier = 1.0;
    if (const auto m = suffix_multiplier(text.back())) {
        multiplier = *m;
        text.remove_suffix(1);
        if (text.empty()) {
            return std::nullopt;  // bare suffix
        }
    }
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            return std::nullopt;  // strtod would silently skip leading blanks
        }
    }
    const std::string body(text);
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(body.c_str(), &end);
    if (end != body.c_str() + body.size() || errno == ERANGE || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value * multiplier;
}

double parse_quantity(std::string_view text) {
    if (const auto v = try_parse_quantity(text)) {
        return *v;
    }
    throw std::invalid_argument("invalid quantity '" + std::string(text) +
                                "' (expected decimal with optional SI suffix p/n/u/m/k/M)");
}

namespace {

// Shortest rendering at the given scale that re-parses to exactly `value`.
std::optional<std::string> render_at_scale(double value, double multiplier,
                                           char suffix) {
    char buf[48];
    for (int precision = 1; precision <= 17; ++precision) {
        if (suffix != 0) {
            std::snprintf(buf, sizeof(buf), "%.*g%c", precision, value / multiplier, suffix);
        } else {
            std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        }
        const auto back = try_parse_quantity(buf);
        if (back && *back == value) {
            return std::string(buf);
        }
    }
    return std::nullopt;
}

}  // namespace

std::string render_quantity(double value) {
    if (std::isfinite(value) && value != 0.0) {
        static constexpr struct {
            double multiplier;
            char suffix;
        } scales[] = {{1e6, 'M'}, {1e3, 'k'}, {1.0, 0},
                      {1e-3, 'm'}, {1e-6, 'u'}, {1e-9, 'n'}, {1e-12, 'p'}};
        const double magnitude = std::abs(value);
        for (const auto& scale : scales) {
            if (magnitude >= scale.multiplier && magnitude < scale.multiplier * 1e3) {
                if (auto text = render_at_scale(value, scale.multiplier, scale.suffix)) {
                    return *text;
                }
            }
        }
    }
    // plain decimal always round-trips at 17 significant digits
    if (auto text = render_at_scale(value, 1.0, 0)) {
        return *text;
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

}  // namespace ccccta
