#include "ccccta/element.hpp"

#include <cmath>
#include <string>

namespace ccccta {

namespace {

void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) {
        throw std::domain_error(std::string(field) + " must be finite");
    }
}

}  // namespace

void validate(const CccctaParams& p) {
    require_finite(p.i_b, "i_b");
    require_finite(p.i_s, "i_s");
    require_finite(p.v_t, "v_t");
    if (!(p.i_b > 0.0)) {
        throw std::domain_error("i_b must be positive, got " + std::to_string(p.i_b));
    }
    if (!(p.i_s >= 0.0)) {
        throw std::domain_error("i_s must be non-negative, got " + std::to_string(p.i_s));
    }
    if (!(p.v_t > 0.0)) {
        throw std::domain_error("v_t must be positive, got " + std::to_string(p.v_t));
    }
}

void validate(const PortState& s) {
    require_finite(s.v_y, "v_y");
    require_finite(s.i_x, "i_x");
    require_finite(s.v_z, "v_z");
}

double parasitic_resistance(const CccctaParams& p) {
    validate(p);
    return p.v_t / (2.0 * p.i_b);
}

double transconductance(const CccctaParams& p) {
    validate(p);
    return p.i_s / (2.0 * p.v_t);
}

double gm_rx_from_bias(double i_s, double i_b) {
    if (!(i_b > 0.0)) {
        throw std::domain_error("i_b must be positive, got " + std::to_string(i_b));
    }
    return i_s / (4.0 * i_b);
}

PortOutputs evaluate_ports(const CccctaParams& p, const PortState& s) {
    validate(s);
    const double r_x = parasitic_resistance(p);
    const double g_m = transconductance(p);
    PortOutputs out;
    out.v_x = s.v_y + s.i_x * r_x;
    out.i_z = s.i_x;
    out.i_o_plus = g_m * s.v_z;
    out.i_o_minus = -(g_m * s.v_z);
    return out;
}

}  // namespace ccccta
