#include "ccccta/biquad.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ccccta {

namespace {

constexpr double mode_constraint_tolerance = 1e-6;  // relative

void require_finite_weight(double v, const char* field) {
    if (!std::isfinite(v)) {
        throw std::domain_error(std::string(field) + " must be finite");
    }
}

}  // namespace

void validate(const BiquadCircuit& c) {
    validate(c.ccccta1);
    validate(c.ccccta2);
    if (!(std::isfinite(c.c1) && c.c1 > 0.0)) {
        throw std::domain_error("c1 must be positive, got " + std::to_string(c.c1));
    }
    if (!(std::isfinite(c.c2) && c.c2 > 0.0)) {
        throw std::domain_error("c2 must be positive, got " + std::to_string(c.c2));
    }
}

double gm1_rx1(const BiquadCircuit& c) {
    return gm_rx_from_bias(c.ccccta1.i_s, c.ccccta1.i_b);
}

double gm2_rx1(const BiquadCircuit& c) {
    // g_m2 R_X1 = (I_S2/(4 I_B1)) * (V_T1/V_T2); the trailing factor is
    // exactly 1.0 for a common thermal voltage.
    return gm_rx_from_bias(c.ccccta2.i_s, c.ccccta1.i_b) *
           (c.ccccta1.v_t / c.ccccta2.v_t);
}

bool is_filter_stable(const BiquadCircuit& c) {
    return gm2_rx1(c) < 1.0;
}

std::complex<double> RationalBiquad::evaluate(std::complex<double> s) const {
    const std::complex<double> num = (n2 * s + n1) * s + n0;
    const std::complex<double> den = (d2 * s + d1) * s + d0;
    return num / den;
}

const char* to_string(FilterMode m) {
    switch (m) {
        case FilterMode::low_pass: return "low_pass";
        case FilterMode::band_pass: return "band_pass";
        case FilterMode::high_pass: return "high_pass";
        case FilterMode::band_reject: return "band_reject";
        case FilterMode::all_pass: return "all_pass";
    }
    return "unknown";
}

std::optional<FilterMode> parse_filter_mode(std::string_view text) {
    if (text == "lp" || text == "low_pass" || text == "lowpass") return FilterMode::low_pass;
    if (text == "bp" || text == "band_pass" || text == "bandpass") return FilterMode::band_pass;
    if (text == "hp" || text == "high_pass" || text == "highpass") return FilterMode::high_pass;
    if (text == "br" || text == "band_reject" || text == "bandreject" || text == "notch")
        return FilterMode::band_reject;
    if (text == "ap" || text == "all_pass" || text == "allpass") return FilterMode::all_pass;
    return std::nullopt;
}

DriveWeights mode_weights(FilterMode m) {
    switch (m) {
        case FilterMode::high_pass: return {1.0, 0.0, 0.0};
        case FilterMode::band_pass: return {0.0, 0.0, 1.0};
        case FilterMode::low_pass: return {0.0, 1.0, -1.0};
        case FilterMode::band_reject: return {1.0, 1.0, -1.0};
        case FilterMode::all_pass: return {1.0, 1.0, -1.0};
    }
    throw std::domain_error("unknown filter mode");
}

ModeSelection build_mode(const BiquadCircuit& c, FilterMode m) {
    validate(c);
    ModeSelection sel;
    sel.weights = mode_weights(m);
    sel.constraint.actual_gm1_rx1 = gm1_rx1(c);
    switch (m) {
        case FilterMode::low_pass:
        case FilterMode::band_reject:
            sel.constraint.required_gm1_rx1 = 1.0;
            break;
        case FilterMode::all_pass:
            sel.constraint.required_gm1_rx1 = 2.0;
            break;
        default:
            sel.constraint.required_gm1_rx1 = std::nullopt;
            break;
    }
    if (sel.constraint.required_gm1_rx1) {
        const double req = *sel.constraint.required_gm1_rx1;
        sel.constraint.satisfied =
            std::abs(sel.constraint.actual_gm1_rx1 - req) <= mode_constraint_tolerance * req;
    } else {
        sel.constraint.satisfied = true;
    }
    return sel;
}

std::array<double, 3> denominator_coefficients(const BiquadCircuit& c) {
    validate(c);
    const double rx1 = parasitic_resistance(c.ccccta1);
    const double gm1 = transconductance(c.ccccta1);
    const double d2 = c.c1 * c.c2 * rx1;
    const double d1 = (1.0 - gm2_rx1(c)) * c.c2;
    const double d0 = gm1;
    return {d2, d1, d0};
}

RationalBiquad transfer_function(const BiquadCircuit& c, const DriveWeights& w) {
    require_finite_weight(w.v1, "v1");
    require_finite_weight(w.v2, "v2");
    require_finite_weight(w.v3, "v3");
    const auto den = denominator_coefficients(c);
    const double rx1 = parasitic_resistance(c.ccccta1);
    const double gm1 = transconductance(c.ccccta1);
    RationalBiquad h;
    h.n2 = w.v1 * (c.c1 * c.c2 * rx1);
    h.n1 = (w.v3 * gm1_rx1(c)) * c.c2 + w.v2 * c.c2;
    h.n0 = w.v2 * gm1;
    h.d2 = den[0];
    h.d1 = den[1];
    h.d0 = den[2];
    return h;
}

double pole_frequency(const BiquadCircuit& c) {
    const auto den = denominator_coefficients(c);
    return std::sqrt(den[2] / den[0]);
}

double pole_frequency_hz(const BiquadCircuit& c) {
    return pole_frequency(c) / (2.0 * pi);
}

double pole_frequency_from_bias(const BiquadCircuit& c) {
    validate(c);
    return std::sqrt(c.ccccta1.i_s * c.ccccta1.i_b) /
           (c.ccccta1.v_t * std::sqrt(c.c1 * c.c2));
}

double quality_factor(const BiquadCircuit& c) {
    validate(c);
    const double rx1 = parasitic_resistance(c.ccccta1);
    const double gm1 = transconductance(c.ccccta1);
    return (1.0 / (1.0 - gm2_rx1(c))) * std::sqrt(c.c1 * rx1 * gm1 / c.c2);
}

double quality_factor_approx(const BiquadCircuit& c) {
    validate(c);
    return 0.5 * std::sqrt(c.ccccta1.i_s * c.c1 / (c.ccccta1.i_b * c.c2));
}

double quality_factor_gap(const BiquadCircuit& c) {
    const double exact = quality_factor(c);
    if (!std::isfinite(exact)) {
        return std::numeric_limits<double>::infinity();
    }
    return std::abs(exact - quality_factor_approx(c)) / std::abs(exact);
}

double bandwidth(const BiquadCircuit& c) {
    return pole_frequency(c) / quality_factor(c);
}

ResponsePoint evaluate_response(const RationalBiquad& h, double freq_hz) {
    if (!(freq_hz > 0.0) || !std::isfinite(freq_hz)) {
        throw std::domain_error("freq_hz must be positive, got " + std::to_string(freq_hz));
    }
    const std::complex<double> s(0.0, 2.0 * pi * freq_hz);
    const std::complex<double> response = h.evaluate(s);
    const double mag = std::abs(response);

    ResponsePoint p;
    p.freq_hz = freq_hz;
    p.clamped = false;
    if (!std::isfinite(mag)) {
        // evaluated exactly on a pole; mirror the floor at the top
        p.magnitude_db = -magnitude_db_floor;
        p.phase_deg = 0.0;
        p.clamped = true;
        return p;
    }
    const double mag_db = 20.0 * std::log10(mag);  // -inf at an exact zero
    if (!(mag_db > magnitude_db_floor)) {
        p.magnitude_db = magnitude_db_floor;
        p.clamped = true;
    } else {
        p.magnitude_db = mag_db;
    }
    p.phase_deg = std::arg(response) * (180.0 / pi);
    return p;
}

std::vector<ResponsePoint> sweep(const RationalBiquad& h, double f_start_hz,
                                 double f_stop_hz, int points_per_decade,
                                 bool unwrap) {
    if (!(f_start_hz > 0.0) || !(f_stop_hz > f_start_hz)) {
        throw std::domain_error("invalid sweep range: need 0 < f_start < f_stop");
    }
    if (points_per_decade < 1) {
        throw std::domain_error("points_per_decade must be >= 1");
    }
    const double decades = std::log10(f_stop_hz / f_start_hz);
    const long intervals = std::max<long>(
        1, std::lround(std::ceil(static_cast<double>(points_per_decade) * decades - 1e-9)));

    std::vector<ResponsePoint> points;
    points.reserve(static_cast<size_t>(intervals) + 1);
    for (long i = 0; i <= intervals; ++i) {
        double f = f_start_hz;
        if (i == intervals) {
            f = f_stop_hz;
        } else if (i > 0) {
            f = f_start_hz *
                std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(intervals));
        }
        points.push_back(evaluate_response(h, f));
    }
    if (unwrap) {
        unwrap_phase(points);
    }
    return points;
}

void unwrap_phase(std::vector<ResponsePoint>& points) {
    for (size_t i = 1; i < points.size(); ++i) {
        double ph = points[i].phase_deg;
        const double prev = points[i - 1].phase_deg;
        while (ph - prev > 180.0) ph -= 360.0;
        while (ph - prev < -180.0) ph += 360.0;
        points[i].phase_deg = ph;
    }
}

const char* to_string(CircuitParameter p) {
    switch (p) {
        case CircuitParameter::ib1: return "ib1";
        case CircuitParameter::is1: return "is1";
        case CircuitParameter::ib2: return "ib2";
        case CircuitParameter::is2: return "is2";
        case CircuitParameter::c1: return "c1";
        case CircuitParameter::c2: return "c2";
    }
    return "unknown";
}

const char* to_string(SensitivityTarget t) {
    return t == SensitivityTarget::pole_frequency ? "pole_frequency"
                                                  : "quality_factor_approx";
}

std::vector<SensitivityEntry> analytic_sensitivities() {
    using P = CircuitParameter;
    using T = SensitivityTarget;
    return {
        {P::c1, T::pole_frequency, -0.5},
        {P::c2, T::pole_frequency, -0.5},
        {P::is1, T::pole_frequency, 0.5},
        {P::ib1, T::pole_frequency, 0.5},
        {P::is2, T::pole_frequency, 0.0},
        {P::ib2, T::pole_frequency, 0.0},
        {P::ib1, T::quality_factor_approx, -0.5},
        {P::c2, T::quality_factor_approx, -0.5},
        {P::is1, T::quality_factor_approx, 0.5},
        {P::c1, T::quality_factor_approx, 0.5},
        {P::is2, T::quality_factor_approx, 0.0},
        {P::ib2, T::quality_factor_approx, 0.0},
    };
}

double numeric_sensitivity(const BiquadCircuit& c, CircuitParameter parameter,
                           SensitivityTarget target, double rel_step) {
    validate(c);
    if (!(rel_step >= 1e-8 && rel_step <= 1e-2)) {
        throw std::domain_error("rel_step must lie in [1e-8, 1e-2], got " +
                                std::to_string(rel_step));
    }
    const auto scaled = [&](double scale) {
        BiquadCircuit p = c;
        switch (parameter) {
            case CircuitParameter::ib1: p.ccccta1.i_b *= scale; break;
            case CircuitParameter::is1: p.ccccta1.i_s *= scale; break;
            case CircuitParameter::ib2: p.ccccta2.i_b *= scale; break;
            case CircuitParameter::is2: p.ccccta2.i_s *= scale; break;
            case CircuitParameter::c1: p.c1 *= scale; break;
            case CircuitParameter::c2: p.c2 *= scale; break;
        }
        return p;
    };
    const auto eval = [&](const BiquadCircuit& pc) {
        validate(pc);
        const double y = target == SensitivityTarget::pole_frequency
                             ? pole_frequency(pc)
                             : quality_factor_approx(pc);
        if (!(y > 0.0) || !std::isfinite(y)) {
            throw std::domain_error("sensitivity target not positive at perturbed point");
        }
        return y;
    };
    const double y_plus = eval(scaled(1.0 + rel_step));
    const double y_minus = eval(scaled(1.0 - rel_step));
    if (y_plus == y_minus) {
        return 0.0;
    }
    return std::log(y_plus / y_minus) / std::log((1.0 + rel_step) / (1.0 - rel_step));
}

}  // namespace ccccta
