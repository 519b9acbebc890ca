#include "ccccta/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ccccta {

std::array<double, 3> characteristic_coefficients(const BiquadCircuit& c) {
    return denominator_coefficients(c);
}

double oscillation_frequency(const BiquadCircuit& c) {
    return pole_frequency(c);
}

double oscillation_frequency_hz(const BiquadCircuit& c) {
    return pole_frequency_hz(c);
}

OscillationCondition oscillation_condition(const BiquadCircuit& c) {
    validate(c);
    OscillationCondition cond;
    cond.gm2_rx1 = gm2_rx1(c);
    cond.margin = cond.gm2_rx1 - 1.0;
    cond.will_start = cond.margin >= 0.0;
    return cond;
}

OscillatorConfig default_oscillator_config(const BiquadCircuit& c) {
    const double period = 1.0 / oscillation_frequency_hz(c);
    OscillatorConfig cfg;
    cfg.circuit = c;
    cfg.dt = period / 500.0;
    cfg.duration = 100.0 * period;
    return cfg;
}

std::array<double, 2> state_derivatives(const BiquadCircuit& c, double v_limit,
                                        double x1, double x2) {
    const double rx1 = parasitic_resistance(c.ccccta1);
    const double gm1 = transconductance(c.ccccta1);
    const double gm2 = transconductance(c.ccccta2);
    const double fed_back =
        std::isinf(v_limit) ? x1 : v_limit * std::tanh(x1 / v_limit);
    const double dx1 =
        (gm2 / c.c1) * fed_back - x1 / (c.c1 * rx1) - (gm1 / c.c1) * x2;
    const double dx2 = x1 / (c.c2 * rx1);
    return {dx1, dx2};
}

namespace {

// Per-cycle |x| peaks over the final 20% of the samples; cycle length taken
// from the frequency estimate when available, the closed form otherwise.
struct AmplitudeSummary {
    double mean = 0.0;
    double drift = 0.0;  // (max - min) / mean of per-cycle peaks
    bool usable = false;
};

AmplitudeSummary summarize_amplitude(const std::vector<double>& series, double dt,
                                     double freq_hz) {
    AmplitudeSummary out;
    const size_t n = series.size();
    if (n < 10 || !(freq_hz > 0.0)) {
        return out;
    }
    const size_t window_start = n - n / 5;
    const size_t cycle_samples =
        std::max<size_t>(4, static_cast<size_t>(std::llround(1.0 / (freq_hz * dt))));

    std::vector<double> peaks;
    size_t end = n;
    while (end >= window_start + cycle_samples) {
        double peak = 0.0;
        for (size_t i = end - cycle_samples; i < end; ++i) {
            peak = std::max(peak, std::abs(series[i]));
        }
        peaks.push_back(peak);
        end -= cycle_samples;
    }
    if (peaks.size() < 2) {
        return out;
    }
    double lo = peaks[0], hi = peaks[0], sum = 0.0;
    for (double p : peaks) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
        sum += p;
    }
    out.mean = sum / static_cast<double>(peaks.size());
    if (out.mean > 0.0) {
        out.drift = (hi - lo) / out.mean;
        out.usable = true;
    }
    return out;
}

}  // namespace

OscillatorRun simulate(const OscillatorConfig& cfg) {
    validate(cfg.circuit);
    const double freq_theory_hz = oscillation_frequency_hz(cfg.circuit);
    const double period = 1.0 / freq_theory_hz;

    OscillatorConfig c = cfg;
    if (c.dt <= 0.0) c.dt = period / 500.0;
    if (c.duration <= 0.0) c.duration = 100.0 * period;

    if (!(c.v_limit > 0.0)) {
        throw std::domain_error("v_limit must be positive");
    }
    if (!std::isfinite(c.x1_init)) {
        throw std::domain_error("x1_init must be finite");
    }
    if (!std::isfinite(c.dt) || !(c.dt > 0.0)) {
        throw std::domain_error("dt must be positive");
    }
    if (c.dt > period / 200.0) {
        throw std::domain_error("dt too large: " + std::to_string(c.dt) +
                                " s exceeds T/200 = " + std::to_string(period / 200.0) + " s");
    }
    if (!std::isfinite(c.duration) || c.duration < 100.0 * c.dt) {
        throw std::domain_error("duration must cover at least 100 steps");
    }

    const size_t steps =
        static_cast<size_t>(std::max<long long>(100, std::llround(c.duration / c.dt)));

    OscillatorRun run;
    run.t.reserve(steps + 1);
    run.v_o1.reserve(steps + 1);
    run.v_o2.reserve(steps + 1);
    run.v_o3.reserve(steps + 1);

    double x1 = c.x1_init;
    double x2 = 0.0;
    const double dt = c.dt;
    const auto record = [&](size_t i) {
        run.t.push_back(static_cast<double>(i) * dt);
        run.v_o1.push_back(x1);
        run.v_o2.push_back(x2);
        run.v_o3.push_back(-x2);
    };
    record(0);

    for (size_t i = 1; i <= steps; ++i) {
        const auto k1 = state_derivatives(c.circuit, c.v_limit, x1, x2);
        const auto k2 = state_derivatives(c.circuit, c.v_limit,
                                          x1 + 0.5 * dt * k1[0], x2 + 0.5 * dt * k1[1]);
        const auto k3 = state_derivatives(c.circuit, c.v_limit,
                                          x1 + 0.5 * dt * k2[0], x2 + 0.5 * dt * k2[1]);
        const auto k4 = state_derivatives(c.circuit, c.v_limit,
                                          x1 + dt * k3[0], x2 + dt * k3[1]);
        x1 += (dt / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        x2 += (dt / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        if (!std::isfinite(x1) || !std::isfinite(x2)) {
            const double t_fail = static_cast<double>(i) * dt;
            throw divergence_error(
                "state became non-finite at t = " + std::to_string(t_fail) + " s", t_fail);
        }
        record(i);
    }

    try {
        run.est_freq_hz = estimate_frequency(run.v_o1, dt);
    } catch (const estimation_error&) {
        run.est_freq_hz = std::nullopt;
    }
    if (run.est_freq_hz) {
        const size_t half = run.v_o1.size() / 2;
        try {
            run.est_phase_o2_vs_o1_deg = estimate_phase(
                std::span<const double>(run.v_o1).subspan(half),
                std::span<const double>(run.v_o2).subspan(half), dt, *run.est_freq_hz);
        } catch (const estimation_error&) {
            run.est_phase_o2_vs_o1_deg = std::nullopt;
        }
    }

    const auto amp =
        summarize_amplitude(run.v_o1, dt, run.est_freq_hz.value_or(freq_theory_hz));
    run.steady_amplitude = amp.mean;
    run.settled = amp.usable && amp.drift < 0.01;
    return run;
}

double estimate_frequency(std::span<const double> series, double dt) {
    if (!(dt > 0.0)) {
        throw std::domain_error("dt must be positive");
    }
    const size_t start = series.size() / 2;  // discard startup transient
    double first = 0.0, last = 0.0;
    size_t count = 0;
    for (size_t i = start; i + 1 < series.size(); ++i) {
        const double a = series[i];
        const double b = series[i + 1];
        if (a < 0.0 && b >= 0.0) {
            const double t_cross = (static_cast<double>(i) + a / (a - b)) * dt;
            if (count == 0) first = t_cross;
            last = t_cross;
            ++count;
        }
    }
    if (count < 10) {
        throw estimation_error("need at least 10 upward zero crossings, found " +
                               std::to_string(count));
    }
    const double mean_period = (last - first) / static_cast<double>(count - 1);
    return 1.0 / mean_period;
}

double estimate_phase(std::span<const double> series_a,
                      std::span<const double> series_b, double dt,
                      double freq_hz) {
    if (series_a.size() != series_b.size()) {
        throw std::domain_error("series lengths differ");
    }
    if (!(dt > 0.0) || !(freq_hz > 0.0)) {
        throw std::domain_error("dt and freq_hz must be positive");
    }
    const double window_s = static_cast<double>(series_a.size()) * dt;
    const double periods = std::floor(window_s * freq_hz);
    if (periods < 1.0) {
        throw estimation_error("window shorter than one period at " +
                               std::to_string(freq_hz) + " Hz");
    }
    size_t n = static_cast<size_t>(std::llround(periods / (freq_hz * dt)));
    n = std::min(n, series_a.size());

    const size_t offset = series_a.size() - n;
    std::complex<double> bin_a(0.0, 0.0);
    std::complex<double> bin_b(0.0, 0.0);
    const double w = 2.0 * pi * freq_hz * dt;
    for (size_t k = 0; k < n; ++k) {
        const double angle = -w * static_cast<double>(k);
        const std::complex<double> e(std::cos(angle), std::sin(angle));
        bin_a += series_a[offset + k] * e;
        bin_b += series_b[offset + k] * e;
    }
    if (std::abs(bin_a) == 0.0 || std::abs(bin_b) == 0.0) {
        throw estimation_error("no component at the projection frequency");
    }
    return wrap_phase_deg((std::arg(bin_b) - std::arg(bin_a)) * (180.0 / pi));
}

double wrap_phase_deg(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w <= -180.0) {
        w += 360.0;
    } else if (w > 180.0) {
        w -= 360.0;
    }
    return w;
}

}  // namespace ccccta
