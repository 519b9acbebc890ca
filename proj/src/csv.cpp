#include "ccccta/csv.hpp"

#include <cstdio>
#include <ostream>

namespace ccccta {

namespace {

void put(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

}  // namespace

void write_response_csv(std::ostream& out, std::span<const ResponsePoint> points) {
    out << "freq_hz,mag_db,phase_deg\n";
    for (const auto& p : points) {
        put(out, p.freq_hz);
        out << ',';
        put(out, p.magnitude_db);
        out << ',';
        put(out, p.phase_deg);
        out << '\n';
    }
}

void write_run_csv(std::ostream& out, const OscillatorRun& run) {
    out << "t_s,v_o1,v_o2,v_o3\n";
    for (size_t i = 0; i < run.t.size(); ++i) {
        put(out, run.t[i]);
        out << ',';
        put(out, run.v_o1[i]);
        out << ',';
        put(out, run.v_o2[i]);
        out << ',';
        put(out, run.v_o3[i]);
        out << '\n';
    }
}

}  // namespace ccccta
