#include "ccccta/circuit_file.hpp"

#include <array>
#include <fstream>
#include <map>
#include <sstream>

#include "ccccta/quantity.hpp"

namespace ccccta {

namespace {

constexpr std::array<const char*, 7> known_keys = {"ib1", "is1", "ib2", "is2",
                                                   "c1",  "c2",  "vt"};

bool is_known_key(const std::string& key) {
    for (const char* k : known_keys) {
        if (key == k) return true;
    }
    return false;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw std::invalid_argument("line " + std::to_string(line) + ": " + message);
}

}  // namespace

BiquadCircuit parse_circuit_file(std::istream& in,
                                 std::optional<double> fallback_v_t) {
    std::map<std::string, double> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(lineno, "expected key=value, got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value_text = trim(line.substr(eq + 1));
        if (!is_known_key(key)) {
            fail(lineno, "unknown key '" + key + "'");
        }
        if (values.count(key)) {
            fail(lineno, "duplicate key '" + key + "'");
        }
        const auto value = try_parse_quantity(value_text);
        if (!value) {
            fail(lineno, "invalid value '" + value_text + "' for key '" + key + "'");
        }
        values[key] = *value;
    }

    for (const char* key : {"ib1", "is1", "ib2", "is2", "c1", "c2"}) {
        if (!values.count(key)) {
            throw std::invalid_argument(std::string("missing key '") + key + "'");
        }
    }
    const double v_t = values.count("vt")
                           ? values.at("vt")
                           : fallback_v_t.value_or(default_thermal_voltage);

    BiquadCircuit c{{values.at("ib1"), values.at("is1"), v_t},
                    {values.at("ib2"), values.at("is2"), v_t},
                    values.at("c1"),
                    values.at("c2")};
    validate(c);
    return c;
}

BiquadCircuit load_circuit_file(const std::string& path,
                                std::optional<double> fallback_v_t) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open circuit file '" + path + "'");
    }
    try {
        return parse_circuit_file(in, fallback_v_t);
    } catch (const std::invalid_argument& err) {
        throw std::invalid_argument(path + ": " + err.what());
    }
}

void write_circuit_file(std::ostream& out, const BiquadCircuit& c) {
    out << "ib1 = " << render_quantity(c.ccccta1.i_b) << "\n"
        << "is1 = " << render_quantity(c.ccccta1.i_s) << "\n"
        << "ib2 = " << render_quantity(c.ccccta2.i_b) << "\n"
        << "is2 = " << render_quantity(c.ccccta2.i_s) << "\n"
        << "c1 = " << render_quantity(c.c1) << "\n"
        << "c2 = " << render_quantity(c.c2) << "\n"
        << "vt = " << render_quantity(c.ccccta1.v_t) << "\n";
}

void save_circuit_file(const std::string& path, const BiquadCircuit& c) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::invalid_argument("cannot write circuit file '" + path + "'");
    }
    write_circuit_file(out, c);
}

}  // namespace ccccta
