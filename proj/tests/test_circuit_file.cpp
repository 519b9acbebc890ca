#include <doctest.h>

#include <sstream>

#include "ccccta/circuit_file.hpp"

using namespace ccccta;

namespace {

const char* reference_text =
    "# stock Q=1 filter bias\n"
    "ib1 = 80u\n"
    "is1 = 320u\n"
    "ib2 = 80u   # unused by the ideal equations\n"
    "is2 = 2u\n"
    "c1 = 5n\n"
    "c2 = 5n\n"
    "vt = 25.85m\n";

}  // namespace

TEST_CASE("parsing a complete circuit file") {
    std::istringstream in(reference_text);
    const BiquadCircuit c = parse_circuit_file(in);
    CHECK(c.ccccta1.i_b == doctest::Approx(80e-6).epsilon(1e-12));
    CHECK(c.ccccta1.i_s == doctest::Approx(320e-6).epsilon(1e-12));
    CHECK(c.ccccta2.i_s == doctest::Approx(2e-6).epsilon(1e-12));
    CHECK(c.c1 == doctest::Approx(5e-9).epsilon(1e-12));
    CHECK(c.ccccta1.v_t == doctest::Approx(25.85e-3).epsilon(1e-12));
    CHECK(c.ccccta2.v_t == c.ccccta1.v_t);
}

TEST_CASE("vt defaults and fallbacks") {
    const char* no_vt = "ib1=80u\nis1=320u\nib2=80u\nis2=2u\nc1=5n\nc2=5n\n";
    SUBCASE("library default") {
        std::istringstream in(no_vt);
        CHECK(parse_circuit_file(in).ccccta1.v_t == default_thermal_voltage);
    }
    SUBCASE("caller-provided fallback") {
        std::istringstream in(no_vt);
        CHECK(parse_circuit_file(in, 30e-3).ccccta1.v_t == 30e-3);
    }
    SUBCASE("explicit key wins over the fallback") {
        std::istringstream in(reference_text);
        CHECK(parse_circuit_file(in, 30e-3).ccccta1.v_t ==
              doctest::Approx(25.85e-3).epsilon(1e-12));
    }
}

TEST_CASE("parse failures carry line numbers and key names") {
    SUBCASE("missing key") {
        std::istringstream in("ib1=80u\nis1=320u\nib2=80u\nis2=2u\nc1=5n\n");
        CHECK_THROWS_WITH_AS(parse_circuit_file(in), doctest::Contains("c2"),
                             std::invalid_argument);
    }
    SUBCASE("unknown key") {
        std::istringstream in("ib1=80u\nr1=50\n");
        CHECK_THROWS_WITH_AS(parse_circuit_file(in), doctest::Contains("line 2"),
                             std::invalid_argument);
    }
    SUBCASE("duplicate key") {
        std::istringstream in("ib1=80u\nib1=90u\n");
        CHECK_THROWS_WITH_AS(parse_circuit_file(in), doctest::Contains("duplicate"),
                             std::invalid_argument);
    }
    SUBCASE("bad value") {
        std::istringstream in("ib1=80q\n");
        CHECK_THROWS_WITH_AS(parse_circuit_file(in), doctest::Contains("line 1"),
                             std::invalid_argument);
    }
    SUBCASE("missing equals sign") {
        std::istringstream in("ib1 80u\n");
        CHECK_THROWS_AS(parse_circuit_file(in), std::invalid_argument);
    }
    SUBCASE("invalid circuit values") {
        std::istringstream in("ib1=0\nis1=320u\nib2=80u\nis2=2u\nc1=5n\nc2=5n\n");
        CHECK_THROWS_AS(parse_circuit_file(in), std::domain_error);
    }
}

TEST_CASE("write/read round trip preserves the circuit bit-exactly") {
    std::istringstream in(reference_text);
    const BiquadCircuit original = parse_circuit_file(in);

    std::ostringstream out;
    write_circuit_file(out, original);
    std::istringstream back(out.str());
    const BiquadCircuit reread = parse_circuit_file(back);

    CHECK(reread.ccccta1.i_b == original.ccccta1.i_b);
    CHECK(reread.ccccta1.i_s == original.ccccta1.i_s);
    CHECK(reread.ccccta2.i_b == original.ccccta2.i_b);
    CHECK(reread.ccccta2.i_s == original.ccccta2.i_s);
    CHECK(reread.c1 == original.c1);
    CHECK(reread.c2 == original.c2);
    CHECK(reread.ccccta1.v_t == original.ccccta1.v_t);
}
