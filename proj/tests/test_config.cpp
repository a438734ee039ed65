#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "sharedpim/config.hpp"
#include "sharedpim/errors.hpp"

using namespace sharedpim;

namespace {

std::string write_config(const std::string& name, const std::string& text) {
    std::filesystem::path p = std::filesystem::temp_directory_path() / name;
    std::ofstream out(p);
    out << text;
    return p.string();
}

} // namespace

TEST_CASE("an empty file yields the default configuration") {
    SimConfig cfg = parse_config(write_config("empty.cfg", ""));
    CHECK(cfg.fabric == FabricConfig{});
    CHECK(cfg.timing == timing_presets::ddr3_1600_11());
    CHECK_EQ(cfg.mech.lisa_base_ns, doctest::Approx(260.5));
    CHECK_EQ(cfg.compute.plut_op_4bit_ns, doctest::Approx(0.0));
}

TEST_CASE("key = value lines override individual fields") {
    std::string path = write_config("override.cfg",
                                    "# tuning\n"
                                    "subarrays_per_bank = 32\n"
                                    "lisa_extra_hop_ns = 12.5   # per-hop cost\n"
                                    "\n"
                                    "plut_op_4bit_ns = 6780.083333\n");
    SimConfig cfg = parse_config(path);
    CHECK_EQ(cfg.fabric.subarrays_per_bank, 32);
    CHECK_EQ(cfg.mech.lisa_extra_hop_ns, doctest::Approx(12.5));
    CHECK_EQ(cfg.compute.plut_op_4bit_ns, doctest::Approx(6780.083333));
    // Untouched fields keep their defaults.
    CHECK_EQ(cfg.fabric.rows_per_subarray, 512);
}

TEST_CASE("the timing grade key swaps in the whole preset") {
    SimConfig cfg = parse_config(write_config("grade.cfg", "timing_grade = ddr4_2400t_17\n"));
    CHECK(cfg.timing == timing_presets::ddr4_2400t_17());
    CHECK(cfg.fabric.grade == TimingGrade::Ddr4_2400T_17);

    CHECK_THROWS_AS(parse_config(write_config("badgrade.cfg", "timing_grade = ddr5\n")),
                    FileParseError);
}

TEST_CASE("unknown keys are rejected with their line number") {
    std::string path = write_config("unknown.cfg", "channels = 1\nwibble = 3\n");
    try {
        parse_config(path);
        FAIL("expected FileParseError");
    } catch (const FileParseError& e) {
        CHECK_EQ(e.line(), 2);
        CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
    }
}

TEST_CASE("malformed lines are rejected") {
    CHECK_THROWS_AS(parse_config(write_config("noeq.cfg", "channels 1\n")), FileParseError);
    CHECK_THROWS_AS(parse_config(write_config("novalue.cfg", "channels =\n")), FileParseError);
    CHECK_THROWS_AS(parse_config(write_config("nokey.cfg", "= 3\n")), FileParseError);
    CHECK_THROWS_AS(parse_config(write_config("trailing.cfg", "channels = 1 banana\n")),
                    FileParseError);
    CHECK_THROWS_AS(parse_config(write_config("nonnum.cfg", "t_ras_ns = abc\n")),
                    FileParseError);
}

TEST_CASE("nonpositive values are configuration errors") {
    try {
        parse_config(write_config("zero.cfg", "subarrays_per_bank = 0\n"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(write_config("neg.cfg", "t_ras_ns = -5\n")), ConfigError);
}

TEST_CASE("the final configuration must be self-consistent") {
    // Breaking the open-close identity via one override fails validation.
    CHECK_THROWS_AS(parse_config(write_config("broken.cfg", "t_rc_ns = 50\n")), ConfigError);
    // Fixing all three members together passes.
    SimConfig cfg = parse_config(write_config(
        "consistent.cfg", "t_ras_ns = 30\nt_rp_ns = 20\nt_rc_ns = 50\n"));
    CHECK_EQ(cfg.timing.t_rc_ns, doctest::Approx(50.0));

    // Fabric constraints are enforced too.
    CHECK_THROWS_AS(
        parse_config(write_config("shape.cfg", "subarrays_per_bank = 2\n")),
        ConfigError); // fewer subarrays than bus segments
}

TEST_CASE("a missing file is a parse error at line zero") {
    try {
        parse_config("/nonexistent/sim.cfg");
        FAIL("expected FileParseError");
    } catch (const FileParseError& e) {
        CHECK_EQ(e.line(), 0);
    }
}
