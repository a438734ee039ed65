#include "doctest.h"

#include "sharedpim/errors.hpp"
#include "sharedpim/timing.hpp"

using namespace sharedpim;

namespace {

Command act(double at, int sa, int row) {
    return {CommandKind::Activate, at, 0, sa, row, -1, false};
}
Command pre(double at, int sa, int row) {
    return {CommandKind::Precharge, at, 0, sa, row, -1, false};
}
Command gwl(double at, int sa) {
    return {CommandKind::GwlActivate, at, 0, sa, sa, -1, true};
}

} // namespace

TEST_CASE("timing presets carry their grade's parameters") {
    TimingParams d3 = timing_presets::ddr3_1600_11();
    CHECK_EQ(d3.t_ck_ns, doctest::Approx(1.25));
    CHECK_EQ(d3.t_rcd_ns, doctest::Approx(13.75));
    CHECK_EQ(d3.t_rp_ns, doctest::Approx(13.75));
    CHECK_EQ(d3.t_ras_ns, doctest::Approx(35.0));
    CHECK_EQ(d3.t_rc_ns, doctest::Approx(48.75));
    CHECK_NOTHROW(validate_timing(d3));

    TimingParams d4 = timing_presets::ddr4_2400t_17();
    CHECK_EQ(d4.t_ck_ns, doctest::Approx(0.833));
    CHECK_EQ(d4.t_rcd_ns, doctest::Approx(14.17));
    CHECK_EQ(d4.t_rp_ns, doctest::Approx(14.17));
    CHECK_EQ(d4.t_ras_ns, doctest::Approx(32.0));
    CHECK_EQ(d4.t_rc_ns, doctest::Approx(46.17));
    CHECK_NOTHROW(validate_timing(d4));
}

TEST_CASE("one row copy costs the offset plus a full open-close window") {
    TimingParams d3 = timing_presets::ddr3_1600_11();
    CHECK_EQ(aap_latency(d3), doctest::Approx(d3.aap_offset_ns + d3.t_ras_ns + d3.t_rp_ns));
    CHECK_EQ(aap_latency(d3), doctest::Approx(52.75));
    TimingParams d4 = timing_presets::ddr4_2400t_17();
    CHECK_EQ(aap_latency(d4), doctest::Approx(50.17));
}

TEST_CASE("validate_timing rejects inconsistent or nonpositive parameters") {
    TimingParams t = timing_presets::ddr3_1600_11();
    t.t_rc_ns = 50.0; // breaks t_rc = t_ras + t_rp
    CHECK_THROWS_AS(validate_timing(t), ConfigError);

    t = timing_presets::ddr3_1600_11();
    t.t_ras_ns = 0.0;
    CHECK_THROWS_AS(validate_timing(t), ConfigError);

    t = timing_presets::ddr3_1600_11();
    t.t_rp_ns = -1.0;
    CHECK_THROWS_AS(validate_timing(t), ConfigError);
}

TEST_CASE("a full activate-precharge-activate cycle is legal") {
    TimingParams t = timing_presets::ddr3_1600_11();
    std::vector<Command> seq{act(0.0, 0, 5), pre(35.0, 0, 5), act(48.75, 0, 9)};
    CHECK_FALSE(check_sequence_legal(seq, t).has_value());
}

TEST_CASE("precharging a row younger than t_ras is flagged") {
    TimingParams t = timing_presets::ddr3_1600_11();
    std::vector<Command> seq{act(0.0, 0, 5), pre(10.0, 0, 5)};
    auto v = check_sequence_legal(seq, t);
    REQUIRE(v.has_value());
    CHECK_EQ(v->command_index, 1);
    CHECK(v->rule == TimingRule::PrechargeBeforeTras);
}

TEST_CASE("the second overlapped activate must wait the copy offset") {
    TimingParams t = timing_presets::ddr3_1600_11();
    std::vector<Command> ok{act(0.0, 0, 5), act(4.0, 0, 9), pre(39.0, 0, 5)};
    CHECK_FALSE(check_sequence_legal(ok, t).has_value());

    std::vector<Command> bad{act(0.0, 0, 5), act(1.0, 0, 9)};
    auto v = check_sequence_legal(bad, t);
    REQUIRE(v.has_value());
    CHECK_EQ(v->command_index, 1);
    CHECK(v->rule == TimingRule::AapGapTooShort);
}

TEST_CASE("a third concurrent activate in one subarray is flagged") {
    TimingParams t = timing_presets::ddr3_1600_11();
    std::vector<Command> seq{act(0.0, 0, 5), act(4.0, 0, 9), act(8.0, 0, 11)};
    auto v = check_sequence_legal(seq, t);
    REQUIRE(v.has_value());
    CHECK_EQ(v->command_index, 2);
    CHECK(v->rule == TimingRule::DoubleActivate);
}

TEST_CASE("re-raising an already raised row is flagged") {
    TimingParams t = timing_presets::ddr3_1600_11();
    std::vector<Command> seq{act(0.0, 0, 5), act(4.0, 0, 5)};
    auto v = check_sequence_legal(seq, t);
    REQUIRE(v.has_value());
    CHECK(v->rule == TimingRule::DoubleActivate);
}

TEST_CASE("reactivating a subarray before t_rc has elapsed is flagged") {
    TimingParams t = timing_presets::ddr3_1600_11();
    std::vector<Command> seq{act(0.0, 0, 5), pre(35.0, 0, 5), act(40.0, 0, 9)};
    auto v = check_sequence_legal(seq, t);
    REQUIRE(v.has_value());
    CHECK_EQ(v->command_index, 2);
    CHECK(v->rule == TimingRule::ReactivateBeforeTrc);
}

TEST_CASE("rules are tracked per subarray, not across the bank") {
    TimingParams t = timing_presets::ddr3_1600_11();
    // Same instants in different subarrays are independent domains.
    std::vector<Command> seq{act(0.0, 0, 5), act(0.0, 1, 5), pre(10.0, 1, 5)};
    auto v = check_sequence_legal(seq, t);
    REQUIRE(v.has_value());
    CHECK_EQ(v->command_index, 2);
    CHECK(v->rule == TimingRule::PrechargeBeforeTras);
}

TEST_CASE("simultaneous global-wordline raises merge into one bus event") {
    TimingParams t = timing_presets::ddr3_1600_11();
    // A broadcast raises several destination GWLs at the same instant; the
    // bus treats them as one overlapped activation.
    std::vector<Command> seq{gwl(0.0, 0), gwl(4.0, 1), gwl(4.0, 2), gwl(4.0, 3),
                             {CommandKind::Precharge, 39.0, 0, 0, 0, -1, true}};
    CHECK_FALSE(check_sequence_legal(seq, t).has_value());
}
