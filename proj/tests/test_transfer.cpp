#include "doctest.h"

#include <algorithm>
#include <functional>
#include <optional>
#include <string>

#include "sharedpim/errors.hpp"
#include "sharedpim/transfer.hpp"

using namespace sharedpim;

namespace {

const Geometry& geom() {
    static Geometry g = validate_config(FabricConfig{});
    return g;
}

RowAddress reg(int bank, int sa, int row = 0) { return {bank, sa, row, RowKind::Regular}; }

RowAddress shared(int bank, int sa, int slot = 0) {
    return geom().shared_row(bank, sa, slot, RowKind::SharedGlobal);
}

CopyRequest request(Mechanism m, RowAddress src, RowAddress dst, bool staged = true) {
    return {m, src, {dst}, staged};
}

std::optional<TransferErrorKind> kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const TransferError& e) {
        return e.kind();
    }
    return std::nullopt;
}

} // namespace

TEST_CASE("mechanism names are stable identifiers") {
    CHECK_EQ(std::string(mechanism_name(Mechanism::MemcpyChannel)), "memcpy");
    CHECK_EQ(std::string(mechanism_name(Mechanism::RowcloneIntraSA)), "rc_intra");
    CHECK_EQ(std::string(mechanism_name(Mechanism::RowcloneInterSA)), "rc_inter");
    CHECK_EQ(std::string(mechanism_name(Mechanism::LisaRisc)), "lisa");
    CHECK_EQ(std::string(mechanism_name(Mechanism::SharedPimBus)), "sharedpim");
}

TEST_CASE("copy latencies match the calibrated cost table") {
    const Geometry& g = geom();
    TimingParams t = timing_presets::ddr3_1600_11();
    MechanismParams m;

    CHECK_EQ(copy_latency(request(Mechanism::MemcpyChannel, reg(0, 0), reg(1, 3)), g, t, m),
             doctest::Approx(1366.25).epsilon(1e-9));
    CHECK_EQ(copy_latency(request(Mechanism::RowcloneInterSA, reg(0, 0), reg(0, 9)), g, t, m),
             doctest::Approx(1363.75).epsilon(1e-9));
    CHECK_EQ(copy_latency(request(Mechanism::RowcloneIntraSA, reg(0, 2, 3), reg(0, 2, 7)), g, t, m),
             doctest::Approx(52.75).epsilon(1e-9));
    CHECK_EQ(copy_latency(request(Mechanism::LisaRisc, reg(0, 0), reg(0, 1)), g, t, m),
             doctest::Approx(260.5).epsilon(1e-9));
    CHECK_EQ(copy_latency(request(Mechanism::SharedPimBus, shared(0, 0), shared(0, 1)), g, t, m),
             doctest::Approx(52.75).epsilon(1e-9));
}

TEST_CASE("one-hop movement cost is affine in the hop distance") {
    const Geometry& g = geom();
    TimingParams t = timing_presets::ddr3_1600_11();
    MechanismParams m;
    auto lisa = [&](int d) {
        return copy_latency(request(Mechanism::LisaRisc, reg(0, 2, 7), reg(0, 2 + d, 7)), g, t, m);
    };
    CHECK_EQ(lisa(1), doctest::Approx(260.5));
    CHECK_EQ(lisa(2), doctest::Approx(269.5));
    CHECK_EQ(lisa(5), doctest::Approx(296.5));
    // Same-subarray degenerates to a plain in-place row copy.
    CHECK_EQ(copy_latency(request(Mechanism::LisaRisc, reg(0, 2, 3), reg(0, 2, 7)), g, t, m),
             doctest::Approx(52.75));
}

TEST_CASE("the bus copy is distance-invariant, staging triples it") {
    const Geometry& g = geom();
    TimingParams t = timing_presets::ddr3_1600_11();
    MechanismParams m;
    for (int d : {1, 5, 15})
        CHECK_EQ(copy_latency(request(Mechanism::SharedPimBus, shared(0, 0), shared(0, d)), g, t, m),
                 doctest::Approx(52.75).epsilon(1e-9));
    CHECK_EQ(copy_latency(request(Mechanism::SharedPimBus, reg(0, 0, 100), reg(0, 5, 200), false),
                          g, t, m),
             doctest::Approx(158.25).epsilon(1e-9));
}

TEST_CASE("malformed copy requests are rejected with the right reason") {
    const Geometry& g = geom();
    TimingParams t = timing_presets::ddr3_1600_11();
    MechanismParams m;
    auto latency_of = [&](CopyRequest r) { return [&, r] { copy_latency(r, g, t, m); }; };

    CopyRequest empty{Mechanism::SharedPimBus, shared(0, 0), {}, true};
    CHECK(kind_of(latency_of(empty)) == TransferErrorKind::BadRequest);

    CopyRequest multi_lisa{Mechanism::LisaRisc, reg(0, 0), {reg(0, 1), reg(0, 2)}, true};
    CHECK(kind_of(latency_of(multi_lisa)) == TransferErrorKind::BadRequest);

    CopyRequest five{Mechanism::SharedPimBus, shared(0, 0),
                     {shared(0, 1), shared(0, 2), shared(0, 3), shared(0, 4), shared(0, 5)},
                     true};
    CHECK(kind_of(latency_of(five)) == TransferErrorKind::BroadcastLimit);

    // Over-limit wins over the staging complaint.
    CopyRequest five_unstaged = five;
    five_unstaged.staged = false;
    CHECK(kind_of(latency_of(five_unstaged)) == TransferErrorKind::BroadcastLimit);

    CopyRequest two_unstaged{Mechanism::SharedPimBus, shared(0, 0), {shared(0, 1), shared(0, 2)},
                             false};
    CHECK(kind_of(latency_of(two_unstaged)) == TransferErrorKind::UnstagedBroadcast);

    CHECK(kind_of(latency_of(request(Mechanism::RowcloneInterSA, reg(0, 0), reg(1, 0)))) ==
          TransferErrorKind::CrossBank);
    CHECK(kind_of(latency_of(request(Mechanism::LisaRisc, reg(0, 0), reg(1, 0)))) ==
          TransferErrorKind::CrossBank);
    CHECK(kind_of(latency_of(request(Mechanism::SharedPimBus, shared(0, 0), shared(1, 0)))) ==
          TransferErrorKind::CrossBank);
    CHECK(kind_of(latency_of(request(Mechanism::RowcloneIntraSA, reg(0, 0), reg(0, 1)))) ==
          TransferErrorKind::CrossSubarray);

    // The channel copy may cross banks.
    CHECK_FALSE(kind_of(latency_of(request(Mechanism::MemcpyChannel, reg(0, 0), reg(1, 3)))));

    // Addresses are validated too.
    CHECK_THROWS_AS(copy_latency(request(Mechanism::MemcpyChannel, reg(0, 0), reg(0, 99)), g, t, m),
                    OutOfRangeError);
}

TEST_CASE("movement stalls every subarray between the endpoints") {
    const Geometry& g = geom();
    TimingParams t = timing_presets::ddr3_1600_11();
    MechanismParams m;
    ResourceClaim c = occupancy(request(Mechanism::LisaRisc, reg(0, 5), reg(0, 2)), g, t, m);
    REQUIRE_EQ(c.stalled_subarrays.size(), 4);
    for (int sa = 2; sa <= 5; ++sa)
        CHECK(std::count(c.stalled_subarrays.begin(), c.stalled_subarrays.end(),
                         std::make_pair(0, sa)) == 1);
    CHECK(c.busy_bus_segments.empty());
    CHECK(c.busy_shared_rows.empty());
    CHECK_FALSE(c.uses_channel);
    CHECK_EQ(c.duration_ns, doctest::Approx(278.5)); // three hops
}

TEST_CASE("the bus copy holds the bus and the endpoint slots, stalling nothing") {
    const Geometry& g = geom();
    TimingParams t = timing_presets::ddr3_1600_11();
    MechanismParams m;
    ResourceClaim c = occupancy(request(Mechanism::SharedPimBus, shared(0, 3), shared(0, 12)),
                                g, t, m);
    CHECK(c.stalled_subarrays.empty());
    CHECK_EQ(c.busy_bus_segments.size(), 4); // every segment of the bank, as one structure
    REQUIRE_EQ(c.busy_shared_rows.size(), 2);
    CHECK(std::count(c.busy_shared_rows.begin(), c.busy_shared_rows.end(),
                     std::make_tuple(0, 3, 0)) == 1);
    CHECK(std::count(c.busy_shared_rows.begin(), c.busy_shared_rows.end(),
                     std::make_tuple(0, 12, 0)) == 1);
    CHECK_FALSE(c.uses_channel);
    CHECK_EQ(c.duration_ns, doctest::Approx(52.75));
}

TEST_CASE("channel copies serialize on the channel and block their endpoints") {
    const Geometry& g = geom();
    TimingParams t = timing_presets::ddr3_1600_11();
    MechanismParams m;
    for (Mechanism mech : {Mechanism::MemcpyChannel, Mechanism::RowcloneInterSA}) {
        RowAddress dst = mech == Mechanism::MemcpyChannel ? reg(1, 3) : reg(0, 3);
        ResourceClaim c = occupancy(request(mech, reg(0, 0), dst), g, t, m);
        CHECK(c.uses_channel);
        CHECK(c.blocks_compute_at_endpoints);
        REQUIRE_EQ(c.stalled_subarrays.size(), 2);
        CHECK(std::count(c.stalled_subarrays.begin(), c.stalled_subarrays.end(),
                         std::make_pair(0, 0)) == 1);
        CHECK(std::count(c.stalled_subarrays.begin(), c.stalled_subarrays.end(),
                         std::make_pair(dst.bank, 3)) == 1);
    }
}

TEST_CASE("one bus transaction broadcasts to up to four destinations") {
    const Geometry& g = geom();
    TimingParams t = timing_presets::ddr3_1600_11();

    std::vector<RowAddress> four{shared(0, 1), shared(0, 2), shared(0, 3, 1), shared(0, 4)};
    auto [duration, claim] = broadcast_claim(shared(0, 0), four, g, t);
    CHECK_EQ(duration, doctest::Approx(52.75).epsilon(1e-9));
    CHECK_EQ(claim.duration_ns, doctest::Approx(52.75).epsilon(1e-9));
    CHECK_EQ(claim.busy_bus_segments.size(), 4);
    REQUIRE_EQ(claim.busy_shared_rows.size(), 5);
    CHECK(std::count(claim.busy_shared_rows.begin(), claim.busy_shared_rows.end(),
                     std::make_tuple(0, 0, 0)) == 1);
    // Slot indices follow the row position inside the shared range.
    CHECK(std::count(claim.busy_shared_rows.begin(), claim.busy_shared_rows.end(),
                     std::make_tuple(0, 3, 1)) == 1);
    CHECK(claim.stalled_subarrays.empty());

    std::vector<RowAddress> five = four;
    five.push_back(shared(0, 5));
    CHECK(kind_of([&] { broadcast_claim(shared(0, 0), five, g, t); }) ==
          TransferErrorKind::BroadcastLimit);

    std::vector<RowAddress> to_regular{reg(0, 1, 5)};
    CHECK(kind_of([&] { broadcast_claim(shared(0, 0), to_regular, g, t); }) ==
          TransferErrorKind::BadRequest);
    CHECK(kind_of([&] { broadcast_claim(reg(0, 0, 5), four, g, t); }) ==
          TransferErrorKind::BadRequest);
}

TEST_CASE("command sequences decompose each mechanism into legal DRAM commands") {
    const Geometry& g = geom();
    MechanismParams m;
    for (TimingParams t : {timing_presets::ddr3_1600_11(), timing_presets::ddr4_2400t_17()}) {
        auto legal = [&](const CopyRequest& r) {
            auto seq = command_sequence(r, g, t, m);
            CHECK(std::is_sorted(seq.begin(), seq.end(),
                                 [](const Command& a, const Command& b) {
                                     return a.issue_ns < b.issue_ns;
                                 }));
            return !check_sequence_legal(seq, t).has_value();
        };
        CHECK(legal(request(Mechanism::RowcloneIntraSA, reg(0, 2, 3), reg(0, 2, 7))));
        CHECK(legal(request(Mechanism::SharedPimBus, shared(0, 0), shared(0, 9))));
        CHECK(legal(request(Mechanism::SharedPimBus, reg(0, 0, 100), reg(0, 5, 200), false)));
        CHECK(legal(request(Mechanism::LisaRisc, reg(0, 2, 7), reg(0, 9, 7))));
        CHECK(legal(request(Mechanism::LisaRisc, reg(0, 9, 7), reg(0, 2, 7))));
        CHECK(legal(request(Mechanism::MemcpyChannel, reg(0, 0), reg(1, 3))));
        CHECK(legal(request(Mechanism::RowcloneInterSA, reg(0, 0, 3), reg(0, 7, 9))));

        CopyRequest broadcast{Mechanism::SharedPimBus, shared(0, 0),
                              {shared(0, 1), shared(0, 2), shared(0, 3), shared(0, 4)}, true};
        CHECK(legal(broadcast));
    }
}

TEST_CASE("the staged bus sequence is one overlapped global activation window") {
    const Geometry& g = geom();
    TimingParams t = timing_presets::ddr3_1600_11();
    MechanismParams m;
    CopyRequest r{Mechanism::SharedPimBus, shared(0, 0),
                  {shared(0, 1), shared(0, 2), shared(0, 3)}, true};
    auto seq = command_sequence(r, g, t, m);
    REQUIRE_EQ(seq.size(), 5); // source raise, three destination raises, close
    CHECK(seq.front().kind == CommandKind::GwlActivate);
    CHECK_EQ(seq.front().issue_ns, doctest::Approx(0.0));
    for (std::size_t i = 1; i < 4; ++i) {
        CHECK(seq[i].kind == CommandKind::GwlActivate);
        CHECK_EQ(seq[i].issue_ns, doctest::Approx(t.aap_offset_ns));
        CHECK(seq[i].on_bus);
    }
    CHECK(seq.back().kind == CommandKind::Precharge);
    CHECK_EQ(seq.back().issue_ns, doctest::Approx(t.aap_offset_ns + t.t_ras_ns));
}

TEST_CASE("the movement sequence hops once per intermediate subarray") {
    const Geometry& g = geom();
    TimingParams t = timing_presets::ddr3_1600_11();
    MechanismParams m;
    auto seq = command_sequence(request(Mechanism::LisaRisc, reg(0, 2, 7), reg(0, 6, 7)), g, t, m);
    int hops = 0;
    for (const Command& c : seq)
        if (c.kind == CommandKind::Rbm) ++hops;
    CHECK_EQ(hops, 4);
    CHECK(seq.front().kind == CommandKind::Activate);
    CHECK(seq.back().kind == CommandKind::Precharge);
}

TEST_CASE("the channel sequence reads the source and writes the destination") {
    const Geometry& g = geom();
    TimingParams t = timing_presets::ddr3_1600_11();
    MechanismParams m;
    auto seq = command_sequence(request(Mechanism::MemcpyChannel, reg(0, 0), reg(1, 3)), g, t, m);
    int reads = 0, writes = 0;
    for (const Command& c : seq) {
        if (c.kind == CommandKind::Read) ++reads;
        if (c.kind == CommandKind::Write) ++writes;
    }
    CHECK_EQ(reads, 1);
    CHECK_EQ(writes, 1);
}
