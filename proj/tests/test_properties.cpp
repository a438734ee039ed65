#include "doctest.h"

#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sharedpim/controller.hpp"
#include "sharedpim/errors.hpp"
#include "sharedpim/scheduler.hpp"

using namespace sharedpim;

namespace {

Platform platform(Mechanism m, double plut_ns = 0.0) {
    Platform p;
    p.mechanism = m;
    p.compute.plut_op_4bit_ns = plut_ns;
    p.full_parallelism = true;
    return p;
}

/// The simulator's operating point: the 4-bit LUT cost that lands the 32-bit
/// add speedup on its target.
double calibrated_plut() {
    static double plut = calibrate_plut_op(platform(Mechanism::SharedPimBus));
    return plut;
}

std::string csv_of(const Timeline& tl) {
    std::ostringstream out;
    timeline_to_csv(tl, out);
    return out.str();
}

/// Arbitrary DAG over 12 subarrays. Moves always forward a computed value;
/// computes occasionally use 32-bit operands so composite atoms are covered.
WorkloadDag random_dag(std::mt19937& rng) {
    WorkloadDag dag;
    dag.label = "random";
    std::uniform_int_distribution<int> node_count(1, 40);
    std::uniform_int_distribution<int> subarray(0, 11);
    std::uniform_int_distribution<int> percent(0, 99);
    const OpKind ops[] = {OpKind::Lut4Add, OpKind::Lut4Mul, OpKind::LutShift, OpKind::Aggregate};

    int n = node_count(rng);
    std::vector<int32_t> computes;
    for (int i = 0; i < n; ++i) {
        if (!computes.empty() && percent(rng) < 30) {
            int src = subarray(rng);
            int dst = subarray(rng);
            while (dst == src) dst = subarray(rng);
            int32_t id = dag.add_move(src, dst);
            std::uniform_int_distribution<std::size_t> pick(0, computes.size() - 1);
            int32_t producer = computes[pick(rng)];
            dag.add_edge(producer, id);
            if (id > 0 && percent(rng) < 40) {
                std::uniform_int_distribution<int32_t> earlier(0, id - 1);
                int32_t extra = earlier(rng);
                if (extra != producer) dag.add_edge(extra, id);
            }
        } else {
            OpKind op = ops[static_cast<std::size_t>(percent(rng)) % 4];
            uint16_t width = percent(rng) < 15 ? 32 : 4;
            int32_t id = dag.add_compute(op, width, subarray(rng));
            if (id > 0 && percent(rng) < 60) {
                std::uniform_int_distribution<int32_t> earlier(0, id - 1);
                dag.add_edge(earlier(rng), id);
            }
            computes.push_back(id);
        }
    }
    return dag;
}

std::vector<WorkloadDag> benchmark_set() {
    return {build_wide_add(32), build_wide_mul(32), build_ntt(8),
            build_mm(4),        build_pmm(4),       build_graph_search(10, GraphSearchKind::Bfs)};
}

} // namespace

TEST_CASE("property: simulation is deterministic over arbitrary graphs") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 100; ++trial) {
        WorkloadDag dag = random_dag(rng);
        Mechanism mech = trial % 2 == 0 ? Mechanism::SharedPimBus : Mechanism::LisaRisc;
        Platform p = platform(mech);
        Timeline first = simulate(dag, p);
        Timeline second = simulate(dag, p);
        INFO("trial ", trial);
        CHECK_EQ(csv_of(first), csv_of(second));
        CHECK_EQ(first.makespan_ns, second.makespan_ns);
    }
}

TEST_CASE("property: faster mechanisms never lose at the operating point") {
    double plut = calibrated_plut();
    for (const WorkloadDag& dag : benchmark_set()) {
        double sp = simulate(dag, platform(Mechanism::SharedPimBus, plut)).makespan_ns;
        double li = simulate(dag, platform(Mechanism::LisaRisc, plut)).makespan_ns;
        double rc = simulate(dag, platform(Mechanism::RowcloneInterSA, plut)).makespan_ns;
        double mc = simulate(dag, platform(Mechanism::MemcpyChannel, plut)).makespan_ns;
        INFO(dag.label);
        CHECK(time_le(sp, li));
        CHECK(time_le(li, rc));
        CHECK(time_le(rc, mc));
    }
}

TEST_CASE("property: no schedule double-books a resource") {
    double plut = calibrated_plut();
    for (const WorkloadDag& dag : benchmark_set()) {
        for (Mechanism m : {Mechanism::SharedPimBus, Mechanism::LisaRisc,
                            Mechanism::RowcloneInterSA, Mechanism::MemcpyChannel}) {
            Timeline tl = simulate(dag, platform(m, plut));
            INFO(dag.label, " on ", mechanism_name(m));
            CHECK_FALSE(audit_intervals(audit_view(tl)).has_value());
        }
    }
    std::mt19937 rng(777);
    for (int trial = 0; trial < 20; ++trial) {
        WorkloadDag dag = random_dag(rng);
        for (Mechanism m : {Mechanism::SharedPimBus, Mechanism::LisaRisc}) {
            Timeline tl = simulate(dag, platform(m));
            INFO("random trial ", trial, " on ", mechanism_name(m));
            CHECK_FALSE(audit_intervals(audit_view(tl)).has_value());
        }
    }
}

TEST_CASE("property: bus transfers stall no subarray, movement stalls its path") {
    double plut = calibrated_plut();
    for (const WorkloadDag& dag : benchmark_set()) {
        Timeline tl = simulate(dag, platform(Mechanism::SharedPimBus, plut));
        INFO(dag.label);
        for (const TimelineInterval& iv : tl.intervals)
            CHECK(iv.tag != IntervalTag::Stall);
    }

    // One movement across d subarrays freezes exactly d+1 of them.
    for (int d = 1; d <= 8; ++d) {
        WorkloadDag dag;
        dag.label = "hop";
        int32_t a = dag.add_compute(OpKind::Lut4Add, 4, 0);
        int32_t mv = dag.add_move(0, d);
        dag.add_edge(a, mv);
        Timeline tl = simulate(dag, platform(Mechanism::LisaRisc));
        std::set<std::string> stalled;
        for (const TimelineInterval& iv : tl.intervals)
            if (iv.tag == IntervalTag::Stall) stalled.insert(iv.resource);
        CHECK_EQ(stalled.size(), static_cast<std::size_t>(d + 1));
    }
}

TEST_CASE("property: the bus copy window is independent of distance") {
    Geometry g = validate_config(FabricConfig{});
    TimingParams t = timing_presets::ddr3_1600_11();
    MechanismParams m;
    double reference = 0.0;
    for (int d : {1, 3, 7, 15}) {
        CopyRequest r{Mechanism::SharedPimBus,
                      g.shared_row(0, 0, 0, RowKind::SharedGlobal),
                      {g.shared_row(0, d, 0, RowKind::SharedGlobal)},
                      true};
        double latency = copy_latency(r, g, t, m);
        if (reference == 0.0) reference = latency;
        CHECK_EQ(latency, doctest::Approx(reference).epsilon(1e-12));
    }
    CHECK_EQ(reference, doctest::Approx(aap_latency(t)).epsilon(1e-12));
}

TEST_CASE("property: every mechanism's command decomposition is legal") {
    Geometry g = validate_config(FabricConfig{});
    MechanismParams m;
    for (TimingParams t : {timing_presets::ddr3_1600_11(), timing_presets::ddr4_2400t_17()}) {
        auto expect_legal = [&](const CopyRequest& r) {
            auto seq = command_sequence(r, g, t, m);
            auto violation = check_sequence_legal(seq, t);
            CHECK_FALSE(violation.has_value());
        };
        for (int d : {1, 4, 9}) {
            expect_legal({Mechanism::LisaRisc, {0, 2, 7}, {{0, 2 + d, 7}}, true});
            expect_legal({Mechanism::RowcloneInterSA, {0, 0, 3}, {{0, d, 9}}, true});
            expect_legal({Mechanism::SharedPimBus,
                          g.shared_row(0, 0, 0, RowKind::SharedGlobal),
                          {g.shared_row(0, d, 0, RowKind::SharedGlobal)},
                          true});
            expect_legal({Mechanism::SharedPimBus, {0, 0, 100}, {{0, d, 200}}, false});
        }
        expect_legal({Mechanism::LisaRisc, {0, 9, 7}, {{0, 2, 7}}, true});
        expect_legal({Mechanism::MemcpyChannel, {0, 0, 0}, {{1, 3, 0}}, true});
        expect_legal({Mechanism::MemcpyChannel, {0, 0, 0}, {{0, 0, 7}}, true});
        expect_legal({Mechanism::RowcloneIntraSA, {0, 0, 0}, {{0, 0, 5}}, true});
        expect_legal({Mechanism::SharedPimBus,
                      g.shared_row(0, 0, 0, RowKind::SharedGlobal),
                      {g.shared_row(0, 1, 0, RowKind::SharedGlobal),
                       g.shared_row(0, 2, 0, RowKind::SharedGlobal),
                       g.shared_row(0, 3, 0, RowKind::SharedGlobal),
                       g.shared_row(0, 4, 0, RowKind::SharedGlobal)},
                      true});
    }
}

TEST_CASE("property: a shared row never answers both addresses at once") {
    Geometry g = validate_config(FabricConfig{});
    auto slot_claim = [](SlotAccess) {
        ResourceClaim c;
        c.busy_shared_rows.emplace_back(0, 5, 0);
        c.duration_ns = 52.75;
        return c;
    };
    for (auto [first, second] : {std::pair{SlotAccess::Global, SlotAccess::Local},
                                 std::pair{SlotAccess::Local, SlotAccess::Global}}) {
        FabricState st(g);
        auto ok = st.reserve(slot_claim(first), 0.0, first);
        REQUIRE(std::holds_alternative<Grant>(ok));
        auto clash = st.reserve(slot_claim(second), 10.0, second);
        REQUIRE(std::holds_alternative<Conflict>(clash));
        CHECK(std::get<Conflict>(clash).kind == ConflictKind::SharedRowDualAccess);
        // After the window expires the other address works.
        CHECK(std::holds_alternative<Grant>(st.reserve(slot_claim(second), 52.75, second)));
    }
}
