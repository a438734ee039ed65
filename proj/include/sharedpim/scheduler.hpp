#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sharedpim/controller.hpp"
#include "sharedpim/energy_area.hpp"
#include "sharedpim/geometry.hpp"
#include "sharedpim/timing.hpp"
#include "sharedpim/transfer.hpp"
#include "sharedpim/workload.hpp"

namespace sharedpim {

/// Latency of the in-subarray LUT operations.  Zeros resolve against the
/// timing preset at simulation time: a 4-bit LUT add/mul defaults to two row
/// cycles, and row-granular operations (shift, aggregate) to one AAP.
struct ComputeParams {
    double plut_op_4bit_ns = 0.0;
    double row_op_ns = 0.0;

    double resolved_plut_ns(const TimingParams& t) const {
        return plut_op_4bit_ns > 0.0 ? plut_op_4bit_ns : 2.0 * t.t_rc_ns;
    }
    double resolved_row_op_ns(const TimingParams& t) const {
        return row_op_ns > 0.0 ? row_op_ns : aap_latency(t);
    }
};

/// Everything one simulation run needs: the fabric, its timing grade, the
/// transfer mechanism under test, and the calibrated cost models.
struct Platform {
    FabricConfig fabric;
    TimingParams timing;
    MechanismParams mech;
    PowerModel power;
    ComputeParams compute;
    Mechanism mechanism = Mechanism::SharedPimBus;
    /// Widen the bank to the workload's subarray span instead of raising
    /// CapacityError ("an ideal number of computing arrays").
    bool full_parallelism = false;
};

enum class IntervalTag : std::uint8_t { Busy, Stall, Nop, Idle };
const char* interval_tag_name(IntervalTag tag);

/// One tagged occupancy interval on one named resource.
struct TimelineInterval {
    std::string resource;
    double start_ns = 0.0;
    double end_ns = 0.0;
    IntervalTag tag = IntervalTag::Busy;
    int32_t node_id = -1;
};

/// Scheduled start/end of one DAG node.
struct NodeSpan {
    double start_ns = 0.0;
    double end_ns = 0.0;
};

/// Result of one simulation run.
struct Timeline {
    std::vector<TimelineInterval> intervals;
    std::vector<NodeSpan> node_spans;
    double makespan_ns = 0.0;
    /// Transfer energy of the DAG's own Move nodes.
    double move_energy_uj = 0.0;
    /// Transfer energy spent inside 32-bit composite Compute nodes.
    double composite_energy_uj = 0.0;
    std::size_t move_count = 0;
    std::size_t compute_count = 0;
    int subarrays_used = 0;
};

/// Aggregated run measurements.
struct Metrics {
    double makespan_ns = 0.0;
    double transfer_energy_uj = 0.0;
    double stall_ns = 0.0;
    double nop_ns = 0.0;
    double subarray_utilization = 0.0;
    std::size_t move_count = 0;
    std::size_t compute_count = 0;
};

/// Deterministic list-scheduling simulation of `dag` on `p`.  The ready queue
/// orders by (ready time, node id); `seed_order`, when non-empty, permutes the
/// id tie-break.  Node durations come from ComputeParams (wider operands cost
/// their own simulated sub-schedule) and from the transfer module; every
/// resource window is arbitrated by the controller.
Timeline simulate(const WorkloadDag& dag, const Platform& p,
                  const std::vector<int32_t>& seed_order = {});

Metrics metrics(const Timeline& tl, const Platform& p);

/// One row of a cross-mechanism comparison; percentages are relative to the
/// first platform in the list.
struct PlatformResult {
    Mechanism mechanism = Mechanism::SharedPimBus;
    Metrics metrics;
    double speedup_pct = 0.0;
    double energy_saving_pct = 0.0;
};

struct ComparisonReport {
    std::string label;
    std::vector<PlatformResult> rows;
};

/// Runs `dag` on every platform and reports speedup and energy saving
/// relative to platforms[0].  All platforms must share one fabric shape.
ComparisonReport compare(const WorkloadDag& dag, const std::vector<Platform>& platforms);

/// Tunes plut_op_4bit_ns by bisection until the 32-bit add speedup of
/// SharedPimBus over LisaRisc meets `target_speedup_pct`.  All other fields
/// of `base` are used as-is.
double calibrate_plut_op(const Platform& base, double target_speedup_pct = 18.0);

/// Writes the timeline in the stable CSV schema
/// `resource,start_ns,end_ns,tag,node_id`, sorted by resource then start.
void timeline_to_csv(const Timeline& tl, std::ostream& out);

/// Busy/Stall/Nop intervals as audit input for the conflict sweep.
std::vector<AuditInterval> audit_view(const Timeline& tl);

}  // namespace sharedpim
