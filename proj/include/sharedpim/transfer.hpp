#pragma once

#include <tuple>
#include <utility>
#include <vector>

#include "sharedpim/geometry.hpp"
#include "sharedpim/timing.hpp"

namespace sharedpim {

/// Inter-subarray copy mechanisms.
enum class Mechanism {
    MemcpyChannel,    ///< read out over the memory channel and write back
    RowcloneIntraSA,  ///< in-place AAP copy inside one subarray
    RowcloneInterSA,  ///< serial-mode row clone between subarrays
    LisaRisc,         ///< row-buffer movement hopping across neighbors
    SharedPimBus,     ///< shared-row copy over the bank-level bus
};

const char* mechanism_name(Mechanism m);

/// Calibrated cost constants for the copy mechanisms.
struct MechanismParams {
    double memcpy_ns = 1366.25;     ///< full channel round trip for one row
    double rc_inter_ns = 1363.75;   ///< serial-mode inter-subarray clone
    double lisa_base_ns = 260.5;    ///< one-hop row-buffer movement
    double lisa_extra_hop_ns = 9.0; ///< added cost per hop beyond the first
};

/// Resources a transfer occupies for its duration. Coordinates are global
/// (bank, subarray) pairs so channel-level copies may span banks.
struct ResourceClaim {
    std::vector<std::pair<int, int>> stalled_subarrays;      ///< (bank, subarray) unusable for compute
    std::vector<std::pair<int, int>> busy_bus_segments;      ///< (bank, segment)
    std::vector<std::tuple<int, int, int>> busy_shared_rows; ///< (bank, subarray, slot)
    bool uses_channel = false;                               ///< serializes on the memory channel
    bool blocks_compute_at_endpoints = false;
    double duration_ns = 0.0;
};

/// One copy request: a source row and one or more destinations.
/// Multiple destinations (broadcast) are valid only for SharedPimBus.
struct CopyRequest {
    Mechanism mechanism = Mechanism::SharedPimBus;
    RowAddress src;
    std::vector<RowAddress> dsts;
    bool staged = true; ///< data already resident in the source shared row
};

/// Latency of one copy transaction in nanoseconds.
/// Channel and clone costs come from MechanismParams; LISA cost is affine in
/// hop distance; the bus copy is distance-invariant (one bus transaction when
/// staged, stage + bus + unstage when not).
double copy_latency(const CopyRequest& req, const Geometry& g, const TimingParams& t,
                    const MechanismParams& m);

/// Resources the request holds for copy_latency(req) nanoseconds.
/// LISA stalls every subarray between source and destination inclusive; the
/// bus copy stalls none but holds every bus segment of the bank plus the
/// participating shared-row slots.
ResourceClaim occupancy(const CopyRequest& req, const Geometry& g, const TimingParams& t,
                        const MechanismParams& m);

/// One bus transaction copying a source shared row into 1..4 destination
/// shared rows at once. Returns the transaction duration and its claim.
std::pair<double, ResourceClaim> broadcast_claim(const RowAddress& src,
                                                 const std::vector<RowAddress>& dsts,
                                                 const Geometry& g, const TimingParams& t);

/// DRAM command sequence realizing the request, suitable for
/// check_sequence_legal. Times are relative to issue at 0.
std::vector<Command> command_sequence(const CopyRequest& req, const Geometry& g,
                                      const TimingParams& t, const MechanismParams& m);

}  // namespace sharedpim
