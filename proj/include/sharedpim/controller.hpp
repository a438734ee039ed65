#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sharedpim/geometry.hpp"
#include "sharedpim/transfer.hpp"

namespace sharedpim {

/// Shared-row slot activation state. A slot is reachable through its local
/// wordline or through the bank-level GWL, never both at once.
enum class SlotState : uint8_t { Idle, LocalActive, GlobalActive };

/// Controller-visible state of one subarray.
struct SubarrayState {
    bool active = false;            ///< a wordline is raised
    int raised_wordline = -1;       ///< which row, -1 when closed
    bool column_command_owner = false;
    std::vector<SlotState> shared_slot_state;
    double busy_until_ns = 0.0;     ///< compute or stall occupancy
    std::vector<double> slot_busy_until_ns;
};

/// Controller-visible state of one bank. All bus segments act as one unified
/// transfer structure, so a single transaction window covers the bank.
struct BankState {
    std::vector<SubarrayState> subarrays;
    double bus_busy_until_ns = 0.0;
};

/// Why a reservation was refused.
enum class ConflictKind { SharedRowDualAccess, BusBusy, SubarrayStalled };

/// Refusal: when to retry and which resource blocked.
struct Conflict {
    ConflictKind kind;
    double retry_at_ns;
    std::string blocking_resource;
};

/// Accepted reservation. Keep it to release the resources early; otherwise
/// they free themselves when the claim duration elapses.
struct Grant {
    uint64_t id = 0;
};

/// Whether a claim touches its shared-row slots through the local wordline or
/// the bank-level GWL (transfers use the GWL).
enum class SlotAccess : uint8_t { Local, Global };

/// MASA-style tracker for every bank in the fabric. Single-owner mutable
/// state: one simulation run drives one instance.
class FabricState {
  public:
    explicit FabricState(const Geometry& g);
    ~FabricState();
    FabricState(FabricState&&) noexcept;
    FabricState& operator=(FabricState&&) noexcept;

    /// Grants the claim at time `at` or reports the earliest retry time and
    /// the blocking resource. A grant marks every claimed resource busy until
    /// `at + claim.duration_ns`.
    std::variant<Grant, Conflict> reserve(const ResourceClaim& claim, double at,
                                          SlotAccess access = SlotAccess::Global);

    /// Returns the granted resources to their prior state. Throws
    /// DoubleReleaseError when the grant is unknown or already released.
    void release(const Grant& grant);

    /// Long simulations never release; with tracking off, reserve() skips
    /// recording undo state so memory stays flat. release() then refuses the
    /// grant, so flip this only on single-owner runs that never roll back.
    void set_grant_tracking(bool on) { track_grants_ = on; }

    const BankState& bank(int b) const { return banks_.at(static_cast<std::size_t>(b)); }
    double channel_busy_until_ns() const { return channel_busy_until_ns_; }

    /// True when every resource is idle at time `at`.
    bool quiescent(double at) const;

  private:
    struct Saved;
    const Geometry* geo_;
    std::vector<BankState> banks_;
    double channel_busy_until_ns_ = 0.0;
    uint64_t next_grant_ = 1;
    bool track_grants_ = true;
    std::vector<Saved> outstanding_;
};

/// Controller tracking footprint: 11 bits per subarray.
struct TrackingStorage {
    int64_t bits;
    int64_t bytes;
};
TrackingStorage tracking_storage(const Geometry& g);

/// One occupancy interval on one resource, used by the audit sweep.
struct AuditInterval {
    std::string resource;
    double start_ns;
    double end_ns;
};

/// Verifies that no two intervals on the same resource overlap. Returns the
/// first offending pair, or nothing when the schedule is conflict-free.
std::optional<std::pair<std::size_t, std::size_t>> audit_intervals(
    std::vector<AuditInterval> intervals);

}  // namespace sharedpim
