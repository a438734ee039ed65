#include "sharedpim/controller.hpp"

#include <algorithm>
#include <numeric>

#include "sharedpim/common.hpp"
#include "sharedpim/errors.hpp"

namespace sharedpim {

struct FabricState::Saved {
    uint64_t id;
    struct Item {
        enum Kind { Subarray, Bus, Slot, Channel } kind;
        int bank = 0;
        int subarray = 0;
        int slot = 0;
        double prior_busy = 0.0;
        SlotState prior_state = SlotState::Idle;
        bool prior_active = false;
    };
    std::vector<Item> items;
};

FabricState::~FabricState() = default;
FabricState::FabricState(FabricState&&) noexcept = default;
FabricState& FabricState::operator=(FabricState&&) noexcept = default;

FabricState::FabricState(const Geometry& g) : geo_(&g) {
    const FabricConfig& cfg = g.config();
    banks_.resize(static_cast<std::size_t>(g.total_banks()));
    for (BankState& bank : banks_) {
        bank.subarrays.resize(static_cast<std::size_t>(cfg.subarrays_per_bank));
        for (SubarrayState& sa : bank.subarrays) {
            sa.shared_slot_state.assign(static_cast<std::size_t>(cfg.shared_rows_per_subarray),
                                        SlotState::Idle);
            sa.slot_busy_until_ns.assign(static_cast<std::size_t>(cfg.shared_rows_per_subarray),
                                         0.0);
        }
    }
}

std::variant<Grant, Conflict> FabricState::reserve(const ResourceClaim& claim, double at,
                                                   SlotAccess access) {
    std::optional<Conflict> worst;
    auto block = [&](ConflictKind kind, double until, const std::string& what) {
        if (!worst || until > worst->retry_at_ns) worst = Conflict{kind, until, what};
    };

    if (claim.uses_channel && time_lt(at, channel_busy_until_ns_))
        block(ConflictKind::BusBusy, channel_busy_until_ns_, "channel");
    for (const auto& [b, seg] : claim.busy_bus_segments) {
        const BankState& bank = banks_.at(static_cast<std::size_t>(b));
        if (time_lt(at, bank.bus_busy_until_ns))
            block(ConflictKind::BusBusy, bank.bus_busy_until_ns,
                  "bank" + std::to_string(b) + "/bus");
    }
    SlotState want = access == SlotAccess::Local ? SlotState::LocalActive
                                                 : SlotState::GlobalActive;
    for (const auto& [b, sa, slot] : claim.busy_shared_rows) {
        const SubarrayState& s = banks_.at(static_cast<std::size_t>(b))
                                     .subarrays.at(static_cast<std::size_t>(sa));
        double until = s.slot_busy_until_ns.at(static_cast<std::size_t>(slot));
        if (!time_lt(at, until)) continue;
        SlotState held = s.shared_slot_state.at(static_cast<std::size_t>(slot));
        std::string what = "bank" + std::to_string(b) + "/sa" + std::to_string(sa) + "/slot" +
                           std::to_string(slot);
        if (held != SlotState::Idle && held != want)
            block(ConflictKind::SharedRowDualAccess, until, what);
        else
            block(ConflictKind::BusBusy, until, what);
    }
    for (const auto& [b, sa] : claim.stalled_subarrays) {
        const SubarrayState& s = banks_.at(static_cast<std::size_t>(b))
                                     .subarrays.at(static_cast<std::size_t>(sa));
        if (time_lt(at, s.busy_until_ns))
            block(ConflictKind::SubarrayStalled, s.busy_until_ns,
                  "bank" + std::to_string(b) + "/sa" + std::to_string(sa));
    }
    if (worst) return *worst;

    Saved saved;
    saved.id = next_grant_++;
    saved.items.reserve(track_grants_
                            ? claim.stalled_subarrays.size() + claim.busy_bus_segments.size() +
                                  claim.busy_shared_rows.size() + (claim.uses_channel ? 1 : 0)
                            : 0);
    double until = at + claim.duration_ns;
    if (claim.uses_channel) {
        if (track_grants_)
            saved.items.push_back({Saved::Item::Channel, 0, 0, 0, channel_busy_until_ns_,
                                   SlotState::Idle, false});
        channel_busy_until_ns_ = until;
    }
    for (const auto& [b, seg] : claim.busy_bus_segments) {
        BankState& bank = banks_.at(static_cast<std::size_t>(b));
        if (time_lt(bank.bus_busy_until_ns, until)) {
            if (track_grants_)
                saved.items.push_back({Saved::Item::Bus, b, 0, 0, bank.bus_busy_until_ns,
                                       SlotState::Idle, false});
            bank.bus_busy_until_ns = until;
        }
    }
    for (const auto& [b, sa, slot] : claim.busy_shared_rows) {
        SubarrayState& s =
            banks_.at(static_cast<std::size_t>(b)).subarrays.at(static_cast<std::size_t>(sa));
        auto idx = static_cast<std::size_t>(slot);
        if (track_grants_)
            saved.items.push_back({Saved::Item::Slot, b, sa, slot, s.slot_busy_until_ns.at(idx),
                                   s.shared_slot_state.at(idx), s.active});
        s.slot_busy_until_ns.at(idx) = until;
        s.shared_slot_state.at(idx) = want;
    }
    for (const auto& [b, sa] : claim.stalled_subarrays) {
        SubarrayState& s =
            banks_.at(static_cast<std::size_t>(b)).subarrays.at(static_cast<std::size_t>(sa));
        if (track_grants_)
            saved.items.push_back({Saved::Item::Subarray, b, sa, 0, s.busy_until_ns,
                                   SlotState::Idle, s.active});
        s.busy_until_ns = until;
        s.active = true;
    }
    uint64_t id = saved.id;
    if (track_grants_) outstanding_.push_back(std::move(saved));
    return Grant{id};
}

void FabricState::release(const Grant& grant) {
    auto it = std::find_if(outstanding_.begin(), outstanding_.end(),
                           [&](const Saved& s) { return s.id == grant.id; });
    if (it == outstanding_.end())
        throw DoubleReleaseError("grant " + std::to_string(grant.id) +
                                 " is unknown or already released");
    for (auto item = it->items.rbegin(); item != it->items.rend(); ++item) {
        switch (item->kind) {
            case Saved::Item::Channel:
                channel_busy_until_ns_ = item->prior_busy;
                break;
            case Saved::Item::Bus:
                banks_.at(static_cast<std::size_t>(item->bank)).bus_busy_until_ns =
                    item->prior_busy;
                break;
            case Saved::Item::Slot: {
                SubarrayState& s = banks_.at(static_cast<std::size_t>(item->bank))
                                       .subarrays.at(static_cast<std::size_t>(item->subarray));
                s.slot_busy_until_ns.at(static_cast<std::size_t>(item->slot)) = item->prior_busy;
                s.shared_slot_state.at(static_cast<std::size_t>(item->slot)) = item->prior_state;
                break;
            }
            case Saved::Item::Subarray: {
                SubarrayState& s = banks_.at(static_cast<std::size_t>(item->bank))
                                       .subarrays.at(static_cast<std::size_t>(item->subarray));
                s.busy_until_ns = item->prior_busy;
                s.active = item->prior_active;
                break;
            }
        }
    }
    outstanding_.erase(it);
}

bool FabricState::quiescent(double at) const {
    if (time_lt(at, channel_busy_until_ns_)) return false;
    for (const BankState& bank : banks_) {
        if (time_lt(at, bank.bus_busy_until_ns)) return false;
        for (const SubarrayState& sa : bank.subarrays) {
            if (time_lt(at, sa.busy_until_ns)) return false;
            for (double slot : sa.slot_busy_until_ns)
                if (time_lt(at, slot)) return false;
        }
    }
    return true;
}

TrackingStorage tracking_storage(const Geometry& g) {
    int64_t bits = static_cast<int64_t>(g.total_subarrays()) * 11;
    return {bits, (bits + 7) / 8};
}

std::optional<std::pair<std::size_t, std::size_t>> audit_intervals(
    std::vector<AuditInterval> intervals) {
    std::vector<std::size_t> order(intervals.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const AuditInterval& x = intervals[a];
        const AuditInterval& y = intervals[b];
        if (x.resource != y.resource) return x.resource < y.resource;
        if (x.start_ns != y.start_ns) return x.start_ns < y.start_ns;
        return a < b;
    });
    for (std::size_t i = 1; i < order.size(); ++i) {
        const AuditInterval& prev = intervals[order[i - 1]];
        const AuditInterval& cur = intervals[order[i]];
        if (prev.resource == cur.resource && time_lt(cur.start_ns, prev.end_ns))
            return std::make_pair(order[i - 1], order[i]);
    }
    return std::nullopt;
}

}  // namespace sharedpim
