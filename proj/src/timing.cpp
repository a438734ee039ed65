#include "sharedpim/timing.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

namespace sharedpim {

void validate_timing(const TimingParams& t) {
    if (t.t_ck_ns <= 0 || t.t_rcd_ns <= 0 || t.t_rp_ns <= 0 || t.t_ras_ns <= 0 ||
        t.t_rc_ns <= 0 || t.aap_offset_ns <= 0)
        throw ConfigError("timing parameters must be positive");
    if (!time_eq(t.t_rc_ns, t.t_ras_ns + t.t_rp_ns))
        throw ConfigError("t_rc must equal t_ras + t_rp");
}

namespace {

// One activation event: a set of wordlines raised at the same instant.
struct ActEvent {
    double at = 0.0;
    std::set<int> rows;
};

struct DomainState {
    std::vector<ActEvent> open;     // currently raised events, oldest first
    double last_first_act = -1e18;  // start of the previous activate window
};

using DomainKey = std::pair<int, int>;  // (bank, subarray) or (bank, -1) for bus

}  // namespace

std::optional<TimingViolation> check_sequence_legal(
    const std::vector<Command>& seq, const TimingParams& t) {
    validate_timing(t);

    std::vector<std::size_t> order(seq.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return time_lt(seq[a].issue_ns, seq[b].issue_ns);
    });

    std::map<DomainKey, DomainState> domains;
    for (std::size_t idx : order) {
        const Command& c = seq[idx];
        bool bus = c.on_bus || c.kind == CommandKind::GwlActivate;
        DomainKey key{c.bank, bus ? -1 : c.subarray};
        DomainState& d = domains[key];

        switch (c.kind) {
            case CommandKind::Activate:
            case CommandKind::GwlActivate: {
                // Merge with an event issued at the same instant (broadcast).
                ActEvent* same = nullptr;
                for (ActEvent& e : d.open)
                    if (time_eq(e.at, c.issue_ns)) same = &e;
                for (const ActEvent& e : d.open)
                    if (e.rows.count(c.row) && (!same || same != &e))
                        return TimingViolation{idx, TimingRule::DoubleActivate};
                if (same) {
                    if (same->rows.count(c.row))
                        return TimingViolation{idx, TimingRule::DoubleActivate};
                    same->rows.insert(c.row);
                    break;
                }
                if (d.open.size() >= 2)
                    return TimingViolation{idx, TimingRule::DoubleActivate};
                if (d.open.size() == 1) {
                    double gap = c.issue_ns - d.open.front().at;
                    if (time_lt(gap, t.aap_offset_ns))
                        return TimingViolation{idx, TimingRule::AapGapTooShort};
                } else {
                    if (c.issue_ns - d.last_first_act < t.t_rc_ns - kTimeEpsNs)
                        return TimingViolation{idx, TimingRule::ReactivateBeforeTrc};
                    d.last_first_act = c.issue_ns;
                }
                d.open.push_back(ActEvent{c.issue_ns, {c.row}});
                break;
            }
            case CommandKind::Precharge: {
                for (const ActEvent& e : d.open)
                    if (time_lt(c.issue_ns - e.at, t.t_ras_ns))
                        return TimingViolation{idx, TimingRule::PrechargeBeforeTras};
                d.open.clear();
                break;
            }
            case CommandKind::Rbm:
            case CommandKind::Read:
            case CommandKind::Write:
                break;  // column and buffer-movement commands carry no row rules
        }
    }
    return std::nullopt;
}

}  // namespace sharedpim
