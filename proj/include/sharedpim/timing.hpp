#pragma once

#include <optional>
#include <vector>

#include "sharedpim/common.hpp"
#include "sharedpim/errors.hpp"

namespace sharedpim {

/// DRAM timing parameters in nanoseconds.
///
/// Invariant: t_rc_ns = t_ras_ns + t_rp_ns.  The extra aap_offset_ns is the
/// delay between the two overlapped ACTIVATEs of an activate-activate-
/// precharge (AAP) row copy.
struct TimingParams {
    double t_ck_ns = 1.25;
    double t_rcd_ns = 13.75;
    double t_rp_ns = 13.75;
    double t_ras_ns = 35.0;
    double t_rc_ns = 48.75;
    double aap_offset_ns = 4.0;

    bool operator==(const TimingParams&) const = default;
};

namespace timing_presets {

/// DDR3-1600 at the 11-11-11 grade.
inline TimingParams ddr3_1600_11() {
    TimingParams t;
    t.t_ck_ns = 1.25;
    t.t_rcd_ns = 11 * 1.25;   // 13.75
    t.t_rp_ns = 11 * 1.25;    // 13.75
    t.t_ras_ns = 35.0;
    t.t_rc_ns = t.t_ras_ns + t.t_rp_ns;  // 48.75
    t.aap_offset_ns = 4.0;
    return t;
}

/// DDR4-2400T at the 17-17-17 grade.
inline TimingParams ddr4_2400t_17() {
    TimingParams t;
    t.t_ck_ns = 0.833;
    t.t_rcd_ns = 14.17;
    t.t_rp_ns = 14.17;
    t.t_ras_ns = 32.0;
    t.t_rc_ns = t.t_ras_ns + t.t_rp_ns;  // 46.17
    t.aap_offset_ns = 4.0;
    return t;
}

}  // namespace timing_presets

/// Throws ConfigError unless all parameters are positive and
/// t_rc = t_ras + t_rp holds within tolerance.
void validate_timing(const TimingParams& t);

/// Latency of one AAP row copy: the second ACTIVATE overlaps the first after
/// aap_offset, the row pair stays open for t_ras, then the precharge takes
/// t_rp.  DDR3-1600: 4 + 35 + 13.75 = 52.75 ns.
inline double aap_latency(const TimingParams& t) {
    return t.aap_offset_ns + t.t_ras_ns + t.t_rp_ns;
}

/// DRAM command stream element.  Local commands target (bank, subarray);
/// bus-level commands (global wordline activates and their precharge) set
/// on_bus and share one timing domain per bank.  Rbm is the row-buffer
/// movement step between two adjacent subarrays.
enum class CommandKind : std::uint8_t {
    Activate,
    Precharge,
    GwlActivate,
    Rbm,
    Read,
    Write,
};

struct Command {
    CommandKind kind = CommandKind::Activate;
    double issue_ns = 0.0;
    int bank = 0;
    int subarray = 0;
    int row = 0;
    int subarray2 = -1;  ///< Rbm only: the neighbouring subarray
    bool on_bus = false;
};

/// Timing rules a command sequence can violate.
enum class TimingRule : std::uint8_t {
    DoubleActivate,       ///< third activation event, or re-raising an open row
    PrechargeBeforeTras,  ///< precharge earlier than t_ras after an activate
    ReactivateBeforeTrc,  ///< activate earlier than t_rc after the previous one
    AapGapTooShort,       ///< overlapped activate pair closer than aap_offset
};

struct TimingViolation {
    std::size_t command_index = 0;
    TimingRule rule = TimingRule::DoubleActivate;
};

/// Checks a command sequence against the activate/precharge rules.  Commands
/// are grouped per timing domain: (bank, subarray) for local commands and
/// (bank, bus) for GwlActivate and on_bus precharges.  Activates issued at
/// the same instant in one domain count as one activation event, which is
/// how a broadcast raises several destination wordlines at once.  Returns
/// the first violation in issue order, or nullopt.
std::optional<TimingViolation> check_sequence_legal(
    const std::vector<Command>& seq, const TimingParams& t);

}  // namespace sharedpim
