#pragma once

#include <string>

#include "sharedpim/scheduler.hpp"

namespace sharedpim {

/// Every tunable the simulator reads from one config file.
struct SimConfig {
    FabricConfig fabric;
    TimingParams timing;
    MechanismParams mech;
    PowerModel power;
    ComputeParams compute;
};

/// Parses a line-oriented `key = value` file. '#' starts a comment; blank
/// lines are ignored; unknown keys and malformed values are rejected with
/// their line number. `timing_grade = ddr3_1600_11 | ddr4_2400t_17` resets
/// the timing block to that preset, so put it before individual overrides.
/// Omitted keys keep the reference-configuration defaults.
SimConfig parse_config(const std::string& path);

/// Applies one `key = value` assignment; shared by file parsing and tests.
/// `line` is used only for error messages.
void apply_config_line(SimConfig& cfg, const std::string& key, const std::string& value,
                       int line);

}  // namespace sharedpim
