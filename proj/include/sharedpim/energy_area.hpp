#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "sharedpim/transfer.hpp"

namespace sharedpim {

/// Measured copy latency/energy pairs the power model calibrates against.
struct CopyTargets {
    double memcpy_latency_ns = 1366.25;
    double memcpy_energy_uj = 6.2;
    double rc_inter_latency_ns = 1363.75;
    double rc_inter_energy_uj = 4.33;
    double lisa_latency_ns = 260.5;
    double lisa_energy_uj = 0.17;
    double bus_latency_ns = 52.75;
    double bus_energy_uj = 0.14;
};

/// Average power drawn during each copy mechanism's window, in watts.
/// The bus copy drives every bank-level sense-amplifier row, so its power
/// sits near sa_rows_active_bus times the local-copy power.
struct PowerModel {
    double p_local_copy_w = 0.17 / 260.5 * 1e3;
    double p_bus_copy_w = 0.14 / 52.75 * 1e3;
    double p_memcpy_w = 6.2 / 1366.25 * 1e3;
    double p_rc_inter_w = 4.33 / 1363.75 * 1e3;
    int sa_rows_active_bus = 4;

    double bus_to_local_ratio() const { return p_bus_copy_w / p_local_copy_w; }
};

/// Power drawn by one mechanism under this model.
double mechanism_power_w(Mechanism mech, const PowerModel& pm);

/// Energy of one copy window: power(mech) x duration.
double copy_energy(Mechanism mech, double duration_ns, const PowerModel& pm);

/// Derives per-mechanism powers from target latency/energy pairs.
/// Throws CalibrationError when any target latency is not positive.
PowerModel calibrate_power(const CopyTargets& targets);

/// Chip variants of the area breakdown.
enum class AreaVariant { BaseDram, PlutoBsa, PlutoSharedPim };

constexpr std::array<AreaVariant, 3> kAreaVariants{AreaVariant::BaseDram, AreaVariant::PlutoBsa,
                                                   AreaVariant::PlutoSharedPim};
const char* area_variant_name(AreaVariant v);

/// Component areas per variant, loaded from a `component,variant,mm2` CSV.
/// A row whose component is "total" records the published total for its
/// variant; all other rows are summed per variant.
class AreaTable {
  public:
    static AreaTable load_csv(const std::string& path);
    static AreaTable from_rows(
        const std::vector<std::tuple<std::string, AreaVariant, double>>& rows);

    /// Sum of the component rows of one variant.
    double component_sum(AreaVariant v) const;
    /// Published total when present, component sum otherwise.
    double total(AreaVariant v) const;
    bool has_component(const std::string& name, AreaVariant v) const;
    double component(const std::string& name, AreaVariant v) const;
    const std::map<std::string, std::array<double, 3>>& components() const { return components_; }

  private:
    std::map<std::string, std::array<double, 3>> components_;  ///< missing cells are NaN
    std::array<double, 3> published_totals_;                   ///< NaN when no total row
};

/// Totals per variant plus the overhead of the shared-row design over the
/// in-DRAM LUT baseline.
struct AreaReport {
    std::array<double, 3> totals_mm2;
    std::array<double, 3> component_sums_mm2;
    double overhead_percent;
};

/// Builds the report. Throws AreaError when a variant has no rows or when a
/// published total strays more than 0.01 mm2 from its component sum.
AreaReport area_report(const AreaTable& tbl);

}  // namespace sharedpim
