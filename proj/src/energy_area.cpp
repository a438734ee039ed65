#include "sharedpim/energy_area.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sharedpim/common.hpp"
#include "sharedpim/errors.hpp"

namespace sharedpim {

double mechanism_power_w(Mechanism mech, const PowerModel& pm) {
    switch (mech) {
        case Mechanism::MemcpyChannel: return pm.p_memcpy_w;
        case Mechanism::RowcloneInterSA: return pm.p_rc_inter_w;
        case Mechanism::RowcloneIntraSA:
        case Mechanism::LisaRisc: return pm.p_local_copy_w;
        case Mechanism::SharedPimBus: return pm.p_bus_copy_w;
    }
    return pm.p_local_copy_w;
}

double copy_energy(Mechanism mech, double duration_ns, const PowerModel& pm) {
    return watts_times_ns_to_uj(mechanism_power_w(mech, pm), duration_ns);
}

PowerModel calibrate_power(const CopyTargets& t) {
    if (t.memcpy_latency_ns <= 0 || t.rc_inter_latency_ns <= 0 || t.lisa_latency_ns <= 0 ||
        t.bus_latency_ns <= 0)
        throw CalibrationError("calibration targets need positive latencies");
    PowerModel pm;
    pm.p_memcpy_w = t.memcpy_energy_uj / t.memcpy_latency_ns * 1e3;
    pm.p_rc_inter_w = t.rc_inter_energy_uj / t.rc_inter_latency_ns * 1e3;
    pm.p_local_copy_w = t.lisa_energy_uj / t.lisa_latency_ns * 1e3;
    pm.p_bus_copy_w = t.bus_energy_uj / t.bus_latency_ns * 1e3;
    return pm;
}

const char* area_variant_name(AreaVariant v) {
    switch (v) {
        case AreaVariant::BaseDram: return "base_dram";
        case AreaVariant::PlutoBsa: return "pluto_bsa";
        case AreaVariant::PlutoSharedPim: return "pluto_shared_pim";
    }
    return "unknown";
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

AreaVariant parse_variant(const std::string& s, std::size_t line) {
    for (AreaVariant v : kAreaVariants)
        if (s == area_variant_name(v)) return v;
    throw FileParseError(line, "unknown area variant '" + s + "'");
}

}  // namespace

AreaTable AreaTable::from_rows(
    const std::vector<std::tuple<std::string, AreaVariant, double>>& rows) {
    AreaTable tbl;
    tbl.published_totals_ = {kNan, kNan, kNan};
    for (const auto& [name, variant, mm2] : rows) {
        auto vi = static_cast<std::size_t>(variant);
        if (name == "total") {
            tbl.published_totals_[vi] = mm2;
            continue;
        }
        auto [it, inserted] = tbl.components_.try_emplace(name,
                                                          std::array<double, 3>{kNan, kNan, kNan});
        it->second[vi] = mm2;
    }
    return tbl;
}

AreaTable AreaTable::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileParseError(0, "cannot open area table '" + path + "'");
    std::vector<std::tuple<std::string, AreaVariant, double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (lineno == 1 && line.rfind("component,", 0) == 0) continue;  // header
        std::istringstream ss(line);
        std::string name, variant, mm2;
        if (!std::getline(ss, name, ',') || !std::getline(ss, variant, ',') ||
            !std::getline(ss, mm2))
            throw FileParseError(lineno, "expected component,variant,mm2");
        try {
            rows.emplace_back(name, parse_variant(variant, lineno), std::stod(mm2));
        } catch (const std::invalid_argument&) {
            throw FileParseError(lineno, "bad area value '" + mm2 + "'");
        }
    }
    return from_rows(rows);
}

bool AreaTable::has_component(const std::string& name, AreaVariant v) const {
    auto it = components_.find(name);
    return it != components_.end() && !std::isnan(it->second[static_cast<std::size_t>(v)]);
}

double AreaTable::component(const std::string& name, AreaVariant v) const {
    auto it = components_.find(name);
    if (it == components_.end() || std::isnan(it->second[static_cast<std::size_t>(v)]))
        throw AreaError("missing area component '" + name + "' for " +
                        area_variant_name(v));
    return it->second[static_cast<std::size_t>(v)];
}

double AreaTable::component_sum(AreaVariant v) const {
    double sum = 0.0;
    bool any = false;
    for (const auto& [name, areas] : components_) {
        double a = areas[static_cast<std::size_t>(v)];
        if (!std::isnan(a)) {
            sum += a;
            any = true;
        }
    }
    if (!any) throw AreaError(std::string("area table has no rows for ") + area_variant_name(v));
    return sum;
}

double AreaTable::total(AreaVariant v) const {
    double published = published_totals_[static_cast<std::size_t>(v)];
    return std::isnan(published) ? component_sum(v) : published;
}

AreaReport area_report(const AreaTable& tbl) {
    AreaReport report{};
    for (AreaVariant v : kAreaVariants) {
        auto vi = static_cast<std::size_t>(v);
        report.component_sums_mm2[vi] = tbl.component_sum(v);
        report.totals_mm2[vi] = tbl.total(v);
        if (std::abs(report.totals_mm2[vi] - report.component_sums_mm2[vi]) > 0.01 + 1e-12)
            throw AreaError(std::string("published total for ") + area_variant_name(v) +
                            " strays from its component sum");
    }
    double base = report.totals_mm2[static_cast<std::size_t>(AreaVariant::PlutoBsa)];
    double ours = report.totals_mm2[static_cast<std::size_t>(AreaVariant::PlutoSharedPim)];
    if (base <= 0) throw AreaError("baseline total must be positive");
    report.overhead_percent = (ours / base - 1.0) * 100.0;
    return report;
}

}  // namespace sharedpim
