#include "sharedpim/config.hpp"

#include <fstream>
#include <sstream>

#include "sharedpim/errors.hpp"

namespace sharedpim {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

int parse_positive_int(const std::string& value, const std::string& key, int line) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(value, &used);
    } catch (const std::exception&) {
        throw FileParseError(line, "line " + std::to_string(line) + ": '" + value +
                                       "' is not an integer for " + key);
    }
    if (used != value.size())
        throw FileParseError(line, "line " + std::to_string(line) + ": trailing text after " +
                                       key + " value");
    if (v <= 0)
        throw ConfigError("line " + std::to_string(line) + ": " + key + " must be positive, got " +
                          value);
    return v;
}

double parse_positive_double(const std::string& value, const std::string& key, int line) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw FileParseError(line, "line " + std::to_string(line) + ": '" + value +
                                       "' is not a number for " + key);
    }
    if (used != value.size())
        throw FileParseError(line, "line " + std::to_string(line) + ": trailing text after " +
                                       key + " value");
    if (v <= 0)
        throw ConfigError("line " + std::to_string(line) + ": " + key + " must be positive, got " +
                          value);
    return v;
}

}  // namespace

void apply_config_line(SimConfig& cfg, const std::string& key, const std::string& value,
                       int line) {
    auto pint = [&] { return parse_positive_int(value, key, line); };
    auto pdouble = [&] { return parse_positive_double(value, key, line); };

    if (key == "channels") cfg.fabric.channels = pint();
    else if (key == "ranks") cfg.fabric.ranks = pint();
    else if (key == "chips_per_rank") cfg.fabric.chips_per_rank = pint();
    else if (key == "banks_per_chip") cfg.fabric.banks_per_chip = pint();
    else if (key == "subarrays_per_bank") cfg.fabric.subarrays_per_bank = pint();
    else if (key == "rows_per_subarray") cfg.fabric.rows_per_subarray = pint();
    else if (key == "row_size_bytes") cfg.fabric.row_size_bytes = pint();
    else if (key == "shared_rows_per_subarray") cfg.fabric.shared_rows_per_subarray = pint();
    else if (key == "bus_segments_per_bank") cfg.fabric.bus_segments_per_bank = pint();
    else if (key == "timing_grade") {
        if (value == "ddr3_1600_11") {
            cfg.fabric.grade = TimingGrade::Ddr3_1600_11;
            cfg.timing = timing_presets::ddr3_1600_11();
        } else if (value == "ddr4_2400t_17") {
            cfg.fabric.grade = TimingGrade::Ddr4_2400T_17;
            cfg.timing = timing_presets::ddr4_2400t_17();
        } else {
            throw FileParseError(line, "line " + std::to_string(line) +
                                           ": unknown timing grade '" + value + "'");
        }
    }
    else if (key == "t_ck_ns") cfg.timing.t_ck_ns = pdouble();
    else if (key == "t_rcd_ns") cfg.timing.t_rcd_ns = pdouble();
    else if (key == "t_rp_ns") cfg.timing.t_rp_ns = pdouble();
    else if (key == "t_ras_ns") cfg.timing.t_ras_ns = pdouble();
    else if (key == "t_rc_ns") cfg.timing.t_rc_ns = pdouble();
    else if (key == "aap_offset_ns") cfg.timing.aap_offset_ns = pdouble();
    else if (key == "memcpy_ns") cfg.mech.memcpy_ns = pdouble();
    else if (key == "rc_inter_ns") cfg.mech.rc_inter_ns = pdouble();
    else if (key == "lisa_base_ns") cfg.mech.lisa_base_ns = pdouble();
    else if (key == "lisa_extra_hop_ns") cfg.mech.lisa_extra_hop_ns = pdouble();
    else if (key == "p_local_copy_w") cfg.power.p_local_copy_w = pdouble();
    else if (key == "p_bus_copy_w") cfg.power.p_bus_copy_w = pdouble();
    else if (key == "p_memcpy_w") cfg.power.p_memcpy_w = pdouble();
    else if (key == "p_rc_inter_w") cfg.power.p_rc_inter_w = pdouble();
    else if (key == "sa_rows_active_bus") cfg.power.sa_rows_active_bus = pint();
    else if (key == "plut_op_4bit_ns") cfg.compute.plut_op_4bit_ns = pdouble();
    else if (key == "row_op_ns") cfg.compute.row_op_ns = pdouble();
    else
        throw FileParseError(line,
                             "line " + std::to_string(line) + ": unknown key '" + key + "'");
}

SimConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileParseError(0, "cannot open config file '" + path + "'");
    SimConfig cfg;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string text = trim(raw);
        if (text.empty()) continue;
        auto eq = text.find('=');
        if (eq == std::string::npos)
            throw FileParseError(line, "line " + std::to_string(line) +
                                           ": expected 'key = value', got '" + text + "'");
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty())
            throw FileParseError(line, "line " + std::to_string(line) +
                                           ": expected 'key = value', got '" + text + "'");
        apply_config_line(cfg, key, value, line);
    }
    validate_config(cfg.fabric);
    validate_timing(cfg.timing);
    return cfg;
}

}  // namespace sharedpim
