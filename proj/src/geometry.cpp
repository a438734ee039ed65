#include "sharedpim/geometry.hpp"

#include <string>

namespace sharedpim {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

Geometry::Geometry(const FabricConfig& cfg) : cfg_(cfg) {
    require(cfg.channels > 0, "channels must be positive");
    require(cfg.ranks > 0, "ranks must be positive");
    require(cfg.chips_per_rank > 0, "chips_per_rank must be positive");
    require(cfg.banks_per_chip > 0, "banks_per_chip must be positive");
    require(cfg.subarrays_per_bank > 0, "subarrays_per_bank must be positive");
    require(cfg.rows_per_subarray > 0, "rows_per_subarray must be positive");
    require(cfg.row_size_bytes > 0, "row_size_bytes must be positive");
    require(cfg.shared_rows_per_subarray >= 0,
            "shared_rows_per_subarray must be non-negative");
    require(cfg.shared_rows_per_subarray < cfg.rows_per_subarray,
            "shared rows cannot fill the whole subarray");
    require(cfg.bus_segments_per_bank > 0, "bus_segments_per_bank must be positive");
    require(cfg.bus_segments_per_bank <= cfg.subarrays_per_bank,
            "more bus segments than subarrays");
    total_banks_ = cfg.channels * cfg.ranks * cfg.chips_per_rank * cfg.banks_per_chip;
}

std::int64_t Geometry::encode(const RowAddress& a) const {
    check_address(a);
    std::int64_t flat = a.bank;
    flat = flat * cfg_.subarrays_per_bank + a.subarray;
    flat = flat * cfg_.rows_per_subarray + a.row;
    return flat;
}

RowAddress Geometry::decode(std::int64_t flat) const {
    if (flat < 0 || flat >= total_rows())
        throw OutOfRangeError("flat row index " + std::to_string(flat) +
                              " outside fabric of " + std::to_string(total_rows()) +
                              " rows");
    RowAddress a;
    a.row = static_cast<int>(flat % cfg_.rows_per_subarray);
    flat /= cfg_.rows_per_subarray;
    a.subarray = static_cast<int>(flat % cfg_.subarrays_per_bank);
    a.bank = static_cast<int>(flat / cfg_.subarrays_per_bank);
    a.kind = shared_slot_of_row(a.row) >= 0 ? RowKind::SharedLocal : RowKind::Regular;
    return a;
}

int Geometry::subarray_distance(const RowAddress& a, const RowAddress& b) const {
    check_address(a);
    check_address(b);
    if (a.bank != b.bank)
        throw OutOfRangeError("subarray distance is defined within one bank");
    int d = a.subarray - b.subarray;
    return d < 0 ? -d : d;
}

int Geometry::segment_of_subarray(int subarray) const {
    if (subarray < 0 || subarray >= cfg_.subarrays_per_bank)
        throw OutOfRangeError("subarray index outside bank");
    int per = cfg_.subarrays_per_bank / cfg_.bus_segments_per_bank;
    int seg = subarray / per;
    if (seg >= cfg_.bus_segments_per_bank) seg = cfg_.bus_segments_per_bank - 1;
    return seg;
}

int Geometry::shared_slot_of_row(int row) const {
    if (row < 0 || row >= cfg_.rows_per_subarray)
        throw OutOfRangeError("row index outside subarray");
    int first = first_shared_row();
    return row >= first ? row - first : -1;
}

RowAddress Geometry::shared_row(int bank, int subarray, int slot, RowKind kind) const {
    if (slot < 0 || slot >= cfg_.shared_rows_per_subarray)
        throw OutOfRangeError("shared slot index outside subarray");
    RowAddress a{bank, subarray, first_shared_row() + slot, kind};
    check_address(a);
    return a;
}

void Geometry::check_address(const RowAddress& a) const {
    if (a.bank < 0 || a.bank >= total_banks_)
        throw OutOfRangeError("bank index " + std::to_string(a.bank) + " outside fabric");
    if (a.subarray < 0 || a.subarray >= cfg_.subarrays_per_bank)
        throw OutOfRangeError("subarray index " + std::to_string(a.subarray) +
                              " outside bank");
    if (a.row < 0 || a.row >= cfg_.rows_per_subarray)
        throw OutOfRangeError("row index " + std::to_string(a.row) + " outside subarray");
    if (a.kind != RowKind::Regular && shared_slot_of_row(a.row) < 0)
        throw OutOfRangeError("row " + std::to_string(a.row) +
                              " is not a shared row but was addressed as one");
}

Geometry validate_config(const FabricConfig& cfg) { return Geometry(cfg); }

}  // namespace sharedpim
