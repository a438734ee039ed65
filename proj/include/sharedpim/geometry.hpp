#pragma once

#include <cstdint>
#include <string>

#include "sharedpim/errors.hpp"

namespace sharedpim {

/// Named timing grade a fabric is built for; the numeric parameters live in
/// TimingParams presets of the same name.
enum class TimingGrade {
    Ddr3_1600_11,
    Ddr4_2400T_17,
};

/// Static shape of the DRAM fabric.
///
/// Defaults describe the reference configuration: one channel, one rank,
/// four chips of four banks, 16 subarrays per bank (256 subarrays in all),
/// 512 rows of 8 KB per subarray, two shared rows per subarray, and a
/// bank-level bus split into four segments that arbitrate as one structure.
struct FabricConfig {
    int channels = 1;
    int ranks = 1;
    int chips_per_rank = 4;
    int banks_per_chip = 4;
    int subarrays_per_bank = 16;
    int rows_per_subarray = 512;
    int row_size_bytes = 8192;
    int shared_rows_per_subarray = 2;
    int bus_segments_per_bank = 4;
    TimingGrade grade = TimingGrade::Ddr3_1600_11;

    bool operator==(const FabricConfig&) const = default;
};

/// How a row is being addressed.  Shared rows answer to two addresses: the
/// subarray-local wordline and the bank-level global wordline.  Both resolve
/// to the same storage; the kind records which path a request takes.
enum class RowKind : std::uint8_t {
    Regular,
    SharedLocal,
    SharedGlobal,
};

/// Fully decoded row address.  `bank` is the flat bank index across the
/// whole fabric; `subarray` and `row` are local to that bank and subarray.
struct RowAddress {
    int bank = 0;
    int subarray = 0;
    int row = 0;
    RowKind kind = RowKind::Regular;

    bool operator==(const RowAddress&) const = default;
};

/// Validated geometry with address arithmetic.
class Geometry {
public:
    /// Checks every count is positive and mutually consistent; throws
    /// ConfigError otherwise.
    explicit Geometry(const FabricConfig& cfg);

    const FabricConfig& config() const { return cfg_; }

    int total_banks() const { return total_banks_; }
    int total_subarrays() const { return total_banks_ * cfg_.subarrays_per_bank; }
    std::int64_t total_rows() const {
        return static_cast<std::int64_t>(total_subarrays()) * cfg_.rows_per_subarray;
    }
    int shared_rows_total() const {
        return total_subarrays() * cfg_.shared_rows_per_subarray;
    }

    /// Flat row index <-> structured address.  The flat order is
    /// (bank, subarray, row), row fastest.  Decoding a shared row yields
    /// RowKind::SharedLocal; the global-wordline alias of the same storage
    /// maps to the same flat index, so encode() ignores the kind.
    std::int64_t encode(const RowAddress& a) const;
    RowAddress decode(std::int64_t flat) const;

    /// Subarray distance used by hop-based transfer costs.  Both addresses
    /// must sit in the same bank.
    int subarray_distance(const RowAddress& a, const RowAddress& b) const;

    /// Bus segment that serves a subarray.  Subarrays are split into
    /// contiguous runs of subarrays_per_bank / bus_segments_per_bank; a
    /// remainder extends the last segment.
    int segment_of_subarray(int subarray) const;

    /// Shared rows occupy the highest row indices of every subarray.
    /// Returns the slot index in [0, shared_rows_per_subarray) or -1.
    int shared_slot_of_row(int row) const;
    int first_shared_row() const {
        return cfg_.rows_per_subarray - cfg_.shared_rows_per_subarray;
    }

    /// Address helpers for the shared rows of a subarray.
    RowAddress shared_row(int bank, int subarray, int slot, RowKind kind) const;

    void check_address(const RowAddress& a) const;

private:
    FabricConfig cfg_;
    int total_banks_ = 0;
};

/// Convenience wrapper matching the one-call contract: validate and build.
Geometry validate_config(const FabricConfig& cfg);

}  // namespace sharedpim
