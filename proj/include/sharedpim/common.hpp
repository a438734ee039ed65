#pragma once

#include <cmath>
#include <cstdint>

namespace sharedpim {

/// All times are double nanoseconds; comparisons use an absolute tolerance.
inline constexpr double kTimeEpsNs = 1e-9;

inline bool time_eq(double a, double b) { return std::fabs(a - b) <= kTimeEpsNs; }
inline bool time_lt(double a, double b) { return a < b - kTimeEpsNs; }
inline bool time_le(double a, double b) { return a <= b + kTimeEpsNs; }

/// Energy bookkeeping: watts times nanoseconds, reported in microjoules.
inline double watts_times_ns_to_uj(double watts, double ns) {
    return watts * ns * 1e-3;
}

}  // namespace sharedpim
