#pragma once

#include <stdexcept>
#include <string>

namespace sharedpim {

/// Base class for all simulator errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid fabric, timing, or mechanism configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Address component outside the configured geometry.
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

/// Reasons a copy request can be rejected before scheduling.
enum class TransferErrorKind {
    CrossBank,          ///< bank-local mechanism asked to cross banks
    CrossSubarray,      ///< subarray-local mechanism asked to cross subarrays
    UnstagedBroadcast,  ///< multi-destination request without staging
    BroadcastLimit,     ///< more destinations than the bus can raise at once
    BadRequest          ///< malformed request (empty dsts, duplicate rows, ...)
};

class TransferError : public Error {
public:
    TransferError(TransferErrorKind kind, const std::string& what)
        : Error(what), kind_(kind) {}
    TransferErrorKind kind() const { return kind_; }

private:
    TransferErrorKind kind_;
};

/// Release of a claim that is not currently granted.
class DoubleReleaseError : public Error {
public:
    using Error::Error;
};

/// Power calibration against a zero or negative latency.
class CalibrationError : public Error {
public:
    using Error::Error;
};

/// Area table missing a variant or inconsistent with its own totals.
class AreaError : public Error {
public:
    using Error::Error;
};

/// Config or data file rejected; carries the 1-based line number.
class FileParseError : public Error {
public:
    FileParseError(int line, const std::string& what)
        : Error(what), line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

/// Workload width or size the builders do not support.
class UnsupportedWidthError : public Error {
public:
    using Error::Error;
};

/// DAG needs more concurrent subarrays than the fabric provides.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// compare() across platforms with different fabric shapes.
class IncomparablePlatformsError : public Error {
public:
    using Error::Error;
};

}  // namespace sharedpim
