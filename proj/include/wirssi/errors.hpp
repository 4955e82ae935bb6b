#pragma once

#include <stdexcept>
#include <string>

namespace wirssi {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Configuration file / parameter validation failure.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data (CSV, binary dumps, traces).
class DataError : public Error {
public:
    using Error::Error;
};

// geometry
class DegenerateGeometry : public Error {
public:
    using Error::Error;
};
class InvalidRange : public Error {
public:
    using Error::Error;
};
class CoincidentPoint : public Error {
public:
    using Error::Error;
};

// preprocess
class ZeroStaticPower : public Error {
public:
    using Error::Error;
};

// ranging
class BelowMagnitudeFloor : public Error {
public:
    using Error::Error;
};
class RangeNotBistatic : public Error {
public:
    using Error::Error;
};
class EmptyCalibration : public Error {
public:
    using Error::Error;
};

// smoothing / tracking
class SeriesTooShort : public Error {
public:
    using Error::Error;
};
class NoTemporalOverlap : public Error {
public:
    using Error::Error;
};

// features
class AxisMismatch : public Error {
public:
    using Error::Error;
};

// simulator
class BoundViolation : public Error {
public:
    using Error::Error;
};

// pipeline
class InsufficientDetections : public Error {
public:
    using Error::Error;
};

}  // namespace wirssi
