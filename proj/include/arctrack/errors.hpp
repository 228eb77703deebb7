#pragma once

#include <stdexcept>
#include <string>

namespace arctrack {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -------- numerical / geometric failures (CLI exit code 4) --------

/// Curvature center closer to the state than the 1e-6 m guard; the turn
/// dynamics divide by that distance.
struct DegenerateRadius : Error {
    using Error::Error;
};

/// All window increments below the 1e-9 m floor, or the increment pairs
/// carry no usable rotation information.
struct DegenerateIncrements : Error {
    using Error::Error;
};

struct SingularInnovation : Error {
    using Error::Error;
};

struct InsufficientData : Error {
    using Error::Error;
};

struct NotInitialized : Error {
    using Error::Error;
};

struct NonMonotoneTime : Error {
    using Error::Error;
};

/// Observation spacing deviates from the mean interval by more than 1%;
/// the constant-turn recurrence assumes a single per-step angle.
struct NonUniformSampling : Error {
    using Error::Error;
};

struct BadCovariance : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct AlignmentError : Error {
    using Error::Error;
};

// -------- configuration problems (CLI exit code 2) --------

struct ConfigError : Error {
    using Error::Error;
};

// -------- file I/O and parsing (CLI exit code 3) --------

struct IoError : Error {
    using Error::Error;
};

/// Malformed file content; the message carries the path and line number.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace arctrack
