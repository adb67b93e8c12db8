// errors.hpp -- exception hierarchy shared by all simulator modules.
#pragma once

#include <stdexcept>
#include <string>

namespace qng {

/**
 * @brief Base class of all errors raised by the library.
 *
 * Every failure surfaced to callers derives from this type, so the CLI can
 * map the library failure modes onto stable process exit codes.
 */
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or inconsistent user-supplied configuration (bad ranges, unknown
/// keys, contradictory options).  CLI exit code 1.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// A numerical routine failed to reach its accuracy target (non-convergent
/// integrator, unphysical matrix, ill-conditioned solve).  CLI exit code 2.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& msg) : Error(msg) {}
};

/// Raised when a heralding probability vanishes, i.e. conditioning on a
/// detector click is requested but the click probability is numerically zero.
class NoClickSupport : public NumericalError {
public:
    explicit NoClickSupport(const std::string& msg) : NumericalError(msg) {}
};

/// Raised when a Fock-space truncation cannot hold the requested tail mass.
class TruncationError : public NumericalError {
public:
    explicit TruncationError(const std::string& msg) : NumericalError(msg) {}
};

/// Filesystem / serialization failure (unreadable config, unwritable output).
/// CLI exit code 3.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace qng
