#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace esampling {

/// Base class for all errors raised by the simulator.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scenario or argument violates a precondition. `key` names the
/// offending configuration key when one applies (empty otherwise).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what, std::string key = {})
        : Error(what), key_(std::move(key)) {}
    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Pass transistor gate overdrive is at or below threshold.
class CutoffError : public Error {
public:
    using Error::Error;
};

/// Storage capacitor did not settle within the allowed run length.
class NotConvergedError : public Error {
public:
    using Error::Error;
};

}  // namespace esampling
