#pragma once

#include <stdexcept>
#include <string>

namespace nilcorr {

// Requested computation does not fit the configured memory/size limits.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Two independent computation paths that must agree did not.  Carries the
// name of the failing identity; the CLI maps this to exit code 4.
struct consistency_error : std::runtime_error {
    std::string identity;
    consistency_error(std::string identity_, const std::string& msg)
        : std::runtime_error(msg), identity(std::move(identity_)) {}
};

}  // namespace nilcorr
