/**
 * @file errors.hpp
 * @brief Exception types shared by the focsim library and CLI.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace focsim {

/**
 * A numeric-domain failure: the requested quantity is undefined for the
 * given inputs (fringe null, retardation singularity, degenerate vector).
 * `parameter()` names the offending input so callers can report it.
 */
class DomainError : public std::domain_error {
public:
    DomainError(std::string parameter, const std::string& what)
        : std::domain_error(what), parameter_(std::move(parameter)) {}

    [[nodiscard]] const std::string& parameter() const noexcept { return parameter_; }

private:
    std::string parameter_;
};

/// Malformed or inconsistent configuration. `location()` is "line N" or a key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string location, const std::string& what)
        : std::runtime_error(location.empty() ? what : location + ": " + what),
          location_(std::move(location)) {}

    [[nodiscard]] const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

} // namespace focsim
