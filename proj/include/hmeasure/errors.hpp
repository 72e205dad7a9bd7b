#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmeasure {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed input data (CSV shape, non-finite values, out-of-range scores).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    /// 1-based line number in the source file, 0 when not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid or inconsistent evaluation configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Data that cannot support the requested metric, e.g. only one class present.
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hmeasure
