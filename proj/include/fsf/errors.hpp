#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fsf {

/// Invalid user-supplied configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (CLI exit code 3).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;

    DataError(const std::string& file, std::size_t line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_ = 0;
};

/// A structural invariant was violated (CLI exit code 4).
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace fsf
