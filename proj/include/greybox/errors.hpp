#pragma once

#include <stdexcept>
#include <string>

namespace greybox {

// Error taxonomy mirrored by the CLI exit codes (1/2/3/4).

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class NoFeasibleStartError : public std::runtime_error {
public:
    explicit NoFeasibleStartError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace greybox
