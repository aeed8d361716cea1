#pragma once
#include <stdexcept>
#include <string>

namespace hcu {

// Invalid configuration or inconsistent shapes.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite state encountered during integration.
class IntegrationFault : public std::runtime_error {
public:
    IntegrationFault(int unit, int item, double time, const std::string& msg)
        : std::runtime_error(msg), unit(unit), item(item), time(time) {}
    int unit;
    int item;
    double time;
};

// Filesystem / serialization failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace hcu
