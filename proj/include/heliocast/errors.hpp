#pragma once

#include <stdexcept>
#include <string>

namespace heliocast {

// Error taxonomy mirrored by the CLI exit codes: data problems (2),
// fit failures (3), timestamp alignment (4).

class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

class fit_error : public std::runtime_error {
public:
    explicit fit_error(const std::string& what) : std::runtime_error(what) {}
};

class alignment_error : public std::runtime_error {
public:
    explicit alignment_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace heliocast
