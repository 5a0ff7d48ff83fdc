#pragma once

#include <stdexcept>
#include <string>

namespace mfc {

// Malformed input shape (wrong dimensions, bad indices).
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Parameter outside its admissible domain.
class ParameterError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Bad configuration file, scenario or CLI request.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mfc
