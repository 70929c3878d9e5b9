#pragma once

#include <stdexcept>
#include <string>

namespace wlab {

struct BadExponent : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NegativeLevel : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct MissingInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UncertifiedFamily : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateFamily : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wlab
