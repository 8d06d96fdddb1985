#pragma once

#include <stdexcept>
#include <string>

namespace qgb {

// Exit-code mapping lives in the CLI: config -> 2, numerical -> 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct RangeError : std::range_error {
    using std::range_error::range_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qgb
