// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace bbsim {

struct InvalidInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidVelocityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidStateError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateGeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

//! Raised when the AD model meets a (NonBefore, NonBefore) pair under the
//! default policy.
struct UnsupportedConfigurationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyCountsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleConfigurationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidQueryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bbsim
