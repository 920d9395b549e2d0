#pragma once

#include <stdexcept>
#include <string>

namespace fxpf {

/// Input violates a documented precondition (shape, finiteness, range).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A model configuration that cannot be estimated (e.g. AR order too large
/// for the number of channels).
class ConfigurationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The regularized normal equations have no unique solution.
class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read, written, or parsed as the expected format.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fxpf
