#pragma once

#include <stdexcept>

namespace qcs {

// Arguments outside an operation's domain (bad index, malformed result map).
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Invalid protocol parameters or scenario files.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A computation produced a value it cannot stand behind (NaN, empty fit).
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace qcs
