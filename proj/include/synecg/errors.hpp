#pragma once

#include <stdexcept>

namespace synecg {

// Invalid ranges, inconsistent geometry or preconditions violated by user input.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// File system and codec failures. Messages carry the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace synecg
