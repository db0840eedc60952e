#pragma once

#include <stdexcept>
#include <string>

namespace forumnet {

/// Unreadable input or malformed schema. Maps to CLI exit code 1.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Header does not match the expected column layout.
class SchemaError : public InputError {
public:
  using InputError::InputError;
};

/// Invalid or infeasible configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operation called with arguments that violate its contract.
class UsageError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace forumnet
