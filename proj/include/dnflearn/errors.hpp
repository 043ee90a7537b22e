#pragma once

#include <stdexcept>
#include <string>

namespace dnflearn {

// Malformed or inconsistent input (dimension mismatch, bad literal, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configuration that cannot be honoured (dimension over the exhaustive cap, oracle
// infeasible for the instance size, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dnflearn
