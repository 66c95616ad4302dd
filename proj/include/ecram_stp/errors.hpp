#pragma once

#include <stdexcept>
#include <string>

namespace ecram_stp {

/// Precondition violation on a model operation (bad state index, negative dt, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical guard tripped (time step too coarse for the fastest time constant).
/// The CLI maps this to exit code 3.
class NumericalGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ecram_stp
