#pragma once

#include <stdexcept>
#include <string>

namespace fmmw {

/// Argument outside the domain of a geometric or channel primitive.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature exhausted its subdivision budget above tolerance.
class NonConvergence : public std::runtime_error {
public:
  NonConvergence(const std::string& what, int level = 0, double error_estimate = 0.0)
      : std::runtime_error(what), level_(level), error_estimate_(error_estimate) {}

  /// Nesting depth that failed; 0 is the outermost integral.
  int level() const noexcept { return level_; }
  double error_estimate() const noexcept { return error_estimate_; }

private:
  int level_;
  double error_estimate_;
};

/// A tier's association probability underflowed, so its conditional law is undefined.
class ZeroAssociation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fmmw
