#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace edgesnn {

// Configuration problems; the CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ValidationError : public ConfigError {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class InsufficientData : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Kernel bugs; the CLI maps these to exit code 3.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class SchedulingInPast : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class OrderViolation : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class StaleTrace : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IncomparableRuns : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace edgesnn
