#pragma once

#include <stdexcept>
#include <string>

namespace nsv {

/// Invalid or inconsistent configuration (grid mismatch, bad parameters).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument outside the domain of an operation (e.g. theta outside [-h, 0]).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A run artifact is too short for the requested post-processing.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or exploding coefficient detected by the stepper.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double time, const std::string& what)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A required artifact (file, trajectory) is missing.
class MissingArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nsv
