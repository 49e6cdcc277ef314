#pragma once

#include <stdexcept>
#include <string>

namespace thinfilm {

// Base for every error raised by the laboratory.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
public:
  using Error::Error;
};

// Invalid user input (parameters, initial data, files).
class InputError : public Error {
public:
  using Error::Error;
};

// Configuration document problems; carries the offending line (0 if none).
class ConfigError : public InputError {
public:
  ConfigError(const std::string& msg, int line = 0)
      : InputError(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

// A theorem / audit hypothesis that the caller must satisfy was violated.
class PreconditionError : public Error {
public:
  using Error::Error;
};

// Lemma hypotheses fail for the supplied data (e.g. Q(s1) >= 1).
class NotApplicableError : public Error {
public:
  using Error::Error;
};

class FitError : public Error {
public:
  using Error::Error;
};

// Implicit step could not be completed within the rejection budget.
class StepFailure : public Error {
public:
  StepFailure(const std::string& msg, double last_residual)
      : Error(msg), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

private:
  double last_residual_;
};

} // namespace thinfilm
