#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sollab {

// Root of every failure raised by the library. Callers that only care about
// "did the numerics work" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
  SyntaxError(const std::string& message, std::size_t offset)
      : Error(message + " at byte " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class UnknownVariable : public Error {
public:
  explicit UnknownVariable(std::string name)
      : Error("unknown variable '" + name + "'"), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

// Evaluation left the domain of a node (ln of non-positive, division by zero,
// non-finite result, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

class SingularMetric : public Error {
public:
  using Error::Error;
};

class SignatureMismatch : public Error {
public:
  using Error::Error;
};

class NonPositiveWarping : public Error {
public:
  using Error::Error;
};

class NonPositiveEtaPrime : public Error {
public:
  using Error::Error;
};

class QuadratureFailure : public Error {
public:
  using Error::Error;
};

// Violated operation precondition (wrong mu for the residual, empty point set, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

}  // namespace sollab
