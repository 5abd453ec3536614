#ifndef CCM_ERROR_HPP_
#define CCM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ccm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value left its variable's declared domain.
class DomainError : public Error {
 public:
  DomainError(std::string variable, int value)
      : Error("value " + std::to_string(value) + " outside domain of '" +
              variable + "'"),
        variable_(std::move(variable)),
        value_(value) {}

  const std::string& variable() const { return variable_; }
  int value() const { return value_; }

 private:
  std::string variable_;
  int value_;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

// Static well-formedness failure of a program, annotation or declaration.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A configured resource limit was hit; results are never silently truncated.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

// Signals a bug in this library rather than a property of the input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccm

#endif  // CCM_ERROR_HPP_
