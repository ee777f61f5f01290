#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bsmsentinel {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed row in a delimited input (wrong arity, unparsable number).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A field parsed but fell outside its domain.
class ValidationError : public Error {
 public:
  ValidationError(std::size_t line, std::string field, const std::string& what);
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Trace timestamps went backwards.
class OrderingError : public Error {
 public:
  OrderingError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Caller broke an operation precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Non-finite or otherwise unusable numeric input.
class InputError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// EM cannot fit data with no spread.
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

class InjectionError : public Error {
 public:
  using Error::Error;
};

/// Bad key or value in a key-value config file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace bsmsentinel
