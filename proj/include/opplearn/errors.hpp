#ifndef OPPLEARN_ERRORS_HPP
#define OPPLEARN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace opplearn {

// Base for every library failure. Subclasses map onto CLI exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value lies outside the set on which a formula is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A running range is empty or degenerate for the requested scheme.
class RangeError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Caller violated a shape or dimension contract.
class ContractError : public Error {
 public:
  using Error::Error;
};

class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class InversionError : public Error {
 public:
  using Error::Error;
};

// Too many ground-truth opposites fell outside the function image.
class SchemeMismatchError : public Error {
 public:
  using Error::Error;
};

// Input file could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A result that should be finite was not.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace opplearn

#endif  // OPPLEARN_ERRORS_HPP
