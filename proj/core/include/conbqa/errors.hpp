#pragma once

#include <stdexcept>
#include <string>

namespace conbqa {

/// A parameter was outside its documented range.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point or value lies outside the domain of the operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller broke a precondition (length mismatch, empty box, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Non-finite input reached a numerical routine.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem is too large for the requested algorithm.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class ExternalSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StatisticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed serialized input (JSON documents, interchange files).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace conbqa
