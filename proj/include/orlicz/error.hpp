#pragma once

#include <stdexcept>
#include <string>

namespace orlicz {

// Numeric values match the C API status codes in orlicz.h.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Parse = 2,
  Numeric = 3,
  Hypothesis = 4,
  Property = 5,
  Domain = 6,
  Structure = 7,
  Precondition = 8,
  Io = 9,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Argument outside the mathematical domain of an operation (negative t, λ ≤ 0, ...).
class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

/// Objects that cannot be combined, e.g. random variables on different spaces.
class StructureError : public Error {
public:
  explicit StructureError(const std::string& what) : Error(ErrorCode::Structure, what) {}
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error(ErrorCode::Parse, what) {}
};

class NumericError : public Error {
public:
  explicit NumericError(const std::string& what) : Error(ErrorCode::Numeric, what) {}
};

/// A theorem hypothesis does not hold for the inputs (e.g. finite limit slope).
class HypothesisError : public Error {
public:
  explicit HypothesisError(const std::string& what) : Error(ErrorCode::Hypothesis, what) {}
};

class PreconditionError : public Error {
public:
  explicit PreconditionError(const std::string& what) : Error(ErrorCode::Precondition, what) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

}  // namespace orlicz
