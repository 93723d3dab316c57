#pragma once

#include <stdexcept>
#include <string>

namespace dslpn {

// Base of every error thrown by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not conform (A.cols != B.rows, wrong vector length, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// goodSparse gave up after maxRejects samples without meeting the dual-distance bound.
class RejectionExhausted : public Error {
 public:
  using Error::Error;
};

// Malformed or unsupported serialized data.
class FormatError : public Error {
 public:
  using Error::Error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw DomainError(what);
}

inline void requireDims(bool cond, const std::string& what) {
  if (!cond) throw DimensionError(what);
}

}  // namespace dslpn
