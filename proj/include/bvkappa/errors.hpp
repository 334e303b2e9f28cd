#pragma once

#include <stdexcept>
#include <string>

namespace bvk {

// Base of every failure raised by the library. A caller that only cares
// whether an enclosure could be produced catches this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an enclosure cannot be formed on the given input. Quadrature
// and bisection treat these as "split further".
class RigorError : public Error {
 public:
  using Error::Error;
};

class DivisorContainsZero : public RigorError {
 public:
  DivisorContainsZero() : RigorError("divisor ball contains zero") {}
};

class DomainError : public RigorError {
 public:
  using RigorError::RigorError;
};

class PoleAtOne : public DomainError {
 public:
  PoleAtOne() : DomainError("argument ball contains the pole s = 1") {}
};

class InsufficientN : public Error {
 public:
  using Error::Error;
};

class LimitTooLarge : public Error {
 public:
  using Error::Error;
};

class CutoffTooSmall : public Error {
 public:
  using Error::Error;
};

class DepthExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace bvk
