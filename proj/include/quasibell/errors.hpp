#pragma once

#include <stdexcept>
#include <string>

namespace quasibell {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonUnitDirection : Error {
  using Error::Error;
};

struct BlochOutOfBall : Error {
  using Error::Error;
};

struct OutOfRange : Error {
  using Error::Error;
};

struct WrongArity : Error {
  using Error::Error;
};

struct InconsistentMarginals : Error {
  using Error::Error;
};

struct TooManyFactors : Error {
  using Error::Error;
};

struct StepOutOfRange : Error {
  using Error::Error;
};

struct IndexOutOfRange : Error {
  using Error::Error;
};

struct EnumerationTooLarge : Error {
  using Error::Error;
};

struct NoViolation : Error {
  using Error::Error;
};

}  // namespace quasibell
