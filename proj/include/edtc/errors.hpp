#pragma once

#include <stdexcept>
#include <string>

namespace edtc {

/// Base class for all domain errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonPositiveTimescale : public Error {
 public:
  using Error::Error;
};

class InconsistentT2 : public Error {
 public:
  using Error::Error;
};

class MagnetizationOutOfRange : public Error {
 public:
  using Error::Error;
};

class NegativeDuration : public Error {
 public:
  using Error::Error;
};

class NonPhysicalState : public Error {
 public:
  using Error::Error;
};

class ExponentialNotConverged : public Error {
 public:
  using Error::Error;
};

class TooFewSamples : public Error {
 public:
  using Error::Error;
};

class FitNotConverged : public Error {
 public:
  using Error::Error;
};

}  // namespace edtc
