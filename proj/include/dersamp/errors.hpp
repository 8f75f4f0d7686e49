#pragma once

#include <stdexcept>
#include <string>

namespace dersamp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the inputs of an operation was violated.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Numerical failure: the computation could not produce a trustworthy result.
class NumericalError : public Error {
public:
  using Error::Error;
};

class SingularMatrix : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class NotSymmetric : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class NoConvergence : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class DeltaTooLarge : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class IntegerCase : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class MissingKnownSample : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class LengthMismatch : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

} // namespace dersamp
