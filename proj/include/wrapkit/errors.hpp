#pragma once

#include <stdexcept>
#include <string>

namespace wrapkit {

/// Base class of every error raised by the library. The CLI maps these to
/// exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown catalog identifier.
class CatalogError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the mathematical domain of an operation
/// (non-dominant weight, non-positive time, group mismatch).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A truncation or enumeration would exceed its configured hard cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A geodesic sum hit a translate where j vanishes, or H is singular.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A radial function lacks a contract (Fourier transform, decay bound)
/// needed by the requested operation, or its contracts disagree.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Quadrature grid or histogram too coarse for the requested accuracy.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Loss of accuracy during simulation or a failed eigen-decomposition.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace wrapkit
