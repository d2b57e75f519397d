#pragma once

#include <stdexcept>
#include <string>

namespace unionbound {

// Base class for everything the library throws on bad input or
// mathematically impossible data.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed an argument outside an operation's domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// An input object violates its type invariants (asymmetric matrix,
// negative atom mass, malformed problem file, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// Some nonempty subset of the weights sums to zero.
class InvalidWeights : public Error {
 public:
  using Error::Error;
};

// A closed-form bound would divide by a non-positive quantity.
class DegenerateWeights : public Error {
 public:
  using Error::Error;
};

// The partial information cannot come from any probability space.
class InconsistentInfo : public Error {
 public:
  using Error::Error;
};

class NoFeasibleSubset : public Error {
 public:
  using Error::Error;
};

// Weight quantization flipped a threshold comparison.
class ResolutionTooCoarse : public Error {
 public:
  using Error::Error;
};

// The shared-atom mass x lies outside the feasible window.
class InfeasibleX : public Error {
 public:
  using Error::Error;
};

}  // namespace unionbound
