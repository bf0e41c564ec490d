#pragma once

#include <stdexcept>
#include <string>

namespace driftlab {

// Root of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter lies outside the domain where a formula or sampler is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Bad argument shapes: empty inputs, length mismatches, horizons past the data.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Model parameters that do not admit a stationary solution.
class StationarityError : public Error {
 public:
  using Error::Error;
};

// The model is well defined but not covered by the limit theory
// (boundary of a dichotomy, tail index outside (1, 2), ...).
class ClassificationError : public Error {
 public:
  using Error::Error;
};

// Numerical breakdown that must not be papered over.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A sample for which the statistic is undefined (zero variance, ...).
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

// Malformed experiment configuration. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace driftlab
