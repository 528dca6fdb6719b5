#pragma once

#include <stdexcept>
#include <string>

namespace isork {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Raised by the Cayley transform when (Id - nu/2) cannot be factored.
class SingularMatrix : public Error {
 public:
  SingularMatrix(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// The fixed-point iteration hit max_iter without meeting the tolerance.
/// Usually means h is outside the contraction regime of the iteration map.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, int iterations, double last_increment)
      : Error(what), iterations_(iterations), last_increment_(last_increment) {}

  int iterations() const { return iterations_; }
  double last_increment() const { return last_increment_; }

 private:
  int iterations_;
  double last_increment_;
};

/// A NaN or Inf appeared while iterating.
class Divergence : public Error {
 public:
  Divergence(const std::string& what, int iterations) : Error(what), iterations_(iterations) {}

  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

}  // namespace isork
