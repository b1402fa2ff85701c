#pragma once

#include <stdexcept>
#include <string>

namespace frenkel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A precondition on the input values was violated (p < 1, bad interval, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The Jacobi sweep cap was reached without the off-diagonal mass vanishing.
class EigenNonConvergence : public Error {
 public:
  EigenNonConvergence(const std::string& what, double off_diagonal)
      : Error(what), off_diagonal_residual(off_diagonal) {}
  double off_diagonal_residual;
};

/// A spectral function was requested at an eigenvalue outside its domain.
class UndefinedSpectralFunction : public Error {
 public:
  UndefinedSpectralFunction(const std::string& what, double eigenvalue)
      : Error(what), offending_eigenvalue(eigenvalue) {}
  double offending_eigenvalue;
};

class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(const std::string& what, double min_eig)
      : Error(what), min_eigenvalue(min_eig) {}
  double min_eigenvalue;
};

class NotPositiveSemidefinite : public Error {
 public:
  NotPositiveSemidefinite(const std::string& what, double min_eig)
      : Error(what), min_eigenvalue(min_eig) {}
  double min_eigenvalue;
};

}  // namespace frenkel
