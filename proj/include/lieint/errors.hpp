#pragma once

#include <stdexcept>
#include <string>

namespace lieint {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad structure constants, syntax errors, bad configs,
/// dimension mismatches. Maps to CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation could not produce its result. Maps to CLI exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Filesystem trouble. Maps to CLI exit code 3.
class IoError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ValidationError {
 public:
  DimensionMismatch(const std::string& what, std::size_t expected, std::size_t got)
      : ValidationError(what + ": expected dimension " + std::to_string(expected) + ", got " +
                        std::to_string(got)) {}
};

/// Indices are 1-based, as everywhere in user-facing output.
class AntisymmetryViolation : public ValidationError {
 public:
  AntisymmetryViolation(int i, int j, int k, double cij, double cji)
      : ValidationError("structure constants are not antisymmetric at (i,j,k)=(" + std::to_string(i) +
                        "," + std::to_string(j) + "," + std::to_string(k) + "): lambda_ij^k=" +
                        std::to_string(cij) + ", lambda_ji^k=" + std::to_string(cji)),
        i(i), j(j), k(k) {}
  int i, j, k;
};

class JacobiViolation : public ValidationError {
 public:
  JacobiViolation(int i, int j, int k, int r, double residual)
      : ValidationError("Jacobi identity fails at (i,j,k,r)=(" + std::to_string(i) + "," +
                        std::to_string(j) + "," + std::to_string(k) + "," + std::to_string(r) +
                        "), residual " + std::to_string(residual)),
        i(i), j(j), k(k), r(r), residual(residual) {}
  int i, j, k, r;
  double residual;
};

class SyntaxError : public ValidationError {
 public:
  SyntaxError(const std::string& message, std::size_t column)
      : ValidationError("syntax error at column " + std::to_string(column) + ": " + message),
        column(column) {}
  std::size_t column;  // 1-based
};

class UnboundVariable : public ValidationError {
 public:
  explicit UnboundVariable(const std::string& name)
      : ValidationError("unbound variable '" + name + "'"), name(name) {}
  std::string name;
};

/// Division by zero, sqrt of a negative number, or another non-finite result.
class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonInvertibleF : public NumericalError {
 public:
  NonInvertibleF(double t, double det)
      : NumericalError("fundamental solution became singular at t=" + std::to_string(t) +
                       " (det=" + std::to_string(det) + ")"),
        t(t), det(det) {}
  double t, det;
};

class EigenConvergenceFailure : public NumericalError {
 public:
  explicit EigenConvergenceFailure(int iterations)
      : NumericalError("QR iteration did not converge after " + std::to_string(iterations) +
                       " iterations"),
        iterations(iterations) {}
  int iterations;
};

class DomainExit : public NumericalError {
 public:
  DomainExit(double t, const std::string& where)
      : NumericalError("trajectory left the admissible region at t=" + std::to_string(t) + " " +
                       where),
        t(t) {}
  double t;
};

}  // namespace lieint
