#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

namespace pikl {

// The numeric core runs in 64-bit real / 128-bit complex arithmetic only.
// Single precision loses enough of the kernel spectrum to make the
// effective-dimension estimates diverge, so it is rejected at compile time.
using real = double;
using cplx = std::complex<real>;
static_assert(std::is_same_v<real, double>, "pikl requires 64-bit floating point");
static_assert(sizeof(cplx) == 16, "pikl requires 128-bit complex numbers");

using VectorXr = Eigen::Matrix<real, Eigen::Dynamic, 1>;
using MatrixXr = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXc = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
using MatrixXc = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr real pi = 3.141592653589793238462643383279502884;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested mode set or matrix exceeds the configured size budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Vector/matrix/point dimensions do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument or configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A direct factorization broke down; carries the smallest pivot seen.
class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& what, real smallest_pivot)
      : Error(what), smallest_pivot_(smallest_pivot) {}
  real smallest_pivot() const noexcept { return smallest_pivot_; }

 private:
  real smallest_pivot_;
};

/// A numeric health check failed (residual, imaginary residue, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace pikl
