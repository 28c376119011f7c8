#pragma once

#include <stdexcept>
#include <string>

namespace tvgsr {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar parameter is outside its admissible range (k, density, epsilon, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data: non-finite values, mismatched shapes, asymmetric matrices.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Dense analysis requested on a problem larger than the dense guard allows.
class SizeGuardError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// File could not be opened, read, or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A solver produced a non-finite value.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, long iteration)
      : Error(what + " (iteration " + std::to_string(iteration) + ")"), iteration_(iteration) {}

  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

namespace detail {

inline void require_param(bool ok, const std::string& msg) {
  if (!ok) throw ParameterError(msg);
}

inline void require_input(bool ok, const std::string& msg) {
  if (!ok) throw InputError(msg);
}

inline std::string shape_str(long rows, long cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace detail
}  // namespace tvgsr
