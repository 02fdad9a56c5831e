#pragma once

#include <stdexcept>
#include <cstddef>
#include <string>

namespace gcub {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad files, bad arguments, insufficient moment degree.
class InputError : public Error {
 public:
  using Error::Error;
};

// The numbers themselves defeat the computation: non positive-definite
// moment matrices, singular systems, degenerate spectra.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace gcub

namespace gcub {

// Moment matrix failed the pivot test of psd_cholesky.
class NotPositiveDefinite : public NumericalError {
 public:
  NotPositiveDefinite(const std::string& what, std::size_t pivot) : NumericalError(what), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

}  // namespace gcub
