#pragma once

#include <stdexcept>
#include <string>

namespace vucrl {

/// Base class for all failures raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver hit its sweep cap before meeting its stopping rule.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A random environment generator exhausted its resampling budget.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// A computation was refused because its input exceeds a fixed size cap.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace vucrl
