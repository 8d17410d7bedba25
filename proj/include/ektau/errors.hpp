#pragma once

#include <stdexcept>
#include <string>

namespace ektau {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point outside the model chart, or a constructor argument outside its range.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The special frame (or v, phi) is undefined at the requested point.
class FrameUndefined : public Error {
 public:
  using Error::Error;
};

// Operation refused because k - 4 tau^2 == 0.
class DegenerateSpace : public Error {
 public:
  using Error::Error;
};

class InconsistentData : public Error {
 public:
  using Error::Error;
};

// Newton, continuation or ODE integration could not make progress.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace ektau
