#pragma once

#include <stdexcept>
#include <string>

namespace drygame {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Empty or inverted interval, too few grid points, nonpositive horizon.
class InvalidRange : public Error {
 public:
  using Error::Error;
};

/// Query point outside the state grid.
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// The terminal set cannot be guaranteed from the initial state.
class NotReachable : public Error {
 public:
  using Error::Error;
};

/// A strategy was built for a different partition or grids than the game.
class StrategyMismatch : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed its node budget.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid configuration document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace drygame
